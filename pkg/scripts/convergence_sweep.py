"""Grid-doubling sweep for the parabolic and Coulomb solvers: relative error
and successive error ratios (about 4 for a second-order stencil)."""

import argparse

from bosonproj import eigensolver as es


def sweep(label, solve, sizes):
    errs = [solve(n).rel_err for n in sizes]
    print(label)
    for i, (n, e) in enumerate(zip(sizes, errs)):
        ratio = "" if i == 0 else "  ratio " + " ".join(f"{r:6.3f}" for r in errs[i - 1] / e)
        print(f"  N={n:>6}  rel_err " + " ".join(f"{x:.3e}" for x in e) + ratio)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--start", type=int, default=750, help="parabolic starting N")
    ap.add_argument("--coulomb-start", type=int, default=1500, help="Coulomb starting N (>= 1200)")
    ap.add_argument("--doublings", type=int, default=4)
    args = ap.parse_args()
    sizes = [args.start * 2**i for i in range(args.doublings + 1)]
    coulomb_sizes = [args.coulomb_start * 2**i for i in range(args.doublings + 1)]

    for omega, m in [(1.0, 0), (1.0, 1)]:
        sweep(f"parabolic omega={omega} m={m}",
              lambda n: es.solve_parabolic_block(omega, m, es.RadialGrid(0.0, 30 / omega, n), args.levels),
              sizes)
    for z2 in (1.0, 2.0):
        sweep(f"coulomb Z^2={z2} l=0",
              lambda n: es.solve_coulomb_radial(z2, 0, es.RadialGrid(0.0, 60 / z2, n), args.levels),
              coulomb_sizes)


if __name__ == "__main__":
    main()
