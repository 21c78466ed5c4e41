"""Run the full numerical verification sweep and write JSON/CSV tables to a directory.

    python scripts/run_verification.py --out results/
"""

import argparse
import time
from pathlib import Path

from bosonproj import eigensolver as es
from bosonproj import fock
from bosonproj.report import (
    CLOSURE_CSV_COLUMNS,
    closure_long_rows,
    dumps_csv,
    dumps_json,
    ladder_rows,
)


def algebra(n_max: int, out: Path) -> None:
    t0 = time.perf_counter()
    gens = fock.build_generators(fock.enumerate_basis(n_max))
    closure = fock.closure_check(gens)
    ladder = fock.hamiltonian_ladder_check(gens)
    elapsed = time.perf_counter() - t0
    rows = closure_long_rows(closure) + ladder_rows(ladder, gens.labels)
    (out / f"algebra_n{n_max}.csv").write_text(dumps_csv(rows, CLOSURE_CSV_COLUMNS))
    print(f"algebra N_max={n_max}: max closure residual {max(r.residual for r in closure):.3e}, "
          f"max ladder residual {max(r.residual for r in ladder):.3e}, {elapsed:.1f} s")


def solvers(out: Path) -> None:
    rows = []
    for omega in (1.0, 2.0):
        for m in (0, 1):
            coarse = es.solve_parabolic_block(omega, m, es.RadialGrid(0.0, 30 / omega, 2000), 3)
            fine = es.solve_parabolic_block(omega, m, es.RadialGrid(0.0, 30 / omega, 4000), 3)
            rows += fine.with_estimate(es.richardson_estimate(coarse, fine)).rows()
    for z2 in (1.0, 2.0):
        for l in (0, 1):
            coarse = es.solve_coulomb_radial(z2, l, es.RadialGrid(0.0, 100 / z2, 4000), 3)
            fine = es.solve_coulomb_radial(z2, l, es.RadialGrid(0.0, 100 / z2, 8000), 3)
            rows += fine.with_estimate(es.richardson_estimate(coarse, fine)).rows()
    (out / "eigensolvers.json").write_text(dumps_json({"grids": "coarse N/2, fine N"}, rows))
    worst = max(r["rel_err"] for r in rows)
    print(f"eigensolvers: {len(rows)} levels, worst rel_err {worst:.3e}")


def duality(out: Path, omegas: list[float]) -> None:
    rows = []
    for w in omegas:
        rows += [{"omega": w, **r.to_dict()} for r in es.duality_check(w, 3)]
    (out / "duality.csv").write_text(dumps_csv(rows))
    print(f"duality: worst rel_err {max(r['rel_err'] for r in rows):.3e} over omega={omegas}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--nmax", type=int, nargs="+", default=[6, 8])
    ap.add_argument("--omega", type=float, nargs="+", default=[0.25, 0.5, 1.0])
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for n in args.nmax:
        algebra(n, args.out)
    solvers(args.out)
    duality(args.out, args.omega)


if __name__ == "__main__":
    main()
