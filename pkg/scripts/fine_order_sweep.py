"""Measure the residual order of the fine-structure series against the exact
composition chain over a gamma sweep, for several (n, k)."""

import argparse

import numpy as np

from bosonproj.spectra import series_vs_exact_report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--gamma-min", type=float, default=1e-3)
    ap.add_argument("--gamma-max", type=float, default=1e-1)
    ap.add_argument("--points", type=int, default=20)
    args = ap.parse_args()

    gammas = np.geomspace(args.gamma_min, args.gamma_max, args.points)
    print(f"{'n':>3} {'k':>3} {'fitted order':>13} {'residual @ max gamma':>21}")
    for n, k in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]:
        rep = series_vs_exact_report(args.m, n, k, gammas)
        order = "n/a" if rep.order is None else f"{rep.order:.3f}"
        print(f"{n:>3} {k:>3} {order:>13} {rep.points[-1].residual:>21.3e}")


if __name__ == "__main__":
    main()
