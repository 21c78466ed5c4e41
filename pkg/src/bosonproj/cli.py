"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 numerical tolerance or
grid-refinement failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import eigensolver, fock, geometry, spectra
from .report import (
    CLOSURE_CSV_COLUMNS,
    closure_summary_rows,
    ladder_rows,
    render,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOLERANCE = 3

NMAX_RANGE = (4, 12)


class UsageError(ValueError):
    pass


def parse_int_range(text: str) -> list[int]:
    """'a..b' (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"malformed integer range {text!r}") from None


def parse_real_range(text: str) -> list[float]:
    """'a..b:K' (K log-spaced reals), or a single real."""
    try:
        if ".." in text:
            span, _, count = text.partition(":")
            a, b = (float(x) for x in span.split("..", 1))
            if not count:
                raise UsageError(f"real range {text!r} needs a point count, e.g. 1e-3..1e-1:20")
            k = int(count)
            if k < 1 or a <= 0 or b <= 0:
                raise UsageError(f"log range {text!r} needs positive ends and K >= 1")
            return [float(x) for x in np.geomspace(a, b, k)]
        return [float(text)]
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"malformed real range {text!r}") from None


def parse_spinor(text: str) -> tuple[float, float, float, float]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 4:
        raise UsageError(f"--xi needs exactly 4 comma-separated components, got {len(parts)}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"malformed spinor components {text!r}") from None
    if not all(np.isfinite(vals)):
        raise UsageError("spinor components must be finite")
    return vals


@dataclass
class RunConfig:
    command: str
    output: str = "text"
    out_path: str | None = None
    params: dict = field(default_factory=dict)


def _check_tol(name: str, value: float) -> None:
    if not value >= 0:
        raise UsageError(f"--{name} must be non-negative, got {value}")


def cmd_verify_algebra(cfg: RunConfig):
    p = cfg.params
    n_max = p["nmax"]
    if not NMAX_RANGE[0] <= n_max <= NMAX_RANGE[1]:
        raise UsageError(f"--nmax must lie in [{NMAX_RANGE[0]}, {NMAX_RANGE[1]}], got {n_max}")
    _check_tol("tol-closure", p["tol_closure"])
    _check_tol("tol-ladder", p["tol_ladder"])
    gens = fock.build_generators(fock.enumerate_basis(n_max))
    closure = fock.closure_check(gens, p["margin"])
    ladder = fock.hamiltonian_ladder_check(gens, p["margin"])
    max_c = max(r.residual for r in closure)
    max_l = max(r.residual for r in ladder)
    ok = max_c <= p["tol_closure"] and max_l <= p["tol_ladder"]
    meta = {"command": "verify-algebra", "n_max": n_max, "margin": p["margin"],
            "coefficient_order": list(gens.labels) + [fock.IDENTITY_LABEL],
            "max_closure_residual": max_c, "max_ladder_residual": max_l,
            "tol_closure": p["tol_closure"], "tol_ladder": p["tol_ladder"], "pass": ok}
    if cfg.output == "json":
        rows = [{"check": "closure", **r.to_dict()} for r in closure]
        rows += [{"check": "ladder", **r.to_dict()} for r in ladder]
        cols = None
    else:
        rows = closure_summary_rows(closure) + ladder_rows(ladder, gens.labels)
        cols = CLOSURE_CSV_COLUMNS
    return meta, rows, cols, ok


SPECTRUM_COLUMNS = ["n", "l_or_k", "kind", "term1", "term2", "term3", "term4", "value"]


def cmd_spectrum(cfg: RunConfig):
    p = cfg.params
    mode = p["mode"]
    levels: list[spectra.EnergyLevel] = []
    QN = spectra.QuantumNumbers
    if mode == "oscillator":
        for n_r in parse_int_range(p["nr"]):
            for l in parse_int_range(p["l"]):
                z2 = spectra.oscillator_level(p["omega"], n_r, l)
                levels.append(spectra.EnergyLevel(QN(n=n_r + l + 1, n_r=n_r, l=l), z2, "oscillator"))
    elif mode == "hydrogen":
        for n in parse_int_range(p["n"]):
            levels.append(spectra.EnergyLevel(QN(n=n), spectra.hydrogen_level(p["z2"], n), "hydrogen"))
    elif mode == "kg":
        a2 = -p["gamma"] ** 2
        for n in parse_int_range(p["n"]):
            levels.append(spectra.EnergyLevel(QN(n=n), spectra.kg_energy(p["m1"], a2, n), "kg_exact"))
    elif mode == "mass":
        a2 = -p["gamma"] ** 2
        for n in parse_int_range(p["n"]):
            levels.append(spectra.EnergyLevel(QN(n=n), spectra.mass_level(p["ztilde2"], a2, n), "mass"))
    elif mode == "fine":
        for n in parse_int_range(p["n"]):
            for k in parse_int_range(p["k"]):
                levels.append(spectra.fine_structure_series(p["m"], p["gamma"], n, k))
    else:
        raise UsageError(f"unknown mode {mode!r}")
    meta = {"command": "spectrum", "mode": mode}
    return meta, [lv.to_row() for lv in levels], SPECTRUM_COLUMNS, True


DUALITY_COLUMNS = ["n", "z2_numeric", "e_coulomb", "minus_4w2", "rel_err"]


def cmd_duality(cfg: RunConfig):
    p = cfg.params
    if p["omega"] <= 0:
        raise UsageError("--omega must be positive")
    if p["levels"] < 1:
        raise UsageError("--levels must be >= 1")
    if p["grid_n"] < 16:
        raise UsageError("--grid-n must be >= 16")
    _check_tol("tol", p["tol"])
    rows = eigensolver.duality_check(p["omega"], p["levels"], p["grid_n"], p["u_max"], p["r_max"])
    worst = max(r.rel_err for r in rows)
    ok = worst <= p["tol"]
    meta = {"command": "duality", "omega": p["omega"], "levels": p["levels"],
            "grid_n": p["grid_n"], "max_rel_err": worst, "tol": p["tol"], "pass": ok}
    return meta, [r.to_dict() for r in rows], DUALITY_COLUMNS, ok


MAP_COLUMNS = ["x1", "x2", "x3", "r", "R", "u", "v", "phi", "z", "rho",
               "h1", "h2", "h3", "norm_residual"]


def cmd_map(cfg: RunConfig):
    xi = geometry.Spinor4(parse_spinor(cfg.params["xi"]))
    x = geometry.hopf_map(xi)
    r = float(np.linalg.norm(x))
    phys = 0.5 * x
    pp = geometry.to_parabolic(phys)
    z, rho, phi = geometry.parabolic_to_cylindrical(pp)
    row = {"x1": float(x[0]), "x2": float(x[1]), "x3": float(x[2]), "r": r, "R": 0.5 * r,
           "u": pp.u, "v": pp.v, "phi": pp.phi, "z": z, "rho": rho}
    if pp.u > 0 and pp.v > 0:
        lame = geometry.lame_coefficients(pp.u, pp.v)
        row.update(h1=lame.h1, h2=lame.h2, h3=lame.h3)
    else:
        row.update(h1=None, h2=None, h3=None)
    row["norm_residual"] = abs(r - xi.norm_sq)
    meta = {"command": "map", "xi": list(xi.xi)}
    return meta, [row], MAP_COLUMNS, True


FINE_COLUMNS = ["gamma", "e_series", "e_exact", "residual"]


def cmd_report_fine(cfg: RunConfig):
    p = cfg.params
    grid = parse_real_range(p["gamma"])
    rep = spectra.series_vs_exact_report(p["m"], p["n"], p["k"], grid)
    meta = {"command": "report-fine", "m": p["m"], "n": p["n"], "k": p["k"],
            "fitted_order": rep.order}
    return meta, rep.rows(), FINE_COLUMNS, True


COMMANDS = {
    "verify-algebra": cmd_verify_algebra,
    "spectrum": cmd_spectrum,
    "duality": cmd_duality,
    "map": cmd_map,
    "report-fine": cmd_report_fine,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bosonproj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", dest="output", choices=["text", "json", "csv"], default="text")
        sp.add_argument("--out", dest="out_path", default=None, help="write to file instead of stdout")

    sp = sub.add_parser("verify-algebra", help="closure and [H, X] checks of the 15 generators")
    sp.add_argument("--nmax", type=int, default=8)
    sp.add_argument("--margin", type=int, default=2)
    sp.add_argument("--tol-closure", type=float, default=1e-10)
    sp.add_argument("--tol-ladder", type=float, default=1e-12)
    common(sp)

    sp = sub.add_parser("spectrum", help="closed-form spectrum tables")
    sp.add_argument("--mode", choices=["oscillator", "hydrogen", "kg", "mass", "fine"], default="hydrogen")
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--z2", type=float, default=1.0)
    sp.add_argument("--m", type=float, default=1.0, help="mass scale of the fine-structure series")
    sp.add_argument("--m1", type=float, default=1.0)
    sp.add_argument("--ztilde2", type=float, default=2.0)
    sp.add_argument("--gamma", type=float, default=0.1)
    sp.add_argument("--n", default="1..3", help="integer or a..b")
    sp.add_argument("--nr", default="0..2")
    sp.add_argument("--l", default="0..2")
    sp.add_argument("--k", default="1")
    common(sp)

    sp = sub.add_parser("duality", help="numeric oscillator -> Coulomb duality table")
    sp.add_argument("--omega", type=float, default=0.5)
    sp.add_argument("--levels", type=int, default=2)
    sp.add_argument("--grid-n", type=int, default=6000)
    sp.add_argument("--u-max", type=float, default=None)
    sp.add_argument("--r-max", type=float, default=None)
    sp.add_argument("--tol", type=float, default=5e-4)
    common(sp)

    sp = sub.add_parser("map", help="spinor -> 3-space coordinate chain for one point")
    sp.add_argument("--xi", default="1,0,0,0", help="four comma-separated reals (use --xi=-1,... for a leading minus)")
    common(sp)

    sp = sub.add_parser("report-fine", help="fine-structure series against the exact chain")
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--gamma", default="1e-3..1e-1:20", help="real or a..b:K log-spaced")
    common(sp)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "output", "out_path")}
    return RunConfig(ns.command, ns.output, ns.out_path, params)


def run(cfg: RunConfig) -> int:
    meta, rows, cols, ok = COMMANDS[cfg.command](cfg)
    text = render(cfg.output, meta, rows, cols)
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.output == "csv" and cfg.command == "report-fine":
        print(f"fitted residual order p = {meta['fitted_order']}", file=sys.stderr)
    if not ok:
        print(f"{cfg.command}: tolerance check failed", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = config_from_args(ns)
    try:
        return run(cfg)
    except eigensolver.GridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
