"""Finite-difference Sturm-Liouville solvers for the separated parabolic
oscillator blocks and the radial Coulomb problem, and the composed
oscillator -> Coulomb duality check.

All operators are assembled as symmetric tridiagonal matrices and diagonalised
with LAPACK's tridiagonal routine (scipy.linalg.eigh_tridiagonal).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

# decay lengths kept beyond the outermost classical turning point
TAIL_MARGIN = 15.0
# grid step per natural length scale
MAX_SCALED_STEP = 0.05


class GridError(ValueError):
    """Grid too short or too coarse for the requested levels; refine it."""


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid on [r_min, r_max] with N interior points.

    r_min = 0 is allowed: both solvers place the singular point on a boundary
    face and never evaluate coefficients there.
    """

    r_min: float
    r_max: float
    N: int

    def __post_init__(self):
        if not 0 <= self.r_min < self.r_max:
            raise ValueError(f"need 0 <= r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if self.N < 16:
            raise ValueError(f"N must be >= 16, got {self.N}")

    @property
    def step(self) -> float:
        return (self.r_max - self.r_min) / (self.N + 1)

    def nodes(self) -> np.ndarray:
        """Interior nodes; the two ends carry Dirichlet conditions."""
        return self.r_min + self.step * np.arange(1, self.N + 1)

    @property
    def cell_width(self) -> float:
        return (self.r_max - self.r_min) / self.N

    def cells(self) -> tuple[np.ndarray, np.ndarray]:
        """(centres, faces) of N equal cells covering [r_min, r_max]."""
        h = self.cell_width
        faces = self.r_min + h * np.arange(self.N + 1)
        return faces[:-1] + 0.5 * h, faces

    def refined(self, factor: int = 2) -> RadialGrid:
        return RadialGrid(self.r_min, self.r_max, self.N * factor)


@dataclass(frozen=True)
class TridiagonalOperator:
    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        if len(self.off) != len(self.diag) - 1:
            raise ValueError("off-diagonal must have length N - 1")
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.off))):
            raise ValueError("non-finite operator entries")

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    def lowest(self, count: int) -> np.ndarray:
        count = min(count, len(self.diag))
        return eigh_tridiagonal(
            self.diag, self.off, eigvals_only=True, select="i", select_range=(0, count - 1)
        )


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    grid: RadialGrid
    problem: dict
    analytic: np.ndarray
    est_error: np.ndarray | None = field(default=None)

    @property
    def rel_err(self) -> np.ndarray:
        return np.abs(self.eigenvalues - self.analytic) / np.abs(self.analytic)

    def with_estimate(self, est: np.ndarray) -> EigenResult:
        return EigenResult(self.eigenvalues, self.grid, self.problem, self.analytic, est)

    def rows(self) -> list[dict]:
        params = {k: v for k, v in self.problem.items() if k != "type"}
        out = []
        for i, lam in enumerate(self.eigenvalues):
            row = {"problem": self.problem["type"], **params, "level_index": i,
                   "eigenvalue": float(lam), "analytic": float(self.analytic[i]),
                   "rel_err": float(self.rel_err[i])}
            row["est_error"] = None if self.est_error is None else float(self.est_error[i])
            out.append(row)
        return out


def parabolic_operator(omega: float, m_phi: int, grid: RadialGrid) -> TridiagonalOperator:
    """Discretise -(u U')' + m^2/(4u) U + omega^2 u U = beta U.

    With U = u^{|m|/2} f the problem becomes
    -(u^{|m|+1} f')' + omega^2 u^{|m|+1} f = beta u^{|m|} f, whose flux vanishes
    at u = 0 for every m (the regular solution).  Cell-centred finite volumes
    with a zero-flux face at u = 0, a Dirichlet face at u_max, and the diagonal
    weight scaled out symmetrically.
    """
    if grid.r_min != 0:
        raise GridError("parabolic grid must start at u = 0")
    a = abs(m_phi)
    u, faces = grid.cells()
    h = grid.cell_width
    p = faces ** (a + 1)
    weight = u**a
    diag = (p[:-1] + p[1:]) / h**2 + omega**2 * u ** (a + 1)
    off = -p[1:-1] / h**2
    s = 1.0 / np.sqrt(weight)
    return TridiagonalOperator(diag * s * s, off * s[:-1] * s[1:])


def parabolic_targets(omega: float, m_phi: int, count: int) -> np.ndarray:
    return omega * (2 * np.arange(count) + abs(m_phi) + 1.0)


def validate_parabolic_grid(omega: float, m_phi: int, grid: RadialGrid, count: int) -> None:
    top = (2 * (count - 1) + abs(m_phi) + 1)
    # scaled variable t = omega u: turning point at t = beta/omega, decay e^{-t}
    if omega * grid.r_max < top + TAIL_MARGIN:
        raise GridError(
            f"u_max = {grid.r_max} too short for {count} levels at omega={omega}: "
            f"need u_max >= {(top + TAIL_MARGIN) / omega:.4g}"
        )
    if omega * grid.cell_width > MAX_SCALED_STEP:
        raise GridError(
            f"grid too coarse: omega * h = {omega * grid.cell_width:.3g} > {MAX_SCALED_STEP}; "
            f"increase N to at least {int(np.ceil(omega * grid.r_max / MAX_SCALED_STEP))}"
        )


def solve_parabolic_block(omega: float, m_phi: int, grid: RadialGrid, count: int) -> EigenResult:
    if omega <= 0:
        raise ValueError("omega must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    validate_parabolic_grid(omega, m_phi, grid, count)
    vals = parabolic_operator(omega, m_phi, grid).lowest(count)
    return EigenResult(
        vals, grid, {"type": "parabolic", "omega": omega, "m_phi": m_phi},
        parabolic_targets(omega, m_phi, len(vals)),
    )


@dataclass(frozen=True)
class OscillatorLevel:
    n_u: int
    n_v: int
    n: int
    z2: float
    z2_analytic: float

    @property
    def rel_err(self) -> float:
        return abs(self.z2 - self.z2_analytic) / self.z2_analytic


def assemble_oscillator_levels(
    beta_u: EigenResult, beta_v: EigenResult, m_phi: int, rtol: float = 1e-3
) -> list[OscillatorLevel]:
    """Z^2 = beta_u + beta_v for every pair, with n = n_u + n_v + |m| + 1; checks Z^2 ~ 2 omega n."""
    for r in (beta_u, beta_v):
        if r.problem.get("type") != "parabolic":
            raise ValueError("expected parabolic block results")
        if r.problem["m_phi"] != m_phi:
            raise ValueError(f"block solved for m_phi={r.problem['m_phi']}, expected {m_phi}")
    omega = beta_u.problem["omega"]
    if beta_v.problem["omega"] != omega:
        raise ValueError(
            f"mismatched omega: {omega} vs {beta_v.problem['omega']}"
        )
    levels = []
    for i, bu in enumerate(beta_u.eigenvalues):
        for j, bv in enumerate(beta_v.eigenvalues):
            n = i + j + abs(m_phi) + 1
            lvl = OscillatorLevel(i, j, n, float(bu + bv), 2.0 * omega * n)
            if lvl.rel_err > rtol:
                raise ValueError(
                    f"Z^2 = {lvl.z2} for (n_u, n_v) = ({i}, {j}) misses 2 omega n = {lvl.z2_analytic}"
                )
            levels.append(lvl)
    return sorted(levels, key=lambda x: (x.n, x.n_u))


def coulomb_operator(Z2: float, l: int, grid: RadialGrid) -> TridiagonalOperator:
    """-w'' + [l(l+1)/R^2 - 2 Z^2/R] w with Dirichlet ends, three-point stencil."""
    r = grid.nodes()
    h = grid.step
    diag = 2.0 / h**2 + l * (l + 1) / r**2 - 2.0 * Z2 / r
    off = np.full(grid.N - 1, -1.0 / h**2)
    return TridiagonalOperator(diag, off)


def coulomb_targets(Z2: float, l: int, count: int) -> np.ndarray:
    n = np.arange(count) + l + 1
    return -(Z2**2) / n**2.0


def validate_coulomb_grid(Z2: float, l: int, grid: RadialGrid, count: int) -> None:
    n_top = l + count
    need = 6.0 * n_top**2 / Z2
    if grid.r_max < need:
        raise GridError(
            f"r_max = {grid.r_max} too short for n = {n_top} at Z^2 = {Z2}: need r_max >= {need:.4g}"
        )
    if grid.step * Z2 > MAX_SCALED_STEP:
        raise GridError(
            f"grid too coarse: Z^2 * h = {grid.step * Z2:.3g} > {MAX_SCALED_STEP}; refine N"
        )


def solve_coulomb_radial(Z2: float, l: int, grid: RadialGrid, count: int) -> EigenResult:
    if Z2 <= 0:
        raise ValueError("Z2 must be positive")
    if l < 0:
        raise ValueError("l must be non-negative")
    if count < 1:
        raise ValueError("count must be >= 1")
    validate_coulomb_grid(Z2, l, grid, count)
    vals = coulomb_operator(Z2, l, grid).lowest(count)
    return EigenResult(
        vals, grid, {"type": "coulomb", "Z2": Z2, "l": l}, coulomb_targets(Z2, l, len(vals))
    )


def richardson_estimate(coarse: EigenResult, fine: EigenResult) -> np.ndarray:
    """|lambda_fine - lambda_coarse| / 3 per level (second-order remainder)."""
    if len(coarse.eigenvalues) != len(fine.eigenvalues):
        raise ValueError(
            f"level count mismatch: {len(coarse.eigenvalues)} vs {len(fine.eigenvalues)}"
        )
    if fine.grid.N != 2 * coarse.grid.N or (fine.grid.r_min, fine.grid.r_max) != (
        coarse.grid.r_min, coarse.grid.r_max
    ):
        raise ValueError("fine grid must double N on the same domain")
    return np.abs(fine.eigenvalues - coarse.eigenvalues) / 3.0


@dataclass(frozen=True)
class DualityRow:
    n: int
    z2_numeric: float
    e_coulomb: float
    minus_4w2: float

    @property
    def rel_err(self) -> float:
        return abs(self.e_coulomb - self.minus_4w2) / abs(self.minus_4w2)

    def to_dict(self) -> dict:
        return {"n": self.n, "z2_numeric": self.z2_numeric, "e_coulomb": self.e_coulomb,
                "minus_4w2": self.minus_4w2, "rel_err": self.rel_err}


def default_extent(omega: float) -> float:
    # both the oscillator blocks and the Coulomb states of level n at Z^2 = 2 omega n
    # decay on the length scale 1/omega
    return 30.0 / omega


def duality_check(
    omega: float,
    levels: int,
    grid_n: int = 6000,
    u_max: float | None = None,
    r_max: float | None = None,
) -> list[DualityRow]:
    """For n = 1..levels: Z^2 from the oscillator blocks at fixed omega, then the
    Coulomb level n at that coupling, compared with -4 omega^2.

    Uses m_phi = 0 and (n_u, n_v) = (n - 1, 0); the Coulomb level is taken in the
    l = 0 channel.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if omega <= 0:
        raise ValueError("omega must be positive")
    u_max = u_max or default_extent(omega)
    r_max = r_max or default_extent(omega)
    block = solve_parabolic_block(omega, 0, RadialGrid(0.0, u_max, grid_n), levels)
    osc = {(lv.n_u, lv.n_v): lv for lv in assemble_oscillator_levels(block, block, 0)}
    rows = []
    for n in range(1, levels + 1):
        z2 = osc[(n - 1, 0)].z2
        coul = solve_coulomb_radial(z2, 0, RadialGrid(0.0, r_max, grid_n), n)
        rows.append(DualityRow(n, z2, float(coul.eigenvalues[n - 1]), -4.0 * omega**2))
    return rows
