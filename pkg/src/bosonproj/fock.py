"""Truncated Fock space for four boson modes and the fifteen bilinear generators.

Modes 1, 2 carry the undotted spinor index s = 1, 2 and modes 3, 4 the dotted
index s-dot = 1, 2.  Operators are dense complex matrices in a graded
lexicographic basis of all occupation vectors with total quanta <= N_max.
Truncation corrupts rows near the cutoff, so identities are checked after
projecting onto the interior (total quanta <= N_max - margin).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, sqrt

import numpy as np

N_MODES = 4
MAX_NMAX = 12

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

UNDOTTED = (0, 1)
DOTTED = (2, 3)

GENERATOR_LABELS = (
    "M_1", "M_2", "M_3",
    "M+_1", "M+_2", "M+_3",
    "Na_1", "Na_2", "Na_3",
    "Nb_1", "Nb_2", "Nb_3",
    "P", "P+",
)
# 14 bilinears above plus H make the fifteen generators
ALL_LABELS = GENERATOR_LABELS + ("H",)
IDENTITY_LABEL = "I"


class DegenerateTruncationError(ValueError):
    """The truncated space is too small for a well-posed closure fit."""


OccupationVector = tuple[int, int, int, int]


@dataclass(frozen=True)
class TruncatedFockSpace:
    n_max: int
    basis: tuple[OccupationVector, ...]
    index: dict[OccupationVector, int] = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def totals(self) -> np.ndarray:
        return np.array([sum(n) for n in self.basis])

    def interior_mask(self, margin: int) -> np.ndarray:
        return self.totals <= self.n_max - margin

    def state(self, occupation) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index[tuple(occupation)]] = 1.0
        return vec


@dataclass(frozen=True)
class OperatorMatrix:
    label: str
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"{self.label}: operator matrix must be square, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError(f"{self.label}: non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def H(self) -> OperatorMatrix:
        return OperatorMatrix(f"{self.label}^dag", self.entries.conj().T)

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        _check_dims(self, other)
        return OperatorMatrix(f"{self.label}{other.label}", self.entries @ other.entries)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.entries @ vec


@dataclass(frozen=True)
class GeneratorSet:
    space: TruncatedFockSpace
    omega: float
    generators: dict[str, OperatorMatrix]
    hamiltonian: OperatorMatrix

    def __post_init__(self):
        if len(self.generators) + 1 != 15:
            raise ValueError("expected 14 bilinear generators plus H")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.generators) + (self.hamiltonian.label,)

    def all(self) -> list[OperatorMatrix]:
        """The fifteen generators in canonical order, H last."""
        return list(self.generators.values()) + [self.hamiltonian]

    def __getitem__(self, label: str) -> OperatorMatrix:
        if label == self.hamiltonian.label:
            return self.hamiltonian
        return self.generators[label]


@dataclass(frozen=True)
class ClosureReport:
    pair: tuple[str, str]
    coefficients: np.ndarray
    residual: float

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "residual": float(self.residual),
        }


@dataclass(frozen=True)
class LadderRow:
    label: str
    c: complex
    residual: float

    def to_dict(self) -> dict:
        return {
            "pair": ["H", self.label],
            "coefficients": [[float(self.c.real), float(self.c.imag)]],
            "residual": float(self.residual),
        }


def _check_dims(a: OperatorMatrix, b: OperatorMatrix) -> None:
    if a.dim != b.dim:
        raise ValueError(
            f"incompatible spaces: {a.label} has dim {a.dim}, {b.label} has dim {b.dim}"
        )


def enumerate_basis(n_max: int) -> TruncatedFockSpace:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max > MAX_NMAX:
        raise ValueError(f"n_max={n_max} exceeds configured limit {MAX_NMAX}")
    basis = []
    for total in range(n_max + 1):
        shell = [n for n in itertools.product(range(total + 1), repeat=N_MODES) if sum(n) == total]
        basis.extend(sorted(shell))
    basis = tuple(basis)
    assert len(basis) == comb(n_max + N_MODES, N_MODES)
    return TruncatedFockSpace(n_max, basis, {n: i for i, n in enumerate(basis)})


def ladder(space: TruncatedFockSpace, mode: int, kind: str) -> OperatorMatrix:
    """Matrix of a_mode (kind='lower') or a+_mode (kind='raise'); mode is 1-based.

    Raising out of the truncated space is dropped.
    """
    if mode not in (1, 2, 3, 4):
        raise ValueError(f"mode must be 1..4, got {mode}")
    if kind not in ("lower", "raise"):
        raise ValueError(f"kind must be 'lower' or 'raise', got {kind!r}")
    k = mode - 1
    a = np.zeros((space.dim, space.dim), dtype=complex)
    for col, n in enumerate(space.basis):
        if n[k] == 0:
            continue
        m = n[:k] + (n[k] - 1,) + n[k + 1:]
        a[space.index[m], col] = sqrt(n[k])
    if kind == "lower":
        return OperatorMatrix(f"a_{mode}", a)
    return OperatorMatrix(f"a+_{mode}", a.T.copy())


def build_generators(space: TruncatedFockSpace, omega: float = 1.0) -> GeneratorSet:
    if omega <= 0:
        raise ValueError("omega must be positive")
    lo = [ladder(space, i, "lower").entries for i in range(1, 5)]
    up = [ladder(space, i, "raise").entries for i in range(1, 5)]
    dim = space.dim

    gens: dict[str, np.ndarray] = {}
    for lam, sig in enumerate(PAULI, start=1):
        # M_l = (sigma_l)_{sd t} a_t a_sd
        m = np.zeros((dim, dim), dtype=complex)
        for j, sd in enumerate(DOTTED):
            for i, t in enumerate(UNDOTTED):
                m += sig[j, i] * (lo[t] @ lo[sd])
        gens[f"M_{lam}"] = m
    for lam, sig in enumerate(PAULI, start=1):
        # adjoint of M_l, written with raising operators so it is exact in the interior
        mp = np.zeros((dim, dim), dtype=complex)
        for j, sd in enumerate(DOTTED):
            for i, t in enumerate(UNDOTTED):
                mp += np.conj(sig[j, i]) * (up[sd] @ up[t])
        gens[f"M+_{lam}"] = mp
    for lam, sig in enumerate(PAULI, start=1):
        na = np.zeros((dim, dim), dtype=complex)
        for i, s in enumerate(UNDOTTED):
            for j, t in enumerate(UNDOTTED):
                na += sig[i, j] * (up[s] @ lo[t])
        gens[f"Na_{lam}"] = na
    for lam, sig in enumerate(PAULI, start=1):
        # (sigma_l)_{sd td} a+_td a_sd, index order as printed
        nb = np.zeros((dim, dim), dtype=complex)
        for i, sd in enumerate(DOTTED):
            for j, td in enumerate(DOTTED):
                nb += sig[i, j] * (up[td] @ lo[sd])
        gens[f"Nb_{lam}"] = nb
    gens["P"] = lo[0] @ lo[2] + lo[1] @ lo[3]
    gens["P+"] = up[0] @ up[2] + up[1] @ up[3]
    h = 2.0 * np.eye(dim) + sum(up[i] @ lo[i] for i in range(4))

    return GeneratorSet(
        space=space,
        omega=float(omega),
        generators={k: OperatorMatrix(k, v) for k, v in gens.items()},
        hamiltonian=OperatorMatrix("H", h),
    )


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    _check_dims(a, b)
    return OperatorMatrix(
        f"[{a.label},{b.label}]", a.entries @ b.entries - b.entries @ a.entries
    )


def interior_project(space: TruncatedFockSpace, a: OperatorMatrix, margin: int) -> OperatorMatrix:
    if not 0 <= margin <= space.n_max:
        raise ValueError(f"margin must lie in [0, {space.n_max}], got {margin}")
    keep = space.interior_mask(margin)
    out = np.zeros_like(a.entries)
    out[np.ix_(keep, keep)] = a.entries[np.ix_(keep, keep)]
    return OperatorMatrix(a.label, out)


def quanta_shift(space: TruncatedFockSpace, a: OperatorMatrix, atol: float = 0.0) -> set[int]:
    """Set of total-quanta changes appearing among the nonzero matrix elements."""
    rows, cols = np.nonzero(np.abs(a.entries) > atol)
    totals = space.totals
    return set((totals[rows] - totals[cols]).tolist())


def _interior_block(space: TruncatedFockSpace, a: np.ndarray, margin: int) -> np.ndarray:
    keep = space.interior_mask(margin)
    return a[np.ix_(keep, keep)]


def _interior_commutator(
    space: TruncatedFockSpace, a: OperatorMatrix, b: OperatorMatrix, margin: int
) -> np.ndarray:
    # only the interior block of AB - BA is needed; skip the rest of the product
    keep = space.interior_mask(margin)
    A, B = a.entries, b.entries
    return A[keep] @ B[:, keep] - B[keep] @ A[:, keep]


def _check_margin(gens: GeneratorSet, margin: int) -> None:
    if margin < 2:
        raise ValueError("margin must be >= 2: generators shift total quanta by up to 2")
    if margin > gens.space.n_max:
        raise ValueError(f"margin {margin} exceeds n_max {gens.space.n_max}")


def expansion_basis(gens: GeneratorSet, margin: int) -> np.ndarray:
    """Columns are the interior blocks of the 15 generators and the identity, flattened."""
    space = gens.space
    mats = [g.entries for g in gens.all()] + [np.eye(space.dim, dtype=complex)]
    return np.stack([_interior_block(space, m, margin).ravel() for m in mats], axis=1)


def closure_check(gens: GeneratorSet, margin: int = 2) -> list[ClosureReport]:
    """Expand every pairwise commutator over {15 generators, I} by least squares.

    Returns 105 reports in canonical pair order; coefficients are indexed like
    ``gens.labels`` with the identity last.
    """
    _check_margin(gens, margin)
    space = gens.space
    if space.n_max < 4:
        raise DegenerateTruncationError(
            f"n_max={space.n_max} too small for a closure fit; need n_max >= 4"
        )
    design = expansion_basis(gens, margin)
    sv = np.linalg.svd(design, compute_uv=False)
    if sv[-1] < 1e-8 * sv[0]:
        raise DegenerateTruncationError(
            f"generator basis is rank deficient on the interior (smallest singular value {sv[-1]:.3e})"
        )

    ops = gens.all()
    pairs = list(itertools.combinations(range(len(ops)), 2))
    rhs = np.stack(
        [_interior_commutator(space, ops[i], ops[j], margin).ravel() for i, j in pairs], axis=1
    )
    coeffs, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    resid = np.linalg.norm(rhs - design @ coeffs, axis=0)
    return [
        ClosureReport((ops[i].label, ops[j].label), coeffs[:, p].copy(), float(resid[p]))
        for p, (i, j) in enumerate(pairs)
    ]


def hamiltonian_ladder_check(gens: GeneratorSet, margin: int = 2) -> list[LadderRow]:
    """Best scalar c with [H, X] ~ c X on the interior, for each generator X."""
    _check_margin(gens, margin)
    space = gens.space
    rows = []
    for x in gens.all():
        cx = _interior_commutator(space, gens.hamiltonian, x, margin).ravel()
        xv = _interior_block(space, x.entries, margin).ravel()
        c = complex(np.vdot(xv, cx) / np.vdot(xv, xv))
        rows.append(LadderRow(x.label, c, float(np.linalg.norm(cx - c * xv))))
    return rows


def hamiltonian_spectrum(gens: GeneratorSet) -> dict[float, int]:
    """Eigenvalue -> multiplicity for H on the full truncated space."""
    vals = np.linalg.eigvalsh(gens.hamiltonian.entries)
    out: dict[float, int] = {}
    for v in np.round(vals, 9):
        out[float(v)] = out.get(float(v), 0) + 1
    return dict(sorted(out.items()))
