"""Closed-form spectra: oscillator, hydrogen-like, Klein-Gordon boson, mass
spectrum, the epsilon shift and the four-term fine-structure series.

Natural units hbar = c = 1.  Rational closed forms are evaluated exactly with
``fractions.Fraction`` on the decimal value of each input and rounded once, so
e.g. gamma = 0.1 yields term values 0.5, -0.005, ... to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


def _q(x) -> Fraction:
    """Exact rational for the decimal a float prints as."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x}")
    return Fraction(repr(x))


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    n_r: int | None = None
    l: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"principal quantum number must be >= 1, got {self.n}")
        if self.n_r is not None and self.l is not None and self.n != self.n_r + self.l + 1:
            raise ValueError("n must equal n_r + l + 1")
        if self.k is not None:
            if self.k == 0:
                raise ValueError("k must be nonzero")
            if abs(self.k) > self.n:
                raise ValueError(f"|k| must be <= n, got k={self.k}, n={self.n}")
            if self.l is not None and self.k not in (-self.l, self.l + 1):
                raise ValueError(f"k must be -l or l+1, got k={self.k}, l={self.l}")


@dataclass(frozen=True)
class CouplingSet:
    """Couplings entering the spectra; alpha_sq = -gamma^2 for alpha = i gamma."""

    omega: float = 1.0
    Z2: float = 1.0
    m1: float = 1.0
    gamma: float = 0.0
    m: float = 1.0

    @property
    def alpha_sq(self) -> float:
        return -self.gamma**2

    @property
    def Ztilde2(self) -> float:
        return self.m


@dataclass(frozen=True)
class EnergyLevel:
    qn: QuantumNumbers
    value: float
    kind: str
    terms: tuple[float, ...] = field(default=())

    def to_row(self) -> dict:
        lk = self.qn.k if self.qn.k is not None else self.qn.l
        row = {"n": self.qn.n, "l_or_k": lk, "kind": self.kind}
        for i in range(4):
            row[f"term{i + 1}"] = self.terms[i] if i < len(self.terms) else None
        row["value"] = self.value
        return row


def oscillator_level(omega: float, n_r: int, l: int) -> float:
    """Z^2 = 2 omega (n_r + l + 1)."""
    if omega <= 0:
        raise ValueError(f"invalid coupling: omega must be > 0, got {omega}")
    if n_r < 0 or l < 0:
        raise ValueError("n_r and l must be non-negative")
    return float(2 * _q(omega) * (n_r + l + 1))


def hydrogen_level(Z2: float, n: int) -> float:
    """E_n = -Z^4 / n^2."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return float(-_q(Z2) ** 2 / n**2)


def duality_frequency(Z2: float, n: int) -> tuple[float, float]:
    """Oscillator frequency omega = Z^2/(2n) of level n and its Coulomb energy -4 omega^2."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    omega = _q(Z2) / (2 * n)
    return float(omega), float(-4 * omega**2)


def kg_energy(m1: float, alpha_sq: float, n_star: float) -> float:
    """E_1 = m1 (1 + alpha^2/n*^2) / (1 - alpha^2/n*^2)."""
    if n_star <= 0:
        raise ValueError("n_star must be positive")
    x = _q(alpha_sq) / _q(n_star) ** 2
    if 1 - x <= 0:
        raise ValueError(
            f"coupling too strong for this branch: alpha^2/n*^2 = {float(x)} must be < 1"
        )
    return float(_q(m1) * (1 + x) / (1 - x))


def mass_level(Ztilde2: float, alpha_sq: float, n: int) -> float:
    """m1 = (Z~^2 / 2)(1 - alpha^2 / n^2)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return float(_q(Ztilde2) / 2 * (1 - _q(alpha_sq) / n**2))


def _check_nk(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k == 0:
        raise ValueError("k must be nonzero")
    if abs(k) > n:
        raise ValueError(f"|k| must be <= n, got k={k}, n={n}")


def epsilon_shift(n: int, k: int, gamma: float) -> tuple[float, float]:
    """(exact, approx) shift of n*^2 = n^2 + epsilon.

    exact = 2(n - |k|)(sqrt(k^2 - gamma^2) - |k|), approx = -(n - |k|) gamma^2 / |k|.
    """
    _check_nk(n, k)
    g2 = _q(gamma) ** 2
    ak = abs(k)
    if g2 >= ak * ak:
        raise ValueError(f"square-root branch violated: gamma^2 = {float(g2)} must be < k^2 = {ak * ak}")
    # sqrt(k^2 - g^2) - |k| = -g^2 / (sqrt(k^2 - g^2) + |k|), free of cancellation
    root = math.sqrt(float(ak * ak - g2))
    exact = -2 * (n - ak) * float(g2) / (root + ak)
    approx = float(-(n - ak) * g2 / ak)
    return exact, approx


def fine_structure_terms(m: float, gamma: float, n: int, k: int) -> list[Fraction]:
    _check_nk(n, k)
    mq, g = _q(m), _q(gamma)
    ak = abs(k)
    return [
        mq / 2,
        -mq * g**2 / (2 * n**2),
        -(mq * g**4 / (8 * n**3)) * (Fraction(4, ak) - Fraction(3, n)),
        -(mq * g**6 / (8 * n**4)) * (Fraction(3, n**2) - Fraction(8, n * ak) + Fraction(4, k * k)),
    ]


def fine_structure_series(m: float, gamma: float, n: int, k: int) -> EnergyLevel:
    """Rest energy, Rydberg term, fine-structure term and the gamma^6 correction."""
    terms = fine_structure_terms(m, gamma, n, k)
    l = k - 1 if k > 0 else -k
    qn = QuantumNumbers(n=n, k=k, l=l, n_r=n - l - 1) if l <= n - 1 else QuantumNumbers(n=n, k=k)
    return EnergyLevel(qn, float(sum(terms)), "series", tuple(float(t) for t in terms))


@dataclass(frozen=True)
class ChainPoint:
    gamma: float
    m1: float
    n_star: float
    e_series: float
    e_exact: float

    @property
    def residual(self) -> float:
        return abs(self.e_series - self.e_exact)


def exact_chain_energy(m: float, n: int, k: int, gamma: float) -> ChainPoint:
    """Compose mass spectrum, epsilon shift and KG spectrum with Z~^2 -> m and alpha = i gamma."""
    alpha_sq = -float(_q(gamma) ** 2)
    m1 = mass_level(m, alpha_sq, n)
    eps, _ = epsilon_shift(n, k, gamma)
    n_star = math.sqrt(n * n + eps)
    e_exact = kg_energy(m1, alpha_sq, n_star)
    e_series = fine_structure_series(m, gamma, n, k).value
    return ChainPoint(float(gamma), m1, n_star, e_series, e_exact)


def rydberg_coefficient(m: float, n: int, k: int, gamma: float) -> float:
    """(E_chain(gamma) - E_chain(0)) / gamma^2; tends to -m / (2 n^2)."""
    e0 = exact_chain_energy(m, n, k, 0.0).e_exact
    return (exact_chain_energy(m, n, k, gamma).e_exact - e0) / gamma**2


@dataclass(frozen=True)
class FineReport:
    m: float
    n: int
    k: int
    points: list[ChainPoint]
    order: float | None

    def rows(self) -> list[dict]:
        return [
            {"gamma": p.gamma, "e_series": p.e_series, "e_exact": p.e_exact, "residual": p.residual}
            for p in self.points
        ]


def fit_order(gammas, residuals) -> float | None:
    """Least-squares slope of log residual against log gamma (zero residuals skipped)."""
    g = np.asarray(gammas, dtype=float)
    r = np.asarray(residuals, dtype=float)
    ok = (g > 0) & (r > 0)
    if ok.sum() < 2:
        return None
    slope, _ = np.polyfit(np.log(g[ok]), np.log(r[ok]), 1)
    return float(slope)


def series_vs_exact_report(m: float, n: int, k: int, gamma_grid) -> FineReport:
    """Series against the exact chain over a gamma grid, plus the fitted residual order.

    The order is measured and recorded only.
    """
    _check_nk(n, k)
    if m <= 0:
        raise ValueError("mass scale m must be positive")
    for g in gamma_grid:
        if g * g >= k * k:
            raise ValueError(f"square-root branch violated: gamma^2 = {g * g} must be < k^2 = {k * k}")
    points = [exact_chain_energy(m, n, k, g) for g in gamma_grid]
    return FineReport(m, n, k, points, fit_order([p.gamma for p in points], [p.residual for p in points]))
