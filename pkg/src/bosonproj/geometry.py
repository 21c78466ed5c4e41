"""Dirac matrices, rest-frame spin projector, the quadratic spinor -> R^3 map,
and the parabolic / cylindrical coordinate chain with its Lame coefficients.

Coordinate conventions:

* ``hopf_map`` returns x with |x| = r = |xi|^2.
* Physical coordinates are x / 2, so the physical radius is R = r / 2 and the
  parabolic pair is u = R + z, v = R - z (hence u + v = |xi|^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import atan2, pi, sqrt

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def levi_civita(i: int, j: int, k: int) -> int:
    return (i - j) * (j - k) * (k - i) // 2


@dataclass(frozen=True)
class DiracBasis:
    gamma: np.ndarray       # (4, 4, 4), upper index gamma^mu
    sigma_plus: np.ndarray  # (3, 4, 4)
    sigma_minus: np.ndarray

    def gamma_lower(self, mu: int) -> np.ndarray:
        return METRIC[mu, mu] * self.gamma[mu]

    def sigma_munu(self, mu: int, nu: int) -> np.ndarray:
        """sigma_{mu nu} = (i/2)[gamma_mu, gamma_nu] with lowered indices."""
        a, b = self.gamma_lower(mu), self.gamma_lower(nu)
        return 0.5j * (a @ b - b @ a)

    @property
    def spin(self) -> np.ndarray:
        """Spin matrices Sigma_l = sigma^+_l / 2 = diag(sigma_l, sigma_l)."""
        return 0.5 * self.sigma_plus


@lru_cache(maxsize=None)
def dirac_basis() -> DiracBasis:
    gamma = np.empty((4, 4, 4), dtype=complex)
    gamma[0] = np.block([[_I2, _Z2], [_Z2, -_I2]])
    for i, s in enumerate(_PAULI, start=1):
        gamma[i] = np.block([[_Z2, s], [-s, _Z2]])

    partial = DiracBasis(gamma, np.zeros((3, 4, 4), complex), np.zeros((3, 4, 4), complex))
    sp = np.zeros((3, 4, 4), dtype=complex)
    sm = np.zeros((3, 4, 4), dtype=complex)
    for lam in range(3):
        for i in range(3):
            for j in range(3):
                eps_ij = levi_civita(lam, i, j)
                eps_ji = levi_civita(lam, j, i)
                if eps_ij == 0:
                    continue
                s_ij = partial.sigma_munu(i + 1, j + 1)
                sp[lam] += eps_ij * s_ij
                sm[lam] += eps_ji * s_ij
    for arr in (gamma, sp, sm):
        arr.setflags(write=False)
    return DiracBasis(gamma, sp, sm)


@dataclass(frozen=True)
class SpinVector:
    """Rest-frame spin four-vector (0, s1, s2, s3) with unit spatial part."""

    s: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.s) != 4:
            raise ValueError("spin four-vector needs 4 components")
        if self.s[0] != 0:
            raise ValueError("rest-frame spin must have s^0 = 0")
        norm = sqrt(sum(c * c for c in self.s[1:]))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"spatial spin must be a unit vector, |s| = {norm}")

    @classmethod
    def from_direction(cls, direction) -> SpinVector:
        d = np.asarray(direction, dtype=float)
        if d.shape != (3,):
            raise ValueError("spin direction needs 3 components")
        norm = float(np.linalg.norm(d))
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("zero spin vector: orientation undefined")
        d = d / norm
        return cls((0.0, float(d[0]), float(d[1]), float(d[2])))

    @property
    def spatial(self) -> np.ndarray:
        return np.array(self.s[1:])

    def __neg__(self) -> SpinVector:
        return SpinVector((0.0,) + tuple(-c for c in self.s[1:]))


def spin_projector(s, basis: DiracBasis | None = None) -> np.ndarray:
    """P(s) = (1 + s.Sigma) / 2; selects bispinors polarised along s."""
    basis = basis or dirac_basis()
    if not isinstance(s, SpinVector):
        s = SpinVector.from_direction(s)
    sigma_dot_s = np.tensordot(s.spatial, basis.spin, axes=1)
    return 0.5 * (np.eye(4) + sigma_dot_s)


@dataclass(frozen=True)
class Spinor4:
    xi: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.xi) != 4:
            raise ValueError(f"spinor needs 4 real components, got {len(self.xi)}")

    @property
    def complex_pair(self) -> tuple[complex, complex]:
        x1, x2, x3, x4 = self.xi
        return complex(x1, x2), complex(x3, x4)

    @property
    def norm_sq(self) -> float:
        return float(sum(c * c for c in self.xi))


def hopf_map(xi) -> np.ndarray:
    """x1 + i x2 = 2 xi_a xi_b, x3 = |xi_a|^2 - |xi_b|^2 for xi_a = xi1 + i xi2, xi_b = xi3 + i xi4.

    Accepts a Spinor4 or any array of shape (..., 4).
    """
    if isinstance(xi, Spinor4):
        xi = xi.xi
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != 4:
        raise ValueError("spinor needs 4 real components")
    x1, x2, x3, x4 = np.moveaxis(xi, -1, 0)
    return np.stack(
        [
            2.0 * (x1 * x3 - x2 * x4),
            2.0 * (x1 * x4 + x2 * x3),
            x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4,
        ],
        axis=-1,
    )


def physical_point(xi) -> np.ndarray:
    return 0.5 * hopf_map(xi)


@dataclass(frozen=True)
class ParabolicPoint:
    u: float
    v: float
    phi: float

    def __post_init__(self):
        if self.u < 0 or self.v < 0:
            raise ValueError(f"parabolic coordinates must be non-negative, got u={self.u}, v={self.v}")


def _wrap(angle: float, period: float) -> float:
    a = angle % period
    # tiny negative angles round up to the period itself
    return 0.0 if a >= period else a


def _azimuth(x: float, y: float) -> float:
    if x == 0.0 and y == 0.0:
        return 0.0
    return _wrap(atan2(y, x), 2 * pi)


def to_parabolic(x) -> ParabolicPoint:
    """Physical Cartesian point -> (u, v, phi) with u = R + z, v = R - z."""
    x1, x2, x3 = (float(c) for c in x)
    big_r = sqrt(x1 * x1 + x2 * x2 + x3 * x3)
    # clamp rounding below zero on the axis
    return ParabolicPoint(max(big_r + x3, 0.0), max(big_r - x3, 0.0), _azimuth(x1, x2))


def parabolic_to_cylindrical(p: ParabolicPoint) -> tuple[float, float, float]:
    return 0.5 * (p.u - p.v), sqrt(p.u * p.v), p.phi


def parabolic_to_cartesian(p: ParabolicPoint) -> np.ndarray:
    z, rho, phi = parabolic_to_cylindrical(p)
    return np.array([rho * np.cos(phi), rho * np.sin(phi), z])


@dataclass(frozen=True)
class LameCoefficients:
    h1: float
    h2: float
    h3: float

    def arc_element_sq(self, du: float, dv: float, dphi: float) -> float:
        return self.h1**2 * du**2 + self.h2**2 * dv**2 + self.h3**2 * dphi**2


def _check_chart(u: float, v: float) -> None:
    if not (u > 0 and v > 0):
        raise ValueError(f"point off the parabolic chart: need u > 0 and v > 0, got u={u}, v={v}")


def lame_coefficients(u: float, v: float) -> LameCoefficients:
    _check_chart(u, v)
    return LameCoefficients(0.5 * sqrt((u + v) / u), 0.5 * sqrt((u + v) / v), sqrt(u * v))


def metric_identity_check(u: float, v: float, du: float, dv: float) -> tuple[float, float, float]:
    """Compare dz^2 + drho^2 from a finite step against (u+v)/4 (du^2/u + dv^2/v).

    The relative mismatch is first order in the step size.
    """
    _check_chart(u, v)
    if u + du < 0 or v + dv < 0:
        raise ValueError("displacement leaves the parabolic chart")
    z0, r0, _ = parabolic_to_cylindrical(ParabolicPoint(u, v, 0.0))
    z1, r1, _ = parabolic_to_cylindrical(ParabolicPoint(u + du, v + dv, 0.0))
    lhs = (z1 - z0) ** 2 + (r1 - r0) ** 2
    rhs = 0.25 * (u + v) * (du * du / u + dv * dv / v)
    return lhs, rhs, abs(lhs - rhs)


def angle_chain(chi1: float, chi2: float) -> tuple[float, float, float]:
    """(chi, eta, phi) with chi = chi1 + chi2 in [0, 4pi), eta = chi2 - chi1, phi = chi / 2.

    eta labels the section and is never mapped to physical space.
    """
    chi = _wrap(chi1 + chi2, 4 * pi)
    eta = chi2 - chi1
    return chi, eta, _wrap(0.5 * chi, 2 * pi)
