"""Physical model: solitonic mass profile, hyperbolic barrier, coordinate map.

The particle carries the position-dependent mass m(x) = m0 sech^2(a x) and
moves in the barrier V = V1 coth^2 + V2 csch^2.  Mapping cos(z) = sech(x)
turns the problem into a constant-mass one on z in (-pi/2, pi/2) with an
effective confining potential; everything downstream (closed-form states,
finite-difference oracle) is phrased in these two pictures.

All evaluators accept scalars or numpy arrays and are pure functions of an
immutable :class:`ModelParams`, so they are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularAtOrigin

_HALF_PI = math.pi / 2.0
# Largest double strictly below pi/2; x_to_z saturates here for huge |x|.
_Z_LIMIT = np.nextafter(_HALF_PI, 0.0)


@dataclass(frozen=True)
class ModelParams:
    """Physical configuration shared by every module.

    Attributes
    ----------
    m0 : float
        Asymptotic mass at x -> 0 (peak of the solitonic profile).
    a : float
        Inverse-length parameter controlling the width of the mass
        distribution.
    v1, v2 : float
        Strengths of the coth^2 and csch^2 barrier terms.
    hbar : float
        Reduced Planck constant; defaults to 1 (natural units).

    The dimensionless combination kappa^2 = 2 m0 / (a^2 hbar^2) is always
    derived from these fields, never stored, so there is a single source of
    truth.
    """

    m0: float
    a: float
    v1: float
    v2: float
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.m0 > 0 and self.a > 0 and self.hbar > 0):
            raise ValueError("ModelParams requires m0 > 0, a > 0, hbar > 0")

    @property
    def kappa_sq(self) -> float:
        return 2.0 * self.m0 / (self.a * self.hbar) ** 2

    @property
    def kappa(self) -> float:
        return math.sqrt(self.kappa_sq)

    @classmethod
    def with_unit_kappa(cls, a: float, v1: float = 1.0, v2: float = 1.0,
                        hbar: float = 1.0) -> "ModelParams":
        """Configuration with kappa = 1 at any width a.

        Chooses m0 = a^2 hbar^2 / 2 so the preset V1 = V2 = kappa = 1 can be
        swept in a alone.
        """
        return cls(m0=0.5 * (a * hbar) ** 2, a=a, v1=v1, v2=v2, hbar=hbar)


def _sech(y):
    """Overflow-free sech: 2 e^{-|y|} / (1 + e^{-2|y|})."""
    e = np.exp(-np.abs(y))
    return 2.0 * e / (1.0 + e * e)


def _csch(y):
    """Overflow-free csch for y != 0: sign(y) 2 e^{-|y|} / (1 - e^{-2|y|})."""
    e = np.exp(-np.abs(y))
    return np.sign(y) * 2.0 * e / (1.0 - e * e)


def _as_result(arr):
    """Return a python-friendly scalar for 0-d arrays, else the array."""
    return arr[()] if arr.ndim == 0 else arr


def mass_position(x, params: ModelParams):
    """Solitonic mass profile m(x) = m0 sech^2(a x).

    Strictly positive, even, maximal at the origin and vanishing as
    |x| -> infinity.
    """
    x = np.asarray(x, dtype=float)
    return _as_result(params.m0 * _sech(params.a * x) ** 2)


def mass_momentum(k, params: ModelParams):
    """Reciprocal-space mass m(k) = sqrt(pi/2) m0 k csch(k pi / 2a) / a^2.

    The removable k = 0 singularity is handled by a 3-term Taylor branch for
    |k pi / 2a| < 1e-4 (limit sqrt(2/pi) m0 / a); the direct formula suffers
    catastrophic cancellation there.
    """
    k = np.asarray(k, dtype=float)
    u = np.pi * k / (2.0 * params.a)
    out = np.empty_like(u)
    small = np.abs(u) < 1e-4
    us = u[small]
    out[small] = (math.sqrt(2.0 / math.pi) * params.m0 / params.a
                  * (1.0 - us ** 2 / 6.0 + 7.0 * us ** 4 / 360.0))
    kb = k[~small]
    out[~small] = (math.sqrt(math.pi / 2.0) * params.m0 * kb
                   * _csch(u[~small]) / params.a ** 2)
    return _as_result(out)


def dispersion_energy(k, params: ModelParams):
    """Dispersion E(k) = sqrt(2/pi) (a^2 hbar^2 / m0) [k^2 (1 - k^2/4)^(-1/2) - cosh k].

    The hypergeometric factor 2F1(1/2, 3/2; 3/2; k^2/4) collapses to
    (1 - k^2/4)^(-1/2), real only for |k| < 2; outside that the formula is
    rejected rather than continued.
    """
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) >= 2.0):
        raise DomainError("dispersion_energy requires |k| < 2")
    pref = math.sqrt(2.0 / math.pi) * (params.a * params.hbar) ** 2 / params.m0
    return _as_result(pref * (k ** 2 / np.sqrt(1.0 - k ** 2 / 4.0) - np.cosh(k)))


def potential_x(x, params: ModelParams):
    """Hyperbolic barrier V(x) = V1 coth^2(x) + V2 csch^2(x).

    Evaluated in the rescaled (dimensionless) barrier coordinate.  Diverges
    at the origin and tends to V1 as |x| -> infinity.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise SingularAtOrigin("potential_x diverges at x = 0")
    csch2 = _csch(x) ** 2
    coth2 = 1.0 + csch2
    return _as_result(params.v1 * coth2 + params.v2 * csch2)


def x_to_z(x):
    """Map position to the compact coordinate: cos(z) = sech(x).

    Equivalent to the Gudermannian z = arctan(sinh x), which keeps full
    precision where arccos(sech x) would cancel.  Bijection from the real
    line onto (-pi/2, pi/2); saturates at the last double below pi/2 once
    |x| is so large the distinction is not representable (|x| > ~38).
    """
    x = np.asarray(x, dtype=float)
    z = np.arctan(np.sinh(np.clip(x, -700.0, 700.0)))
    return _as_result(np.clip(z, -_Z_LIMIT, _Z_LIMIT))


def z_to_x(z):
    """Inverse map x = arcsinh(tan z) for z in (-pi/2, pi/2)."""
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) >= _HALF_PI):
        raise DomainError("z_to_x requires |z| < pi/2")
    return _as_result(np.arcsinh(np.tan(z)))


def effective_potential_z(z, params: ModelParams):
    """Effective confining potential in the compact coordinate.

    V_eff(z) = 1/2 + (3/4) tan^2(z) + kappa^2 [(V1+V2) csc^2(z) - V2],
    dimensionless, defined on (-pi/2, pi/2) and diverging at both ends.
    For V1 + V2 != 0 it also diverges at z = 0, splitting the domain.
    """
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) >= _HALF_PI):
        raise DomainError("effective_potential_z requires |z| < pi/2")
    w = params.v1 + params.v2
    if w != 0.0 and np.any(z == 0.0):
        raise SingularAtOrigin(
            "effective_potential_z diverges at z = 0 when V1 + V2 != 0")
    tan2 = np.tan(z) ** 2
    if w != 0.0:
        barrier = w / np.sin(z) ** 2
    else:
        barrier = np.zeros_like(z)
    return _as_result(0.5 + 0.75 * tan2 + params.kappa_sq * (barrier - params.v2))
