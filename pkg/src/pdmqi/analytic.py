"""Closed-form bound states in position and momentum space.

Position-space states have the uniform structure

    psi_n(x) = C_n * tanh^2(a x) * B_n(sech^2(a x)),

with B_n a degree-(n+1) polynomial vanishing at 0; the three printed
normalized levels are

    psi_0 = sqrt(35 a /  4) * tanh^2 sech^2
    psi_1 = sqrt(6237 a / 32) * [4 cosh^2 / 9 - 1] * tanh^2 sech^4
    psi_2 = sqrt(920205 a / 256) * [(24 cosh^4 - 132 cosh^2)/143 + 1]
            * tanh^2 sech^6

(arguments a x throughout).  The same family for arbitrary n is produced by
:func:`general_psi1` through a terminating Gauss hypergeometric factor in
coth^2(a x).

Momentum-space amplitudes are odd polynomials times csch(pi p / 2a).  Two
constant conventions coexist deliberately:

* :func:`normalized_phi` keeps the published constants verbatim
  (sqrt(156237 a pi / 64) for n=1, denominator 412 for n=2);
* :func:`momentum_amplitude` carries the constants fixed by the unitary
  Fourier transform of psi_n (sqrt(6237 a pi / 64) and denominator 512),
  which is what Parseval and the numeric transform confirm.

The numeric transform is treated as ground truth wherever the two disagree;
tests report both side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    InvalidRadicand,
    SingularAtOrigin,
    UnsupportedLevel,
    PdmqiError,
)
from .model import ModelParams, _as_result, _csch, _sech
from .numerics import CosineTransform, integrate_real_line, momentum_cutoff

# Coefficients of B_n(w) = sum_j coeff[j] w^(j+1), w = sech^2(a x).
_B_COEFFS = {
    0: (1.0,),
    1: (4.0 / 9.0, -1.0),
    2: (24.0 / 143.0, -132.0 / 143.0, 1.0),
}

# Normalization constants C_n = sqrt(_C_NUM[n] * a).
_C_NUM = {0: 35.0 / 4.0, 1: 6237.0 / 32.0, 2: 920205.0 / 256.0}

# Momentum polynomials: phi_n ~ K * p * poly(p^2) * csch(pi p / 2a) / den,
# poly(q) = sum_j coeff[j] * a^(2(m-j)) * q^j with m = n + 1.
_PHI_POLY = {
    0: (2.0, -1.0),
    1: (16.0, -80.0, 9.0),
    2: (6528.0, -12152.0, 3542.0, -143.0),
}
_PHI_DEN = {0: 6.0, 1: 1080.0, 2: 720720.0}

# K^2 / (a pi) for the published constants and for the transform-normalized
# ones, plus the published overall sign relative to the transform.
PHI_CONST_PUBLISHED = {0: 35.0 / 8.0, 1: 156237.0 / 64.0, 2: 920205.0 / 412.0}
PHI_CONST_TRANSFORM = {0: 35.0 / 8.0, 1: 6237.0 / 64.0, 2: 920205.0 / 512.0}
_PHI_PUBLISHED_SIGN = {0: -1.0, 1: 1.0, 2: 1.0}


@dataclass(frozen=True)
class QuantizationParams:
    """Quantization parameters of level n (kept verbatim, see notes).

    theta = sqrt(4 (V1 + V2) + 1)
    sigma = sqrt(1 + 4 [V1 + V2 - (2 n rho - 4 n^2 + 2 rho - 8 n - 4) / kappa^2])
    rho   = sqrt(4 kappa^2 (V1 + V2) + 1)

    At the preset V1 = V2 = kappa = 1 these give theta = rho = 3 and
    sigma = 4 n + 1.
    """

    theta: float
    sigma: float
    rho: float
    kappa_sq: float
    n: int


def quantization_params(params: ModelParams, n: int) -> QuantizationParams:
    """Compute (theta, sigma, rho) for level n from the model parameters."""
    if n < 0:
        raise ValueError("level index n must be non-negative")
    w = params.v1 + params.v2
    k2 = params.kappa_sq
    rad_theta = 4.0 * w + 1.0
    rad_rho = 4.0 * k2 * w + 1.0
    if rad_theta < 0 or rad_rho < 0:
        raise InvalidRadicand("negative radicand in theta or rho")
    rho = math.sqrt(rad_rho)
    rad_sigma = 1.0 + 4.0 * (
        w - (2.0 * n * rho - 4.0 * n ** 2 + 2.0 * rho - 8.0 * n - 4.0) / k2)
    if rad_sigma < 0:
        raise InvalidRadicand("negative radicand in sigma")
    return QuantizationParams(theta=math.sqrt(rad_theta),
                              sigma=math.sqrt(rad_sigma),
                              rho=rho, kappa_sq=k2, n=n)


def energy_level(params: ModelParams, n: int) -> float:
    """Closed-form level energy, evaluated verbatim.

    E_n = [2 rho (n - 1) - 4 (n^2 + 2 n + 1)] / kappa^2 - V1.

    At the preset this yields -11, -17, -31 for n = 0, 1, 2.  The
    finite-difference oracle disagrees with this formula (it finds
    +11, +29, +55 there); the comparison is archived by the spectrum
    report rather than patched on either side.
    """
    q = quantization_params(params, n)
    return ((2.0 * q.rho * (n - 1) - 4.0 * (n ** 2 + 2 * n + 1))
            / params.kappa_sq - params.v1)


def _hyp2f1_poly(a: float, b: float, c: float, z: np.ndarray,
                 n_terms: int) -> np.ndarray:
    """Terminating 2F1 evaluated over an array argument."""
    total = np.ones_like(z)
    term = np.ones_like(z)
    for k in range(n_terms):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * z
        total = total + term
    return total


def general_psi1(x, params: ModelParams, n: int):
    """Unnormalized closed-form bound state for any level n.

    Evaluates the hypergeometric template

        coth(ax)^(-(1+sigma)/2) sinh(ax)^(-2)
            * 2F1(1 + (theta - sigma)/4, 1 - (theta + sigma)/4,
                  1 - sigma/2; coth^2(ax))

    with the series index that normalizability forces, theta -> rho and
    sigma -> rho + 4(n + 1):  the first upper parameter is then exactly -n,
    the series terminates, and the function vanishes at the origin and
    decays at infinity.  (The verbatim quantization-parameter sigma of
    :func:`quantization_params` labels a different, origin-divergent
    solution of the same equation; see the level checks in the tests.)
    The states are even, so the formula is evaluated in |x|.
    """
    if n < 0:
        raise ValueError("level index n must be non-negative")
    w_sum = params.v1 + params.v2
    rad_rho = 4.0 * params.kappa_sq * w_sum + 1.0
    if rad_rho < 0:
        raise InvalidRadicand("negative radicand in rho")
    rho = math.sqrt(rad_rho)

    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise SingularAtOrigin("general_psi1 is evaluated for x != 0")

    sigma_eff = rho + 4.0 * (n + 1.0)
    a_par = 1.0 + (rho - sigma_eff) / 4.0        # = -n exactly
    b_par = 1.0 - (rho + sigma_eff) / 4.0
    c_par = 1.0 - sigma_eff / 2.0

    u = params.a * np.abs(x)
    t = np.tanh(u)
    coth2 = 1.0 / (t * t)
    prefactor = t ** (0.5 * (1.0 + sigma_eff)) * _csch(u) ** 2
    hyp = _hyp2f1_poly(a_par, b_par, c_par, coth2, n)
    return _as_result(prefactor * hyp)


def _tanh_sech(x, params: ModelParams):
    u = params.a * np.asarray(x, dtype=float)
    return np.tanh(u), _sech(u)


def _b_eval(n: int, w):
    """B_n(w), B_n'(w), B_n''(w) for w = sech^2."""
    coeffs = _B_COEFFS[n]
    b = np.zeros_like(w)
    db = np.zeros_like(w)
    ddb = np.zeros_like(w)
    for j, cj in enumerate(coeffs, start=1):
        b = b + cj * w ** j
        db = db + cj * j * w ** (j - 1)
        if j >= 2:
            ddb = ddb + cj * j * (j - 1) * w ** (j - 2)
    return b, db, ddb


def norm_constant(n: int, params: ModelParams) -> float:
    """Closed normalization constant C_n for n <= 2."""
    if n not in _C_NUM:
        raise UnsupportedLevel(f"no closed normalization for n={n}")
    return math.sqrt(_C_NUM[n] * params.a)


def normalized_psi(n: int, x, params: ModelParams):
    """Normalized position-space state for n in {0, 1, 2}.

    Higher levels have no printed closed form; build them through
    :func:`make_bound_state`, which normalizes :func:`general_psi1`
    numerically.
    """
    if n not in _B_COEFFS:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    t, s = _tanh_sech(x, params)
    b, _, _ = _b_eval(n, s * s)
    return _as_result(norm_constant(n, params) * t * t * b)


def psi_prime(n: int, x, params: ModelParams):
    """d psi_n / dx for the closed-form levels."""
    if n not in _B_COEFFS:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    t, s = _tanh_sech(x, params)
    s2 = s * s
    b, db, _ = _b_eval(n, s2)
    g = b - t * t * db
    return _as_result(norm_constant(n, params) * params.a * 2.0 * t * s2 * g)


def psi_dprime(n: int, x, params: ModelParams):
    """d^2 psi_n / dx^2 for the closed-form levels."""
    if n not in _B_COEFFS:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    t, s = _tanh_sech(x, params)
    t2 = t * t
    s2 = s * s
    b, db, ddb = _b_eval(n, s2)
    g = b - t2 * db
    val = (s2 * s2 - 2.0 * s2 * t2) * g - 2.0 * t2 * s2 * s2 * (2.0 * db - t2 * ddb)
    return _as_result(norm_constant(n, params) * params.a ** 2 * 2.0 * val)


def _p_csch(p, a):
    """p * csch(pi p / 2a) with the removable p = 0 point filled in."""
    p = np.asarray(p, dtype=float)
    u = math.pi * p / (2.0 * a)
    out = np.empty_like(p)
    small = np.abs(u) < 1e-4
    us = u[small]
    out[small] = (2.0 * a / math.pi) * (1.0 - us ** 2 / 6.0
                                        + 7.0 * us ** 4 / 360.0)
    out[~small] = p[~small] * _csch(u[~small])
    return out


def _phi_poly(n: int, q, a: float):
    """poly(q) and poly'(q) with q = p^2, coefficients scaled by powers of a."""
    coeffs = _PHI_POLY[n]
    m = n + 1
    poly = np.zeros_like(q)
    dpoly = np.zeros_like(q)
    for j, cj in enumerate(coeffs):
        cja = cj * a ** (2 * (m - j))
        poly = poly + cja * q ** j
        if j >= 1:
            dpoly = dpoly + cja * j * q ** (j - 1)
    return poly, dpoly


def _phi_eval(n: int, p, params: ModelParams, const_num: float, sign: float):
    a = params.a
    p = np.asarray(p, dtype=float)
    q = p * p
    poly, _ = _phi_poly(n, q, a)
    k = math.sqrt(const_num * a * math.pi)
    den = _PHI_DEN[n] * a ** (2 * n + 4)
    return sign * k / den * poly * _p_csch(p, a)


def _phi_prime_eval(n: int, p, params: ModelParams, const_num: float,
                    sign: float):
    a = params.a
    p = np.asarray(p, dtype=float)
    q = p * p
    poly, dpoly = _phi_poly(n, q, a)
    k = math.sqrt(const_num * a * math.pi)
    den = _PHI_DEN[n] * a ** (2 * n + 4)
    u = math.pi * p / (2.0 * a)
    out = np.empty_like(p)
    small = np.abs(u) < 1e-4
    # Series branch: phi = (K/den) R(p^2) (2a/pi) S(u^2) with
    # S(v) = 1 - v/6 + 7 v^2/360.
    us, ps, qs = u[small], p[small], q[small]
    s_val = 1.0 - us ** 2 / 6.0 + 7.0 * us ** 4 / 360.0
    s_der = -1.0 / 6.0 + 7.0 * us ** 2 / 180.0
    out[small] = (2.0 * ps * dpoly[small] * (2.0 * a / math.pi) * s_val
                  + poly[small] * 2.0 * us * s_der)
    ub, pb = u[~small], p[~small]
    csch = _csch(ub)
    coth = np.cosh(ub) * csch
    out[~small] = csch * (2.0 * pb * pb * dpoly[~small] + poly[~small]
                          - ub * coth * poly[~small])
    return sign * k / den * out


def normalized_phi(n: int, p, params: ModelParams):
    """Published momentum-space amplitude for n in {0, 1, 2}, verbatim.

    phi_0 = sqrt(35 a pi /  8) p (p^2 - 2 a^2) csch(pi p / 2a) / (6 a^4)
    phi_1 = sqrt(156237 a pi / 64) p (16 a^4 - 80 a^2 p^2 + 9 p^4)
            csch(pi p / 2a) / (1080 a^6)
    phi_2 = sqrt(920205 a pi / 412) p (6528 a^6 - 12152 a^4 p^2
            + 3542 a^2 p^4 - 143 p^6) csch(pi p / 2a) / (720720 a^8)

    The csch singularity at p = 0 is replaced by its finite series limit.
    Only n = 0 is actually unit-normalized; the n = 1, 2 constants disagree
    with the Fourier transform of psi_n (use :func:`momentum_amplitude` for
    the transform-normalized version, and see fitted_phi_constant).
    """
    if n not in _PHI_POLY:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    return _as_result(_phi_eval(n, p, params, PHI_CONST_PUBLISHED[n],
                                _PHI_PUBLISHED_SIGN[n]))


def normalized_phi_prime(n: int, p, params: ModelParams):
    """d phi_n / dp of the published momentum amplitude."""
    if n not in _PHI_POLY:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    return _as_result(_phi_prime_eval(n, p, params, PHI_CONST_PUBLISHED[n],
                                      _PHI_PUBLISHED_SIGN[n]))


def momentum_amplitude(n: int, p, params: ModelParams):
    """Unitary Fourier transform of psi_n, in closed form (n <= 2).

    Same polynomial shape as :func:`normalized_phi` but with the constants
    the transform fixes: sqrt(35 a pi / 8), sqrt(6237 a pi / 64),
    sqrt(920205 a pi / 512), and the sign that makes phi(0) match
    (1/sqrt(2 pi)) * integral psi dx > 0.
    """
    if n not in _PHI_POLY:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    return _as_result(_phi_eval(n, p, params, PHI_CONST_TRANSFORM[n], 1.0))


def momentum_amplitude_prime(n: int, p, params: ModelParams):
    """d/dp of :func:`momentum_amplitude`."""
    if n not in _PHI_POLY:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    return _as_result(_phi_prime_eval(n, p, params, PHI_CONST_TRANSFORM[n],
                                      1.0))


def fitted_phi_constant(n: int, params: ModelParams) -> tuple[float, float]:
    """(published, transform-fitted) momentum constants K_n for n <= 2.

    K_n is the overall factor multiplying p * poly * csch / den.  The two
    agree for n = 0 (up to sign); for n = 1, 2 the fitted value is what the
    numeric transform reproduces.
    """
    if n not in _PHI_POLY:
        raise UnsupportedLevel("closed forms exist for n in {0, 1, 2} only")
    a = params.a
    return (math.sqrt(PHI_CONST_PUBLISHED[n] * a * math.pi),
            math.sqrt(PHI_CONST_TRANSFORM[n] * a * math.pi))


@dataclass(frozen=True)
class BoundState:
    """Immutable bound level with position and momentum evaluators.

    ``psi``/``phi`` are the normalized amplitudes, ``psi_prime``/
    ``psi_dprime``/``phi_prime`` their derivatives (analytic for n <= 2,
    central differences and numeric transform otherwise); ``numeric_phi``
    is the independent cosine-transform evaluator used as the
    momentum-space ground truth.  ``energy`` carries the verbatim
    closed-form level; see :func:`energy_level` for its status.
    """

    n: int
    params: ModelParams
    energy: float
    norm_const: float
    psi: Callable
    psi_prime: Callable
    psi_dprime: Callable
    phi: Callable
    phi_prime: Callable
    numeric_phi: CosineTransform
    # True when derivatives are analytic closed forms; False means finite
    # differences, whose noise floor downstream quadratures must respect.
    closed_form: bool = True


def make_bound_state(params: ModelParams, n: int, *,
                     quad_tol: float = 1e-10,
                     transform_tol: float = 1e-12,
                     p_cap: Optional[float] = None) -> BoundState:
    """Construct level n, verifying unit normalization by quadrature.

    Levels 0..2 use the printed closed forms; higher levels normalize
    :func:`general_psi1` numerically (quadrature tolerance ``quad_tol``)
    and fall back to central differences (step 1e-6 / a) for derivatives.
    """
    a = params.a
    if p_cap is None:
        p_cap = momentum_cutoff(a) + 2.0

    if n in _B_COEFFS:
        const = norm_constant(n, params)

        def psi(x, _n=n):
            return normalized_psi(_n, x, params)

        def d_psi(x, _n=n):
            return psi_prime(_n, x, params)

        def dd_psi(x, _n=n):
            return psi_dprime(_n, x, params)

        def phi(p, _n=n):
            return momentum_amplitude(_n, p, params)

        def d_phi(p, _n=n):
            return momentum_amplitude_prime(_n, p, params)
    else:
        raw_sq = integrate_real_line(
            lambda x: _zero_safe_general(x, params, n) ** 2,
            quad_tol, scale=1.0 / a)
        if not raw_sq.converged:
            raise PdmqiError(
                f"normalization quadrature for n={n} did not converge")
        const = 1.0 / math.sqrt(raw_sq.value)

        def psi(x, _c=const, _n=n):
            return _c * _zero_safe_general(x, params, _n)

        step = 1e-6 / a
        # Second differences balance truncation against roundoff at a much
        # larger step than first differences.
        step2 = 1e-4 / a

        def d_psi(x, _f=psi, _h=step):
            return (_f(np.asarray(x) + _h) - _f(np.asarray(x) - _h)) / (2 * _h)

        def dd_psi(x, _f=psi, _h=step2):
            xa = np.asarray(x, dtype=float)
            return (_f(xa + _h) - 2.0 * _f(xa) + _f(xa - _h)) / _h ** 2

        phi = None
        d_phi = None

    transform = CosineTransform(psi, x_max=24.0 / a, p_cap=p_cap,
                                tol=transform_tol)
    if not transform.converged:
        raise PdmqiError(
            f"momentum transform for n={n} stalled at drift "
            f"{transform.abs_error_estimate:.3e}")
    if phi is None:
        phi = transform
        d_phi = transform.derivative

    check = integrate_real_line(lambda x: np.asarray(psi(x)) ** 2,
                                quad_tol, scale=1.0 / a)
    if not check.converged or abs(check.value - 1.0) > 1e-8:
        raise PdmqiError(
            f"state n={n} failed its normalization check: "
            f"integral={check.value!r}")
    if float(np.asarray(psi(0.0))) != 0.0:
        raise PdmqiError(f"state n={n} does not vanish at the origin")

    return BoundState(n=n, params=params, energy=energy_level(params, n),
                      norm_const=const, psi=psi, psi_prime=d_psi,
                      psi_dprime=dd_psi, phi=phi, phi_prime=d_phi,
                      numeric_phi=transform, closed_form=n in _B_COEFFS)


def _zero_safe_general(x, params: ModelParams, n: int):
    """general_psi1 extended by its limit 0 at the origin."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    mask = x != 0.0
    if mask.any():
        out[mask] = general_psi1(x[mask], params, n)
    return out[0] if scalar else out
