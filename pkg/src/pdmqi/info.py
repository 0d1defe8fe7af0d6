"""Shannon entropies, Fisher information, moments and uncertainty margins.

Position-space integrals run over the closed-form amplitudes; momentum-space
integrals run over the state's numeric cosine transform, which is the
authoritative momentum representation (the published closed-form constants
for n = 1, 2 disagree with it, so those values are carried alongside as
``s_p_published`` / ``f_p_published`` rather than used).

Conventions: entropies in nats; densities follow

    rho_s = |amp|^2 ln |amp|^2          (0 ln 0 -> 0 at amplitude zeros)
    rho_F = |amp|^2 [d ln |amp|^2 / dq]^2 = 4 amp'(q)^2   (real amplitudes)

with the Fisher integrand always evaluated in the 4 amp'^2 form, which is
finite at the amplitude zeros where the logarithmic derivative blows up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .analytic import BoundState, normalized_phi, normalized_phi_prime
from .errors import MomentMismatch, NotConverged
from .numerics import integrate_interval, integrate_real_line, momentum_cutoff

# Entropic uncertainty floor S_x + S_p >= 1 + ln(pi) in one dimension.
BBM_BOUND = 1.0 + math.log(math.pi)


@dataclass(frozen=True)
class InfoReport:
    """All information measures of one state at one mass width."""

    n: int
    a: float
    s_x: float
    s_p: float
    s_sum: float
    bbm_bound: float
    f_x: float
    f_p: float
    x_mean: float
    x2_mean: float
    p_mean: float
    p2_mean: float
    sigma_x: float
    sigma_p: float
    uncertainty_product: float
    hbar: float = 1.0
    # Momentum-space route to <p^2>, kept beside the position-space value
    # feeding p2_mean so the two-route agreement stays visible.
    p2_mean_transform: Optional[float] = None
    # Values from the published momentum closed forms, for comparison only
    # (None when no closed form exists).
    s_p_published: Optional[float] = None
    f_p_published: Optional[float] = None


@dataclass(frozen=True)
class InequalityMargins:
    """Left-minus-right margins of the five uncertainty inequalities."""

    bbm_margin: float
    cramer_rao_x_margin: float
    cramer_rao_p_margin: float
    heisenberg_margin: float
    fisher_product_margin: float

    def smallest(self) -> float:
        return min(self.bbm_margin, self.cramer_rao_x_margin,
                   self.cramer_rao_p_margin, self.heisenberg_margin,
                   self.fisher_product_margin)


def _rho_ln_rho(amplitude):
    """|amp|^2 ln |amp|^2 with the 0 ln 0 -> 0 convention."""
    rho = np.asarray(amplitude, dtype=float) ** 2
    out = np.zeros_like(rho)
    mask = rho > 0.0
    out[mask] = rho[mask] * np.log(rho[mask])
    return out


def entropy_density_x(state: BoundState, x):
    """Position entropic density rho_s(x) = |psi|^2 ln |psi|^2."""
    return _rho_ln_rho(state.psi(x))


def entropy_density_p(state: BoundState, p):
    """Momentum entropic density rho_s(p) = |phi|^2 ln |phi|^2."""
    return _rho_ln_rho(state.phi(p))


def fisher_density_x(state: BoundState, x):
    """Fisher information density in position, as 4 psi'(x)^2."""
    return 4.0 * np.asarray(state.psi_prime(x), dtype=float) ** 2


def fisher_density_p(state: BoundState, p):
    """Fisher information density in momentum, as 4 phi'(p)^2."""
    return 4.0 * np.asarray(state.phi_prime(p), dtype=float) ** 2


def _require(res, what):
    if not res.converged:
        raise NotConverged(f"{what} stalled at {res.abs_error_estimate:.3e}",
                           res)
    return res.value


def shannon_x(state: BoundState, tol: float = 1e-11) -> float:
    """Position Shannon entropy S_x = -integral |psi|^2 ln |psi|^2 dx."""
    res = integrate_real_line(lambda x: _rho_ln_rho(state.psi(x)), tol,
                              scale=1.0 / state.params.a)
    return -_require(res, "S_x quadrature")


def _momentum_integral(state, integrand, tol, *, symmetric_even=True):
    """Integrate over [-p_max, p_max], folding even integrands onto [0, p_max]."""
    p_max = momentum_cutoff(state.params.a)
    if symmetric_even:
        res = integrate_interval(integrand, 0.0, p_max, 0.5 * tol,
                                 initial_panels=16)
        return 2.0 * _require(res, "momentum quadrature")
    res = integrate_interval(integrand, -p_max, p_max, tol,
                             initial_panels=32)
    return _require(res, "momentum quadrature")


def shannon_p(state: BoundState, tol: float = 1e-10, *,
              amplitude: Optional[Callable] = None) -> float:
    """Momentum Shannon entropy S_p = -integral |phi|^2 ln |phi|^2 dp.

    Integrates over [-p_max, p_max] with p_max from
    :func:`pdmqi.numerics.momentum_cutoff`, beyond which the csch tail is
    below 1e-14.  By default phi is the state's numeric Fourier transform;
    pass ``amplitude`` to evaluate an alternative momentum form (used for
    the published-constants comparison).
    """
    phi = amplitude if amplitude is not None else state.numeric_phi
    return -_momentum_integral(state, lambda p: _rho_ln_rho(phi(p)), tol)


def fisher_x(state: BoundState, tol: float = 1e-11) -> float:
    """Position Fisher information F_x = 4 integral psi'(x)^2 dx.

    Equals 4 <p^2> / hbar^2 for real amplitudes.
    """
    if not state.closed_form:
        tol = max(tol, 1e-7)
    res = integrate_real_line(
        lambda x: 4.0 * np.asarray(state.psi_prime(x)) ** 2, tol,
        scale=1.0 / state.params.a)
    return _require(res, "F_x quadrature")


def fisher_p(state: BoundState, tol: float = 1e-11, *,
             amplitude_prime: Optional[Callable] = None) -> float:
    """Momentum Fisher information F_p = 4 integral phi'(p)^2 dp.

    Equals 4 <x^2> for real amplitudes.  By default phi' comes from the
    numeric transform (a sine transform of x psi); ``amplitude_prime``
    substitutes an alternative derivative evaluator.
    """
    dphi = amplitude_prime if amplitude_prime is not None \
        else state.numeric_phi.derivative
    return _momentum_integral(
        state, lambda p: 4.0 * np.asarray(dphi(p)) ** 2, tol)


@dataclass(frozen=True)
class Moments:
    """First and second moments with the derived standard deviations.

    ``p2_mean`` is the position-space route -integral psi psi'' dx;
    ``p2_mean_transform`` the momentum-space route integral p^2 |phi|^2 dp.
    Construction fails if the two disagree beyond 1e-5 relative.
    """

    x_mean: float
    x2_mean: float
    p_mean: float
    p2_mean: float
    sigma_x: float
    sigma_p: float
    p2_mean_transform: float


def moments(state: BoundState, tol: float = 1e-11) -> Moments:
    """Position and momentum moments of one state.

    <p^2> is computed twice (through psi'' and through the numeric
    transform); a discrepancy beyond 1e-5 relative raises MomentMismatch.
    """
    a = state.params.a
    x_mean = _require(
        integrate_real_line(
            lambda x: np.asarray(x) * np.asarray(state.psi(x)) ** 2,
            tol, scale=1.0 / a),
        "<x> quadrature")
    x2_mean = _require(
        integrate_real_line(
            lambda x: np.asarray(x) ** 2 * np.asarray(state.psi(x)) ** 2,
            tol, scale=1.0 / a),
        "<x^2> quadrature")
    # Finite-difference second derivatives carry a roundoff floor the
    # quadrature cannot certify below.
    p2_tol = tol if state.closed_form else max(tol, 2e-6)
    p2_position = -_require(
        integrate_real_line(
            lambda x: np.asarray(state.psi(x)) * np.asarray(state.psi_dprime(x)),
            p2_tol, scale=1.0 / a),
        "<p^2> quadrature")

    phi = state.numeric_phi
    p2_transform = _momentum_integral(
        state, lambda p: np.asarray(p) ** 2 * np.asarray(phi(p)) ** 2,
        max(tol, 1e-9))
    scale_ref = max(abs(p2_position), abs(p2_transform))
    if abs(p2_position - p2_transform) > 1e-5 * scale_ref:
        raise MomentMismatch(
            f"<p^2> routes disagree: {p2_position!r} (psi'') vs "
            f"{p2_transform!r} (transform)")

    p_mean = _momentum_integral(
        state, lambda p: np.asarray(p) * np.asarray(phi(p)) ** 2,
        max(tol, 1e-10), symmetric_even=False)

    hbar = state.params.hbar
    sigma_x = math.sqrt(x2_mean - x_mean ** 2)
    sigma_p = math.sqrt(hbar ** 2 * p2_position - p_mean ** 2)
    return Moments(x_mean=x_mean, x2_mean=x2_mean, p_mean=p_mean,
                   p2_mean=p2_position, sigma_x=sigma_x, sigma_p=sigma_p,
                   p2_mean_transform=p2_transform)


def build_report(state: BoundState, *, quad_tol: float = 1e-11,
                 fourier_tol: float = 1e-10,
                 published_route: bool = True) -> InfoReport:
    """Assemble the full information report for one state.

    ``quad_tol`` governs position-space quadratures, ``fourier_tol`` the
    momentum-space ones.  With ``published_route`` (and n <= 2), S_p and F_p are
    additionally evaluated from the published closed-form momentum
    amplitudes and attached for comparison.
    """
    mom = moments(state, quad_tol)
    s_x = shannon_x(state, quad_tol)
    s_p = shannon_p(state, fourier_tol)
    f_x = fisher_x(state, quad_tol)
    f_p = fisher_p(state, fourier_tol)

    s_p_published = f_p_published = None
    if published_route and state.n <= 2:
        params = state.params
        s_p_published = shannon_p(
            state, fourier_tol,
            amplitude=lambda p: normalized_phi(state.n, p, params))
        f_p_published = fisher_p(
            state, fourier_tol,
            amplitude_prime=lambda p: normalized_phi_prime(state.n, p, params))

    return InfoReport(
        n=state.n,
        a=state.params.a,
        s_x=s_x,
        s_p=s_p,
        s_sum=s_x + s_p,
        bbm_bound=BBM_BOUND,
        f_x=f_x,
        f_p=f_p,
        x_mean=mom.x_mean,
        x2_mean=mom.x2_mean,
        p_mean=mom.p_mean,
        p2_mean=mom.p2_mean,
        sigma_x=mom.sigma_x,
        sigma_p=mom.sigma_p,
        uncertainty_product=mom.sigma_x * mom.sigma_p,
        hbar=state.params.hbar,
        p2_mean_transform=mom.p2_mean_transform,
        s_p_published=s_p_published,
        f_p_published=f_p_published,
    )


def inequality_report(report: InfoReport) -> InequalityMargins:
    """Margins (lhs - rhs) of the five uncertainty inequalities.

    All margins are >= 0 for valid states up to numerical noise; violations
    show up as negative margins, never as exceptions.
    """
    hbar = report.hbar
    return InequalityMargins(
        bbm_margin=report.s_sum - report.bbm_bound,
        cramer_rao_x_margin=report.f_x - 1.0 / report.sigma_x ** 2,
        cramer_rao_p_margin=report.f_p - 1.0 / report.sigma_p ** 2,
        heisenberg_margin=report.uncertainty_product - 0.5 * hbar,
        fisher_product_margin=report.f_x * report.f_p - 4.0 / hbar ** 2,
    )
