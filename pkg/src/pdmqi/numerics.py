"""Numerical backbone: quadrature, Fourier transform, spectrum oracle.

Three independent services:

* adaptive Gauss panel quadrature on finite intervals and (through an
  algebraic map onto (-1, 1)) on the whole real line;
* a unitary cosine transform for even, exponentially decaying amplitudes,
  both one value at a time and as a vectorized fixed-rule operator;
* a second-order finite-difference Dirichlet eigensolver on the compact
  z-interval, used as the independent oracle for the closed-form spectrum.

Every routine is deterministic for fixed inputs and keeps no shared mutable
state, so independent calls can run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (
    ConvergenceFailure,
    NotConverged,
    SingularAtOrigin,
    SingularPotentialOnGrid,
)
from .model import ModelParams, effective_potential_z

_HALF_PI = math.pi / 2.0


def momentum_cutoff(a: float) -> float:
    """Momentum integration cutoff p_max = ceil(2 a * 32 / pi).

    Pins the csch tail factor e^{-pi p_max / 2a} at or below e^-32 ~ 1e-14;
    every momentum-space integral (entropies, Fisher, moments) runs over
    [-p_max, p_max].
    """
    return float(math.ceil(2.0 * a * 32.0 / math.pi))


_GL15_NODES, _GL15_WEIGHTS = np.polynomial.legendre.leggauss(15)
_GL7_NODES, _GL7_WEIGHTS = np.polynomial.legendre.leggauss(7)
_GL24_NODES, _GL24_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass(frozen=True)
class QuadratureResult:
    """Value and diagnostics of one quadrature run."""

    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool


def _panel_rule(f, lows, highs):
    """GL15/GL7 estimates on a batch of panels; returns (I15, err, evals)."""
    mid = 0.5 * (lows + highs)
    half = 0.5 * (highs - lows)
    x15 = mid[:, None] + half[:, None] * _GL15_NODES
    x7 = mid[:, None] + half[:, None] * _GL7_NODES
    f15 = np.asarray(f(x15.ravel()), dtype=float).reshape(x15.shape)
    f7 = np.asarray(f(x7.ravel()), dtype=float).reshape(x7.shape)
    i15 = (f15 * _GL15_WEIGHTS).sum(axis=1) * half
    i7 = (f7 * _GL7_WEIGHTS).sum(axis=1) * half
    return i15, np.abs(i15 - i7), x15.size + x7.size


def integrate_interval(f, lo: float, hi: float, tol: float = 1e-10, *,
                       max_evals: int = 400_000,
                       initial_panels: int = 8) -> QuadratureResult:
    """Globally adaptive Gauss quadrature of a vectorized integrand.

    The integrand must accept a 1-D numpy array.  Panels whose GL15/GL7
    discrepancy dominates the error budget are bisected until the summed
    estimate drops below ``tol`` (absolute) or the evaluation budget runs
    out; in the latter case the best value is still returned with
    ``converged=False``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    edges = np.linspace(lo, hi, initial_panels + 1)
    lows, highs = edges[:-1], edges[1:]
    values, errors, evals = _panel_rule(f, lows, highs)
    while True:
        total_err = float(errors.sum())
        if total_err <= tol:
            return QuadratureResult(float(values.sum()), total_err, evals, True)
        if evals >= max_evals:
            return QuadratureResult(float(values.sum()), total_err, evals, False)
        threshold = max(tol / (2 * len(lows)), 0.25 * errors.max())
        split = errors >= threshold
        if not split.any():
            split[np.argmax(errors)] = True
        keep = ~split
        mid = 0.5 * (lows[split] + highs[split])
        new_lows = np.concatenate([lows[split], mid])
        new_highs = np.concatenate([mid, highs[split]])
        new_vals, new_errs, n = _panel_rule(f, new_lows, new_highs)
        evals += n
        lows = np.concatenate([lows[keep], new_lows])
        highs = np.concatenate([highs[keep], new_highs])
        values = np.concatenate([values[keep], new_vals])
        errors = np.concatenate([errors[keep], new_errs])


def integrate_real_line(f, tol: float = 1e-10, *, scale: float = 1.0,
                        max_evals: int = 400_000) -> QuadratureResult:
    """Integrate a bounded, absolutely integrable f over the real line.

    Uses the algebraic map x = scale * t / (1 - t^2), which sends (-1, 1)
    onto the real line with a Jacobian that decays integrands faster than
    any polynomial near the endpoints, then runs the adaptive panel rule in
    t.  ``scale`` positions the resolution near the integrand's natural
    width; the adaptive refinement makes the default workable for any
    smooth, decaying integrand.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")

    def transformed(t):
        one_minus = 1.0 - t * t
        x = scale * t / one_minus
        jac = scale * (1.0 + t * t) / (one_minus * one_minus)
        return f(x) * jac

    return integrate_interval(transformed, -1.0, 1.0, tol,
                              max_evals=max_evals, initial_panels=16)


def numeric_fourier(psi, p, tol: float = 1e-8, *, scale: float = 1.0):
    """Unitary Fourier transform of a real even amplitude at momentum p.

    Returns (1/sqrt(2 pi)) * integral of psi(x) cos(p x) dx; with the
    e^{-i p x} convention the sine part vanishes for even psi, and the
    cosine form avoids cancellation.  Accepts a scalar or an array of p
    values.

    Raises
    ------
    NotConverged
        If the quadrature cannot reach ``tol`` within its budget.
    """
    p_arr = np.asarray(p, dtype=float)
    flat = np.atleast_1d(p_arr).ravel()
    out = np.empty_like(flat)
    norm = 1.0 / math.sqrt(2.0 * math.pi)
    for i, pv in enumerate(flat):
        res = integrate_real_line(lambda x: psi(x) * np.cos(pv * x),
                                  tol, scale=scale)
        if not res.converged:
            raise NotConverged(
                f"Fourier quadrature at p={pv} stalled at "
                f"{res.abs_error_estimate:.3e}", res)
        out[i] = norm * res.value
    if p_arr.ndim == 0:
        return float(out[0])
    return out.reshape(p_arr.shape)


class CosineTransform:
    """Fixed-rule vectorized cosine transform of one even amplitude.

    Builds a composite Gauss rule on [0, x_max] dense enough to resolve
    cos(p x) up to ``p_cap``, validates it by node doubling until the probe
    transform values are stable below ``tol``, then evaluates

        phi(p)  = sqrt(2/pi) * integral_0^inf psi(x) cos(p x) dx
        phi'(p) = -sqrt(2/pi) * integral_0^inf x psi(x) sin(p x) dx

    as matrix products.  Intended for bound-state amplitudes decaying at
    least exponentially; x_max must cover the decay.
    """

    def __init__(self, psi, x_max: float, p_cap: float, tol: float = 1e-12,
                 max_doublings: int = 6):
        self.p_cap = float(p_cap)
        self.tol = float(tol)
        panels = max(16, math.ceil(x_max * max(p_cap, 1.0) / 8.0))
        probe = np.linspace(0.0, max(p_cap, 1.0), 7)
        nodes, weights = self._rule(psi, x_max, panels)
        ref = self._apply(np.cos, probe, nodes, weights)
        drift = math.inf
        for _ in range(max_doublings):
            panels *= 2
            nodes2, weights2 = self._rule(psi, x_max, panels)
            ref2 = self._apply(np.cos, probe, nodes2, weights2)
            drift = float(np.max(np.abs(ref2 - ref)))
            nodes, weights, ref = nodes2, weights2, ref2
            if drift <= tol:
                break
        self.abs_error_estimate = drift
        self.converged = drift <= tol
        self._x = nodes
        self._wpsi = weights
        self._xwpsi = nodes * weights

    @staticmethod
    def _rule(psi, x_max, panels):
        edges = np.linspace(0.0, x_max, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        x = (mid[:, None] + half[:, None] * _GL24_NODES).ravel()
        w = (half[:, None] * _GL24_WEIGHTS).ravel()
        return x, w * np.asarray(psi(x), dtype=float)

    @staticmethod
    def _apply(kernel, p, x, wpsi, chunk: int = 512):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        out = np.empty(p.shape)
        pref = math.sqrt(2.0 / math.pi)
        for start in range(0, p.size, chunk):
            block = p[start:start + chunk]
            out[start:start + chunk] = pref * (kernel(np.outer(block, x)) @ wpsi)
        return out

    def __call__(self, p):
        p_arr = np.asarray(p, dtype=float)
        out = self._apply(np.cos, p_arr.ravel(), self._x, self._wpsi)
        return float(out[0]) if p_arr.ndim == 0 else out.reshape(p_arr.shape)

    def derivative(self, p):
        p_arr = np.asarray(p, dtype=float)
        out = -self._apply(np.sin, p_arr.ravel(), self._x, self._xwpsi)
        return float(out[0]) if p_arr.ndim == 0 else out.reshape(p_arr.shape)


@dataclass(frozen=True)
class GridSpec:
    """Uniform Dirichlet grid on a subinterval of (-pi/2, pi/2).

    ``points`` counts interior nodes; the walls at z_min and z_max carry the
    boundary condition phi = 0 and are never evaluated, which is what allows
    potentials diverging at the interval ends.
    """

    z_min: float
    z_max: float
    points: int
    boundary: str = "dirichlet"

    # Walls may approach but not touch +-pi/2.
    EDGE_OFFSET = 1e-6

    def __post_init__(self):
        if self.boundary != "dirichlet":
            raise ValueError("only Dirichlet boundaries are supported")
        if self.points < 64:
            raise ValueError("GridSpec needs at least 64 points")
        if not self.z_min < self.z_max:
            raise ValueError("z_min must be below z_max")
        if self.z_min < -_HALF_PI + self.EDGE_OFFSET or \
                self.z_max > _HALF_PI - self.EDGE_OFFSET:
            raise ValueError(
                "grid walls must sit inside (-pi/2, pi/2) by at least "
                f"{self.EDGE_OFFSET}")

    def interior(self, points: Optional[int] = None) -> np.ndarray:
        n = self.points if points is None else points
        return np.linspace(self.z_min, self.z_max, n + 2)[1:-1]


@dataclass(frozen=True)
class SpectrumResult:
    """Lowest eigenpairs of the effective-potential problem.

    ``eigenvalues`` are the raw dimensionless values at the requested grid;
    ``eigenvalues_richardson`` add one h -> h/2 extrapolation step.
    Physical energies follow as E = eps * a^2 hbar^2 / (2 m0).
    Eigenvectors are L2-normalized with trapezoid weights on ``z`` and, for
    half-domain solves (z_min > 0), already reflected evenly onto the full
    symmetric interval.
    """

    eigenvalues: np.ndarray
    eigenvalues_richardson: np.ndarray
    eigenvectors: np.ndarray
    z: np.ndarray
    grid: GridSpec
    convergence_order: float

    def __post_init__(self):
        if not np.all(np.diff(self.eigenvalues) > 0):
            raise ValueError("eigenvalues must be strictly increasing")


def _solve_interior(vfun, grid: GridSpec, points: int, k_levels: int,
                    want_vectors: bool):
    z = grid.interior(points)
    h = z[1] - z[0]
    try:
        v = np.asarray(vfun(z), dtype=float)
    except SingularAtOrigin as exc:
        raise SingularPotentialOnGrid(str(exc)) from exc
    if not np.all(np.isfinite(v)):
        raise SingularPotentialOnGrid(
            "effective potential is not finite on every interior node")
    diag = 2.0 / h ** 2 + v
    off = np.full(points - 1, -1.0 / h ** 2)
    try:
        if want_vectors:
            w, vecs = eigh_tridiagonal(diag, off, select="i",
                                       select_range=(0, k_levels - 1))
            return z, h, w, vecs
        w = eigh_tridiagonal(diag, off, select="i",
                             select_range=(0, k_levels - 1),
                             eigvals_only=True)
        return z, h, w, None
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc


def fd_eigensolve(params: ModelParams, grid: GridSpec, k_levels: int, *,
                  potential: Optional[Callable] = None) -> SpectrumResult:
    """Finite-difference oracle for -phi'' + V_eff(z) phi = eps phi.

    Second-order central differences on the uniform grid, symmetric
    tridiagonal eigensolve for the lowest ``k_levels`` levels.  The solve is
    repeated on grids with spacing h, h/2 and h/4: the first pair feeds one
    Richardson step, the triple measures the empirical convergence order.

    ``potential`` overrides the model's effective potential (used for
    calibration spectra such as the flat box); by default the potential
    comes from :func:`pdmqi.model.effective_potential_z`.

    When the requested grid lies strictly in z > 0 (the split-domain case
    for V1 + V2 > 0), eigenvectors are extended to the full interval by even
    reflection, matching the even, origin-vanishing bound states.
    """
    if k_levels < 1:
        raise ValueError("k_levels must be at least 1")
    if k_levels >= grid.points:
        raise ValueError("k_levels must be below the number of grid points")
    vfun = potential if potential is not None else \
        (lambda z: effective_potential_z(z, params))

    n0 = grid.points
    z, h, w0, vecs = _solve_interior(vfun, grid, n0, k_levels, True)
    _, _, w1, _ = _solve_interior(vfun, grid, 2 * n0 + 1, k_levels, False)
    _, _, w2, _ = _solve_interior(vfun, grid, 4 * n0 + 3, k_levels, False)

    richardson = (4.0 * w1 - w0) / 3.0
    orders = []
    for c0, c1, c2 in zip(w0, w1, w2):
        num, den = abs(c0 - c1), abs(c1 - c2)
        if den > 1e3 * np.finfo(float).eps * max(abs(c2), 1.0):
            orders.append(math.log2(num / den))
    order = float(np.median(orders)) if orders else float("nan")

    # Sign convention: make the first appreciable component positive.
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        lead = col[np.argmax(np.abs(col) > 1e-8 * np.abs(col).max())]
        if lead < 0:
            vecs[:, j] = -col

    if grid.z_min > 0.0:
        z_full = np.concatenate([-z[::-1], z])
        vecs_full = np.vstack([vecs[::-1, :], vecs])
        z, vecs = z_full, vecs_full

    norms = np.sqrt(np.trapezoid(vecs ** 2, z, axis=0))
    vecs = vecs / norms

    return SpectrumResult(
        eigenvalues=w0,
        eigenvalues_richardson=richardson,
        eigenvectors=vecs.T,
        z=z,
        grid=grid,
        convergence_order=order,
    )
