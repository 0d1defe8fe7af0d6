"""Terminating Gauss hypergeometric series.

The bound-state closed forms only ever need ``2F1(a, b; c; w)`` with one
upper parameter equal to a non-positive integer, so the series is a finite
polynomial and converges for every real argument -- including the
``w = coth^2 >= 1`` values the wavefunctions produce, which lie outside the
convergence disk of the infinite series.  Non-terminating parameter sets are
rejected instead of analytically continued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonTerminating, PoleInC

# Absorbs rounding noise when quantization arithmetic produces the integer.
INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class HypergeometricArgs:
    """Parameter set (a, b; c; z) of a Gauss hypergeometric evaluation."""

    a_param: float
    b_param: float
    c_param: float
    z: float


def _terminating_index(value: float) -> int | None:
    """Return n >= 0 such that value == -n within INTEGER_TOL, else None."""
    if value > INTEGER_TOL:
        return None
    n = round(-value)
    if abs(value + n) <= INTEGER_TOL:
        return int(n)
    return None


def hyp2f1_terminating(args: HypergeometricArgs) -> float:
    """Evaluate a terminating 2F1 series exactly as a finite sum.

    Computes sum_{k=0}^{N} [(a)_k (b)_k / (c)_k] z^k / k!, where N is fixed
    by the upper parameter that is a non-positive integer.  The result is a
    polynomial value, exact up to rounding, valid for any real z.

    Raises
    ------
    NonTerminating
        If neither a_param nor b_param is a non-positive integer
        (within INTEGER_TOL).
    PoleInC
        If c_param is a non-positive integer that zeroes (c)_k before the
        series terminates.
    """
    a, b, c, z = args.a_param, args.b_param, args.c_param, args.z

    na = _terminating_index(a)
    nb = _terminating_index(b)
    if na is None and nb is None:
        raise NonTerminating(
            f"neither upper parameter of 2F1({a}, {b}; {c}; z) is a "
            "non-positive integer"
        )
    # Whichever upper parameter vanishes first ends the series; past that
    # point every term carries the zero Pochhammer factor.
    candidates = [n for n in (na, nb) if n is not None]
    n_terms = min(candidates)

    # (c)_k must stay nonzero for k = 0..n_terms-1, i.e. c not in
    # {0, -1, ..., -(n_terms-1)}.
    nc = _terminating_index(c)
    if nc is not None and nc < n_terms:
        raise PoleInC(
            f"c_param={c} zeroes the Pochhammer denominator at k={nc} "
            f"before the series terminates at k={n_terms}"
        )

    total = 1.0
    term = 1.0
    for k in range(n_terms):
        term *= (a + k) * (b + k) * z / ((c + k) * (k + 1))
        total += term
    return total


def hyp2f1_series(a: float, b: float, c: float, z: float, terms: int = 256) -> float:
    """Truncated infinite series, |z| < 1 only.  Cross-check oracle.

    Used to validate closed identities such as
    2F1(1/2, 3/2; 3/2; z) = (1 - z)^(-1/2) inside the unit disk; not meant
    for production evaluation.
    """
    if abs(z) >= 1:
        raise ValueError("series oracle requires |z| < 1")
    total = 1.0
    term = 1.0
    for k in range(terms):
        term *= (a + k) * (b + k) * z / ((c + k) * (k + 1))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def pochhammer(x: float, k: int) -> float:
    """Rising factorial (x)_k = x (x+1) ... (x+k-1)."""
    return math.prod(x + i for i in range(k)) if k else 1.0
