"""Transition-probability kernels for the discrete Gaussian walks.

Two theta-type functions drive every transition::

    p(x; sigma) = sum_{j >= 1} (-1)^(j-1) exp(-(j^2 + 2 x j) / (2 sigma^2))
    r(f; sigma) = sum_{j in Z} (-1)^j exp(-(j^2 + 2 f j) / (2 sigma^2))

For ``x >= -1/2`` the terms of ``p`` decrease strictly in magnitude, so the
series is alternating and the first omitted term bounds the truncation
error.  ``r`` also has a product form (Jacobi triple product) with every
factor in ``[0, 1]``; it is evaluated independently and used as a
cross-check of the series.

Scalar functions return :class:`Probability`, carrying a rigorous bound on
the truncation error plus an estimate of binary64 roundoff.  The ``*_array``
variants evaluate many points at once for a single ``sigma`` and are what
the Monte Carlo and grid checks use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConsistencyError, DomainError

DEFAULT_TOL = 1e-12

# beyond this many terms the scalar evaluators switch to numpy
_VECTOR_CUTOFF = 128
_EPS = float(np.finfo(float).eps)
# below this k even tol = 5e-324 needs fewer than _VECTOR_CUTOFF terms
_VECTOR_K = 745.2 / ((_VECTOR_CUTOFF - 0.5) ** 2 - 0.25)
# worst-case roundoff of a scalar series with at most _VECTOR_CUTOFF terms
_ROUNDOFF_ROOM = (3 * _VECTOR_CUTOFF + 4) * _EPS
# excursions outside [0, 1] larger than this are bugs, not roundoff
_CLAMP_SLACK = 1e-9


@dataclass(frozen=True)
class WalkParams:
    """Scale ``sigma`` and lattice shift ``f`` of one walk."""

    sigma: float
    f: float = 0.0

    def __post_init__(self):
        _check_sigma(self.sigma)
        _check_shift(self.f)


class Probability(NamedTuple):
    value: float
    abs_error_bound: float


class InequalityCheck(NamedTuple):
    holds: bool
    margin: float
    error_bound: float


def _check_sigma(sigma):
    if not (math.isfinite(sigma) and sigma > 0):
        raise DomainError(f"sigma must be positive and finite, got {sigma!r}")


def _check_shift(f):
    if not (-0.5 <= f <= 0.5):
        raise DomainError(f"shift f must lie in [-1/2, 1/2], got {f!r}")


def _check_tol(tol):
    if not (0 < tol < 1):
        raise DomainError(f"tol must lie in (0, 1), got {tol!r}")


def _clamp(value, what="probability", arg=None):
    if value < 0.0:
        if value < -_CLAMP_SLACK:
            raise ConsistencyError(f"{what}({arg}) = {value!r} outside [0, 1]")
        return 0.0
    if value > 1.0:
        if value > 1.0 + _CLAMP_SLACK:
            raise ConsistencyError(f"{what}({arg}) = {value!r} outside [0, 1]")
        return 1.0
    return value


def _one_sided(x, k, tol):
    """Alternating sum of exp(-(j^2 + 2xj) k) over j >= 1, for x >= -1/2.

    Returns ``(sum, error_bound, n_terms)``.  The bound is the first omitted
    term plus binary64 roundoff: each term is within a few ulps because
    ``|y| e^y <= 1/e`` for the exponent ``y``, and every partial sum is in
    ``[0, 1]``.
    """
    exp = math.exp
    c = -k
    a = -2.0 * x * k
    term = exp(a + c)
    if term < tol:
        return 0.0, term, 0
    # the cheap k test rules out the vector path for sigma below about 3.3
    if k < _VECTOR_K and -x + math.sqrt(x * x - math.log(tol) / k) > _VECTOR_CUTOFF:
        return _one_sided_vector(x, k, 0.5 * tol)
    # leave room for roundoff so that the returned bound stays below tol
    tol = tol - _ROUNDOFF_ROOM if tol > 2 * _ROUNDOFF_ROOM else 0.5 * tol
    total = 0.0
    j = 1
    while True:
        total += term
        j += 1
        term = exp(j * (j * c + a))
        if term < tol:
            break
        total -= term
        j += 1
        term = exp(j * (j * c + a))
        if term < tol:
            break
    return total, term + (3 * j + 1) * _EPS, j - 1


def _one_sided_vector(x, k, tol):
    # large sigma: thousands of terms, summed as nonnegative adjacent pairs
    n = int(math.ceil(-x + math.sqrt(x * x - math.log(tol) / k))) + 2
    while True:
        j = np.arange(1, n + 1, dtype=float)
        y = -(j * j + 2.0 * x * j) * k
        terms = np.exp(y)
        below = np.flatnonzero(terms < tol)
        if below.size:
            break
        n *= 2
    m = int(below[0])
    kept = terms[:m]
    if m % 2:
        kept = np.append(kept, 0.0)
    total = float(np.sum(kept[0::2] - kept[1::2]))
    roundoff = _EPS * (
        float(terms[:m].sum()) + 3.0 * float(np.dot(-y[:m], terms[:m])) + 2.0 * math.log2(m + 1) + 2.0
    )
    return total, float(terms[m]) + roundoff, m


def eval_p(x, sigma, tol=DEFAULT_TOL):
    """Probability of stepping away from the origin from ``n + f``.

    ``x`` is ``n + f`` for ``n >= 1`` or ``|n| - f`` for ``n <= -1``; at the
    origin the two outward probabilities are ``p(f)`` and ``p(-f)``.

    >>> round(eval_p(0.0, 1.0).value, 6)
    0.481973
    """
    if not x >= -0.5:
        raise DomainError(f"p(x) is evaluated only for x >= -1/2, got {x!r}")
    _check_sigma(sigma)
    _check_tol(tol)
    k = 0.5 / (sigma * sigma)
    total, bound, _ = _one_sided(x, k, tol)
    return Probability(_clamp(total, "p", x), bound)


def eval_r_series(f, sigma, tol=DEFAULT_TOL):
    """Probability of staying put at the origin, by the two-sided series."""
    _check_shift(f)
    _check_sigma(sigma)
    _check_tol(tol)
    k = 0.5 / (sigma * sigma)
    plus, bound_plus, _ = _one_sided(f, k, 0.5 * tol)
    minus, bound_minus, _ = _one_sided(-f, k, 0.5 * tol)
    total = 1.0 - plus - minus
    bound = bound_plus + bound_minus + 2 * _EPS
    return Probability(_clamp(total, "r", f), bound)


def _product_terms(f, sigma, tol):
    """Number of factor triples needed so the omitted ones move the product by < tol/2."""
    s2 = sigma * sigma
    b = math.exp(-1.0 / s2)
    # geometric tails of the three factor families after J triples
    lo = 0.5 / s2
    j = max(1, int(math.ceil(s2 * (math.log(12.0 / ((1.0 - b) * tol)) + 1.0))))
    while True:
        y1 = math.exp(-(j + 1) / s2)
        y2 = math.exp(-(2 * (j + 1) + 2 * f - 1) * lo)
        y3 = math.exp(-(2 * (j + 1) - 2 * f - 1) * lo)
        ymax = max(y1, y2, y3)
        tail = (y1 + y2 + y3) / (1.0 - b)
        if ymax < 1 and tail / (1.0 - ymax) < 0.5 * tol:
            return j
        j *= 2


def eval_r_product(f, sigma, tol=DEFAULT_TOL):
    """Stay probability at the origin via the Jacobi triple product.

    Every factor lies in ``[0, 1]`` for ``|f| <= 1/2``; the result is
    computed without reference to :func:`eval_r_series` and serves as its
    oracle.
    """
    _check_shift(f)
    _check_sigma(sigma)
    _check_tol(tol)
    n_terms = _product_terms(f, sigma, tol)
    s2 = sigma * sigma
    j = np.arange(1, n_terms + 1, dtype=float)
    factors = np.concatenate(
        [
            -np.expm1(-j / s2),
            -np.expm1(-(2 * j + 2 * f - 1) / (2 * s2)),
            -np.expm1(-(2 * j - 2 * f - 1) / (2 * s2)),
        ]
    )
    value = float(np.prod(factors))
    bound = 0.5 * tol + 3 * n_terms * _EPS * value
    return Probability(_clamp(value, "r", f), bound)


def check_balance_inequality(sigma, f, tol=DEFAULT_TOL):
    """Test ``p(1 + f) >= r(f) exp((2f + 1) / (2 sigma^2))``.

    The difference is the probability that the +-1/+2 walk jumps from
    ``1 + f`` to ``2 + f``, so it must be nonnegative.  ``holds`` is False
    only when the margin is negative beyond the combined error bound.
    """
    if not sigma >= 1:
        raise DomainError(f"the +-1/+2 walk needs sigma >= 1, got {sigma!r}")
    _check_shift(f)
    p = eval_p(1.0 + f, sigma, tol)
    r = eval_r_series(f, sigma, tol)
    weight = math.exp((2 * f + 1) / (2 * sigma * sigma))
    margin = p.value - r.value * weight
    err = p.abs_error_bound + weight * r.abs_error_bound
    return InequalityCheck(bool(margin >= -err), margin, err)


def _p_terms_needed(xmin, k, tol):
    j = 1
    while math.exp(-(j * j + 2.0 * xmin * j) * k) >= tol:
        j += 1
    return j - 1


def p_array(x, sigma, tol=DEFAULT_TOL):
    """Vectorized :func:`eval_p` for one ``sigma``; returns an ndarray.

    Writes each term as ``c_j q^j`` with ``c_j = exp(-j^2 k)`` and
    ``q = exp(-2 x k)`` and evaluates the resulting polynomial in ``q`` by
    Horner's rule, truncated where the smallest ``x`` stops contributing.
    """
    x = np.asarray(x, dtype=float)
    if x.size and not np.all(x >= -0.5):
        raise DomainError("p(x) is evaluated only for x >= -1/2")
    _check_sigma(sigma)
    _check_tol(tol)
    if x.size == 0:
        return np.zeros_like(x)
    k = 0.5 / (sigma * sigma)
    n_terms = _p_terms_needed(float(x.min()), k, tol)
    if n_terms == 0:
        return np.zeros_like(x)
    j = np.arange(1, n_terms + 1, dtype=float)
    coef = np.exp(-j * j * k)
    coef[1::2] *= -1.0
    q = np.exp(-2.0 * k * x)
    acc = np.full_like(x, coef[-1])
    for c in coef[-2::-1]:
        acc *= q
        acc += c
    acc *= q
    return np.clip(acc, 0.0, 1.0)


def r_array(f, sigma, tol=DEFAULT_TOL):
    """Vectorized two-sided series for ``r``; ``f`` in ``[-1/2, 1/2]``."""
    f = np.asarray(f, dtype=float)
    if f.size and not np.all(np.abs(f) <= 0.5):
        raise DomainError("shift f must lie in [-1/2, 1/2]")
    return np.clip(1.0 - p_array(f, sigma, 0.5 * tol) - p_array(-f, sigma, 0.5 * tol), 0.0, 1.0)
