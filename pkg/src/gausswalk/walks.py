"""One step of the 0/+-1 walk and of the +-1/+2 walk at an arbitrary real point.

A point ``x`` is split as ``n + f`` with ``f`` in ``[-1/2, 1/2)``; the walk
moves ``x`` by an integer offset, so it never leaves the coset ``f + Z``.
Both walks keep the discrete Gaussian ``exp(-(n + f)^2 / (2 sigma^2))`` on
that coset stationary, hence keep ``N(0, sigma^2)`` stationary on the line.

``"jacobi"`` names the 0/+-1 walk (offsets -1, 0, +1) and ``"ramanujan"`` the
+-1/+2 walk (offsets -1, +1, +2, needs ``sigma >= 1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConsistencyError, DomainError
from .theta import DEFAULT_TOL, _clamp, _one_sided, p_array

WALKS = ("jacobi", "ramanujan")

JACOBI_SUPPORT = (-1, 0, 1)
RAMANUJAN_SUPPORT = (-1, 1, 2)

_SUM_SLACK = 1e-9


class LatticePosition(NamedTuple):
    n: int
    f: float
    x: float


def decompose(x):
    """Split ``x`` into ``n + f`` with integer ``n`` and ``f`` in ``[-1/2, 1/2)``.

    >>> decompose(2.5)
    LatticePosition(n=3, f=-0.5, x=2.5)
    """
    if not math.isfinite(x):
        raise DomainError(f"cannot place non-finite value {x!r} on the lattice")
    # x - floor(x) and f - 1 are both exact, unlike x + 0.5
    n = math.floor(x)
    f = x - n
    if f >= 0.5:
        n += 1
        f -= 1.0
    return LatticePosition(int(n), f, x)


@dataclass(frozen=True)
class StepProbabilities:
    """Distribution over integer step offsets for one transition."""

    support: tuple
    probs: tuple

    def __post_init__(self):
        if len(self.support) != len(self.probs) or not self.support:
            raise DomainError("support and probs must be non-empty and of equal length")
        probs = tuple(float(p) for p in self.probs)
        if any(not (0.0 <= p <= 1.0) for p in probs):
            raise DomainError(f"probabilities must lie in [0, 1], got {probs}")
        total = math.fsum(probs)
        if abs(total - 1.0) > _SUM_SLACK:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "support", tuple(int(s) for s in self.support))
        object.__setattr__(self, "probs", tuple(p / total for p in probs))

    def prob(self, offset):
        for s, p in zip(self.support, self.probs):
            if s == offset:
                return p
        return 0.0


def _p(x, k, tol):
    total = _one_sided(x, k, tol)[0]
    if 0.0 <= total <= 1.0:
        return total
    return _clamp(total, "p", x)


def transition(n, f, sigma, walk="jacobi", tol=DEFAULT_TOL):
    """Raw transition weights out of ``n + f``, as ``(support, probs)`` tuples.

    ``tol`` is the accuracy asked of each theta evaluation.  The weights are
    not renormalized here.
    """
    k = 0.5 / (sigma * sigma)
    if walk == "jacobi":
        if n >= 1:
            up = _p(n + f, k, tol)
            return JACOBI_SUPPORT, (1.0 - up, 0.0, up)
        if n <= -1:
            down = _p(-n - f, k, tol)
            return JACOBI_SUPPORT, (down, 0.0, 1.0 - down)
        up = _p(f, k, tol)
        down = _p(-f, k, tol)
        return JACOBI_SUPPORT, (down, _stay(up, down, tol), up)
    if walk == "ramanujan":
        if sigma < 1:
            raise DomainError(f"the +-1/+2 walk needs sigma >= 1, got {sigma!r}")
        if n >= 2:
            up = _p(n + f, k, tol)
            return RAMANUJAN_SUPPORT, (1.0 - up, up, 0.0)
        if n <= -1:
            down = _p(-n - f, k, tol)
            return RAMANUJAN_SUPPORT, (down, 1.0 - down, 0.0)
        if n == 0:
            up = _p(f, k, tol)
            down = _p(-f, k, tol)
            return RAMANUJAN_SUPPORT, (down, up, _stay(up, down, tol))
        # n == 1: climb to 2 + f with the slack left by the extra 0 -> 2 jumps
        up = _p(1.0 + f, k, tol)
        stay_at_origin = _stay(_p(f, k, tol), _p(-f, k, tol), tol)
        jump = up - stay_at_origin * math.exp((2 * f + 1) * k)
        if jump < -4 * tol - _SUM_SLACK:
            raise ConsistencyError(
                f"negative climb probability {jump!r} at 1 + {f}, sigma={sigma}"
            )
        jump = max(jump, 0.0)
        return RAMANUJAN_SUPPORT, (1.0 - jump, jump, 0.0)
    raise DomainError(f"unknown walk {walk!r}; expected one of {WALKS}")


def _stay(up, down, tol):
    r = 1.0 - up - down
    if r < 0.0:
        # each p carries up to tol of truncation error
        if r < -2 * tol - _SUM_SLACK:
            raise ConsistencyError(f"stay probability {r!r} is negative")
        return 0.0
    return r


def _validate_sigma(sigma, walk):
    if not (math.isfinite(sigma) and sigma > 0):
        raise DomainError(f"sigma must be positive and finite, got {sigma!r}")
    if walk == "ramanujan" and sigma < 1:
        raise DomainError(f"the +-1/+2 walk needs sigma >= 1, got {sigma!r}")


def jacobi_distribution(x, sigma, tol=DEFAULT_TOL):
    """Step distribution of the 0/+-1 walk at ``x`` (support -1, 0, +1)."""
    _validate_sigma(sigma, "jacobi")
    pos = decompose(x)
    support, probs = transition(pos.n, pos.f, sigma, "jacobi", 0.25 * tol)
    return StepProbabilities(support, probs)


def ramanujan_distribution(x, sigma, tol=DEFAULT_TOL):
    """Step distribution of the +-1/+2 walk at ``x`` (support -1, +1, +2)."""
    _validate_sigma(sigma, "ramanujan")
    pos = decompose(x)
    support, probs = transition(pos.n, pos.f, sigma, "ramanujan", 0.25 * tol)
    return StepProbabilities(support, probs)


def pick(support, probs, u):
    """Inverse-CDF choice of an offset for a uniform ``u`` in ``[0, 1)``.

    ``probs`` is renormalized on the fly; zero-probability offsets are never
    returned.
    """
    u *= sum(probs)
    acc = 0.0
    chosen = None
    for s, p in zip(support, probs):
        if p > 0.0:
            chosen = s
            acc += p
            if u < acc:
                return s
    if chosen is None:
        raise DomainError("distribution has no positive mass")
    return chosen


def sample_step(dist, rng):
    """Draw one offset from ``dist`` using exactly one uniform from ``rng``."""
    return pick(dist.support, dist.probs, rng.random())


def step_many(x, sigma, walk, rng, tol=DEFAULT_TOL):
    """Sample one step of ``walk`` independently at every point of ``x``.

    Vectorized counterpart of :func:`sample_step` for Monte Carlo work; uses
    one uniform per point.
    """
    _validate_sigma(sigma, walk)
    if walk not in WALKS:
        raise DomainError(f"unknown walk {walk!r}; expected one of {WALKS}")
    x = np.asarray(x, dtype=float)
    n = np.floor(x)
    f = x - n
    hi = f >= 0.5
    n[hi] += 1.0
    f[hi] -= 1.0
    u = rng.random(x.shape)

    away = np.where(n >= 0, 1.0, -1.0)
    # probability of moving one further from the origin, for n != 0
    p_out = p_array(np.abs(n) + away * f, sigma, tol)
    step = np.where(u < p_out, away, -away)

    origin = n == 0
    if origin.any():
        fo = f[origin]
        uo = u[origin]
        up = p_out[origin]
        down = p_array(-fo, sigma, tol)
        third = 0.0 if walk == "jacobi" else 2.0
        step[origin] = np.where(uo < up, 1.0, np.where(uo < up + down, -1.0, third))

    if walk == "ramanujan":
        one = n == 1
        if one.any():
            fo = f[one]
            k = 0.5 / (sigma * sigma)
            stay = np.clip(1.0 - p_array(fo, sigma, tol) - p_array(-fo, sigma, tol), 0.0, 1.0)
            jump = np.clip(p_out[one] - stay * np.exp((2 * fo + 1) * k), 0.0, 1.0)
            step[one] = np.where(u[one] < jump, 1.0, -1.0)
    return step
