"""Online signing of a vector stream with Gaussian-coupled lattice walks.

:class:`OnlineBalancer` keeps a point ``w`` that is distributed as
``N(0, sigma^2 I)`` at every step.  Each incoming vector ``v`` is signed by
one step of a lattice walk along the direction of ``v``: with
``x = <w, v> / |v|^2`` and scale ``sigma / |v|``, the sampled offset ``s`` is
the sign and ``w`` moves to ``w + s v``, which shifts ``x`` by exactly ``s``.
The signed prefix sum is then ``w - w0``, a difference of two Gaussians, so
its coordinates stay small.

``mode="partial"`` uses the 0/+-1 walk (signs in {-1, 0, +1});
``mode="balance"`` uses the +-1/+2 walk (signs in {-1, +1, +2}, sigma >= 1).

The start point ``w0`` is sampled lazily, one coordinate the first time it
is touched, so the ambient dimension never has to be declared and each
step costs time proportional to the number of nonzeros of ``v``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from operator import mul, sub
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NormError, RoundCapExceeded
from .theta import DEFAULT_TOL
from .walks import _p, pick, transition

MODES = ("partial", "balance")
_WALK_OF_MODE = {"partial": "jacobi", "balance": "ramanujan"}
SIGN_DOMAIN = {"partial": (-1, 0, 1), "balance": (-1, 1, 2)}

NORM_SLACK = 1e-12
RNG_NAME = "numpy.random.PCG64"
_BUFFER = 4096


@dataclass(frozen=True)
class SparseVector:
    """Vector stored as strictly increasing indices and finite values.

    The Euclidean norm is computed once at construction; vectors longer
    than ``1 + 1e-12`` are rejected.
    """

    indices: tuple
    values: tuple
    norm: float = field(init=False)

    def __post_init__(self):
        idx = tuple(map(int, self.indices))
        vals = tuple(map(float, self.values))
        if len(idx) != len(vals):
            raise NormError("indices and values differ in length")
        if idx and (idx[0] < 0 or any(a >= b for a, b in zip(idx, idx[1:]))):
            raise NormError("indices must be nonnegative and strictly increasing")
        norm = math.hypot(*vals)
        if not math.isfinite(norm):
            raise NormError("vector has non-finite entries")
        if norm > 1.0 + NORM_SLACK:
            raise NormError(f"vector norm {norm!r} exceeds 1")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "norm", norm)

    @classmethod
    def from_dense(cls, values):
        arr = np.asarray(values, dtype=float).ravel()
        nz = np.flatnonzero(arr)
        return cls(tuple(nz.tolist()), tuple(arr[nz].tolist()))

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        return cls(tuple(i for i, _ in pairs), tuple(a for _, a in pairs))

    @property
    def nnz(self):
        return len(self.indices)

    def scaled(self, factor):
        return SparseVector(self.indices, tuple(factor * a for a in self.values))

    def to_dense(self, n):
        out = np.zeros(n)
        out[list(self.indices)] = self.values
        return out


def as_sparse(v):
    return v if isinstance(v, SparseVector) else SparseVector.from_dense(v)


class SignRecord(NamedTuple):
    step_index: int
    sign: int
    filtered: bool


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def _child(ss, key):
    """Independent stream ``key`` derived from ``ss``, reproducible in any order."""
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + (key,))


class _Draws:
    """Buffered draws from one PCG64 stream; same sequence as unbuffered use."""

    def __init__(self, ss, kind):
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self._kind = kind
        self._buf = []

    def __call__(self):
        if not self._buf:
            block = self._gen.random(_BUFFER) if self._kind == "uniform" else self._gen.standard_normal(_BUFFER)
            self._buf = block.tolist()[::-1]
        return self._buf.pop()


class _LazyPoint(dict):
    """Coordinates of ``w``; a missing one is drawn as ``sigma * N(0, 1)`` and
    memoized here, in ``origin`` and in ``base``.

    ``base`` is ``w0`` minus the filtered vectors, so the signed sum is
    ``w - base``.
    """

    __slots__ = ("_sigma", "_draw", "origin", "base")

    def __init__(self, sigma, draw):
        super().__init__()
        self._sigma = sigma
        self._draw = draw
        self.origin = {}
        self.base = {}

    def __missing__(self, i):
        g = self._sigma * self._draw()
        self[i] = g
        self.origin[i] = g
        self.base[i] = g
        return g


class RunningStats:
    """Signed prefix sum with its running l-infinity maximum."""

    def __init__(self):
        self.sums = defaultdict(float)
        self.running_max = 0.0

    def add(self, indices, values, sign=1):
        sums = self.sums
        if sign == 1:
            for i, a in zip(indices, values):
                sums[i] += a
        else:
            for i, a in zip(indices, values):
                sums[i] += sign * a
        if indices:
            m = max(map(abs, map(sums.__getitem__, indices)))
            if m > self.running_max:
                self.running_max = m

    def discrepancy(self):
        sums = dict(self.sums)
        return sums, max(map(abs, sums.values()), default=0.0)


class OnlineBalancer:
    """Sign vectors one at a time, keeping the signed sum Gaussian-bounded.

    Parameters
    ----------
    mode : {"partial", "balance"}
        ``"partial"`` may omit vectors (sign 0); ``"balance"`` never omits
        but may double a vector (sign +2).
    sigma : float
        Scale of the coupled Gaussian.  Larger values make omissions rarer
        and the discrepancy proportionally larger.
    delta : float
        Failure budget in ``(0, 1/2)``.  Step ``t`` evaluates transition
        probabilities to within ``delta / (2 t^2)``.
    seed : int, SeedSequence or None
        Seeds two independent PCG64 streams, one for ``w0`` and one for steps.

    Vectors with norm below ``1 / (2 t^2)`` at step ``t`` are signed +1
    without touching the walk; their total contribution to any coordinate
    is at most 1.
    """

    def __init__(self, mode="partial", sigma=1.0, delta=0.01, seed=None):
        if mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
        if not (math.isfinite(sigma) and sigma > 0):
            raise DomainError(f"sigma must be positive, got {sigma!r}")
        if mode == "balance" and sigma < 1:
            raise DomainError(f"balance mode needs sigma >= 1, got {sigma!r}")
        if not (0 < delta < 0.5):
            raise DomainError(f"delta must lie in (0, 1/2), got {delta!r}")
        self.mode = mode
        self.walk = _WALK_OF_MODE[mode]
        self.sigma = float(sigma)
        self.delta = float(delta)
        self.seed_sequence = _seed_sequence(seed)
        self._normal = _Draws(_child(self.seed_sequence, 0), "normal")
        self._uniform = _Draws(_child(self.seed_sequence, 1), "uniform")
        self.t = 0
        self.w = _LazyPoint(self.sigma, self._normal)
        self.w0 = self.w.origin
        self._base = self.w.base
        self.running_max = 0.0
        self.filtered = {}
        self.sign_counts = {s: 0 for s in SIGN_DOMAIN[mode]}
        self.n_filtered = 0

    def process(self, v):
        """Sign ``v`` and update the state; returns a :class:`SignRecord`."""
        v = as_sparse(v)
        self.t += 1
        t = self.t
        idx, vals, norm = v.indices, v.values, v.norm
        w = self.w
        base = self._base
        if norm < 0.5 / (t * t):
            filt = self.filtered
            for i, a in zip(idx, vals):
                filt[i] = filt.get(i, 0.0) + a
                w[i]
                base[i] -= a
            self._track(idx)
            self.sign_counts[1] += 1
            self.n_filtered += 1
            return SignRecord(t, 1, True)

        dot = sum(map(mul, map(w.__getitem__, idx), vals))
        # lattice coordinate in units of |v|, so that x ~ N(0, sigma_v^2)
        x = dot / (norm * norm)
        sigma_v = self.sigma / norm
        if self.walk == "ramanujan" and sigma_v < 1.0:
            # only reachable through the 1e-12 norm slack
            sigma_v = 1.0
        n = math.floor(x)
        f = x - n
        if f >= 0.5:
            n += 1
            f -= 1.0
        # delta / (2 t^2) per step, a quarter of it per probability, never
        # looser than the kernel default
        tol = min(self.delta / (8.0 * t * t), DEFAULT_TOL)
        u = self._uniform()
        if n >= (2 if self.walk == "ramanujan" else 1):
            # two outcomes; same offsets as pick() over (-1, ..., +1)
            s = -1 if u < 1.0 - _p(n + f, 0.5 / (sigma_v * sigma_v), tol) else 1
        elif n <= -1:
            s = -1 if u < _p(-n - f, 0.5 / (sigma_v * sigma_v), tol) else 1
        else:
            support, probs = transition(n, f, sigma_v, self.walk, tol)
            s = pick(support, probs, u)
        if s:
            m = self.running_max
            for i, a in zip(idx, vals):
                wi = w[i] + s * a
                w[i] = wi
                d = wi - base[i]
                if d > m:
                    m = d
                elif -d > m:
                    m = -d
            self.running_max = m
        self.sign_counts[s] += 1
        return SignRecord(t, s, False)

    def _track(self, idx):
        if idx:
            m = max(map(abs, map(sub, map(self.w.__getitem__, idx), map(self._base.__getitem__, idx))))
            if m > self.running_max:
                self.running_max = m

    def process_many(self, vectors):
        return [self.process(v).sign for v in vectors]

    def discrepancy(self):
        """Signed sum over touched coordinates and its l-infinity norm.

        Includes filtered vectors; untouched coordinates are exactly zero.
        """
        base = self._base
        sums = {i: wi - base[i] for i, wi in self.w.items()}
        return sums, max(map(abs, sums.values()), default=0.0)

    def gaussian_part(self):
        """``w - w0``: the part of the signed sum produced by the walk."""
        return {i: wi - self.w0[i] for i, wi in self.w.items()}

    @property
    def used_fraction(self):
        if self.t == 0:
            return 1.0
        return 1.0 - self.sign_counts.get(0, 0) / self.t


class FullColoring:
    """Full +-1 coloring by rerunning the partial walk on omitted vectors.

    Round ``k`` is its own :class:`OnlineBalancer` in partial mode with
    independent randomness; a vector that gets sign 0 in round ``k`` is
    passed on at once to round ``k + 1``.  Each round therefore sees exactly
    the vectors omitted by the previous round, in their original order, and
    every vector leaves with a final sign in {-1, +1} before the next one
    arrives.
    """

    def __init__(self, sigma=1.0, delta=0.01, seed=None, max_rounds=64):
        if not sigma >= 1:
            raise DomainError(f"full coloring needs sigma >= 1, got {sigma!r}")
        if max_rounds < 1:
            raise DomainError("max_rounds must be at least 1")
        self.sigma = float(sigma)
        self.delta = float(delta)
        self.max_rounds = int(max_rounds)
        self.seed_sequence = _seed_sequence(seed)
        self.rounds_ = [self._new_round(0)]
        self.stats = RunningStats()
        self.t = 0
        self.sign_counts = {-1: 0, 1: 0}

    def _new_round(self, k):
        return OnlineBalancer("partial", self.sigma, self.delta, _child(self.seed_sequence, k))

    @property
    def rounds(self):
        return len(self.rounds_)

    def process(self, v):
        v = as_sparse(v)
        self.t += 1
        k = 0
        while True:
            rec = self.rounds_[k].process(v)
            if rec.sign:
                break
            k += 1
            if k == self.max_rounds:
                raise RoundCapExceeded(f"vector {self.t} still unsigned after {k} rounds")
            if k == len(self.rounds_):
                self.rounds_.append(self._new_round(k))
        self.stats.add(v.indices, v.values, rec.sign)
        self.sign_counts[rec.sign] += 1
        return SignRecord(self.t, rec.sign, rec.filtered)

    def discrepancy(self):
        return self.stats.discrepancy()

    @property
    def running_max(self):
        return self.stats.running_max


def full_coloring(vectors, sigma=1.0, delta=0.01, seed=None, max_rounds=64):
    """Sign every vector in {-1, +1}; returns ``(signs, rounds)``."""
    fc = FullColoring(sigma, delta, seed, max_rounds)
    signs = [fc.process(v).sign for v in vectors]
    return signs, fc.rounds


def dyadic_scale(norm):
    """Index ``k`` with ``norm`` in ``(2^-(k+1), 2^-k]``."""
    k = int(math.floor(-math.log2(norm)))
    # log2 can land on the wrong side of an exact power of two
    while math.ldexp(norm, k) > 1.0:
        k -= 1
    while math.ldexp(norm, k) <= 0.5:
        k += 1
    return k


class DyadicRouter:
    """Route vectors by length to independent per-scale balancers.

    A vector of norm in ``(2^-(k+1), 2^-k]`` goes to scale ``k``, rescaled by
    ``2^k`` so that its norm lies in ``(1/2, 1]``; that scale's balancer
    (fixed ``sigma``, default 1) then only ever works with walk scales in
    ``[sigma, 2 sigma)``.  Signs are emitted in input order.
    """

    def __init__(self, mode="balance", delta=0.01, seed=None, sigma=1.0):
        if mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
        # construct once to validate sigma/delta against mode
        OnlineBalancer(mode, sigma, delta, 0)
        self.mode = mode
        self.sigma = float(sigma)
        self.delta = float(delta)
        self.seed_sequence = _seed_sequence(seed)
        self.scales = {}
        self.stats = RunningStats()
        self.t = 0
        self.n_filtered = 0
        self.sign_counts = {s: 0 for s in SIGN_DOMAIN[mode]}

    def process(self, v):
        v = as_sparse(v)
        self.t += 1
        t = self.t
        if v.norm < 0.5 / (t * t):
            self.stats.add(v.indices, v.values, 1)
            self.sign_counts[1] += 1
            self.n_filtered += 1
            return SignRecord(t, 1, True)
        # norms inside the 1e-12 slack above 1 belong to scale 0
        k = max(dyadic_scale(v.norm), 0)
        bal = self.scales.get(k)
        if bal is None:
            bal = OnlineBalancer(self.mode, self.sigma, self.delta, _child(self.seed_sequence, k))
            self.scales[k] = bal
        rec = bal.process(v.scaled(math.ldexp(1.0, k)))
        if rec.sign:
            self.stats.add(v.indices, v.values, rec.sign)
        self.sign_counts[rec.sign] += 1
        return SignRecord(t, rec.sign, False)

    def discrepancy(self):
        return self.stats.discrepancy()

    @property
    def running_max(self):
        return self.stats.running_max


def dyadic_router(vectors, delta=0.01, seed=None, mode="balance"):
    router = DyadicRouter(mode, delta, seed)
    return [router.process(v).sign for v in vectors]
