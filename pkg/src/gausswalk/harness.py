"""Verification and reproduction harness.

* exact stationarity checks on truncated copies of the walks,
* Monte Carlo fixed-point tests against ``N(0, sigma^2)``,
* seeded discrepancy experiments over a few adversarial vector streams,
* the grid suites behind ``gausswalk verify``.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from .balancer import (
    RNG_NAME,
    DyadicRouter,
    FullColoring,
    OnlineBalancer,
    RunningStats,
    SignRecord,
    SparseVector,
    _child,
    _Draws,
    _seed_sequence,
    as_sparse,
)
from .errors import DomainError
from .theta import (
    WalkParams,
    check_balance_inequality,
    eval_p,
    eval_r_product,
    eval_r_series,
)
from .walks import WALKS, step_many, transition

GENERATORS = ("random_unit", "basis_cycle", "repeated_vector", "mixed_norms")
ALGORITHMS = ("partial", "balance", "full", "dyadic", "random")

STATIONARITY_SIGMAS = {"jacobi": (0.75, 1.0, 1.5, 2.0), "ramanujan": (1.0, 1.5, 2.0)}
STATIONARITY_SHIFTS = (-0.5, -0.25, 0.0, 0.25, 0.49)


# -- exact stationarity on a truncated lattice ------------------------------


@dataclass
class TruncatedChain:
    params: WalkParams
    walk: str
    N: int
    P: np.ndarray
    pi: np.ndarray
    boundary_mass: float = 0.0


def default_radius(sigma):
    return int(math.ceil(12 * sigma))


def build_truncated_chain(sigma, f, walk="jacobi", N=None, tol=1e-14):
    """Transition matrix of ``walk`` restricted to ``f + {-N, ..., N}``.

    Moves that would leave the window are turned into self-loops; the
    pi-weighted mass of such moves is kept in ``boundary_mass``.
    """
    params = WalkParams(sigma, f)
    if walk not in WALKS:
        raise DomainError(f"unknown walk {walk!r}; expected one of {WALKS}")
    if walk == "ramanujan" and sigma < 1:
        raise DomainError(f"the +-1/+2 walk needs sigma >= 1, got {sigma!r}")
    N = default_radius(sigma) if N is None else int(N)
    states = np.arange(-N, N + 1)
    pi = np.exp(-((states + f) ** 2) / (2 * sigma * sigma))
    pi /= pi.sum()
    size = 2 * N + 1
    P = np.zeros((size, size))
    boundary = 0.0
    for row, n in enumerate(states):
        support, probs = transition(int(n), f, sigma, walk, 0.25 * tol)
        total = sum(probs)
        for s, p in zip(support, probs):
            p /= total
            col = row + s
            if 0 <= col < size:
                P[row, col] += p
            else:
                P[row, row] += p
                boundary += pi[row] * p
    return TruncatedChain(params, walk, N, P, pi, boundary)


def stationarity_residual(chain):
    """l1 distance between ``pi P`` and ``pi``."""
    return float(np.abs(chain.pi @ chain.P - chain.pi).sum())


def stationarity_grid():
    """Residual for every (walk, sigma, f) in the standard grid."""
    rows = []
    for walk, sigmas in STATIONARITY_SIGMAS.items():
        for sigma in sigmas:
            for f in STATIONARITY_SHIFTS:
                chain = build_truncated_chain(sigma, f, walk)
                rows.append(
                    {
                        "walk": walk,
                        "sigma": sigma,
                        "f": f,
                        "N": chain.N,
                        "residual": stationarity_residual(chain),
                        "boundary_mass": chain.boundary_mass,
                    }
                )
    return rows


# -- Monte Carlo fixed point ------------------------------------------------


def monte_carlo_fixed_point(walk, sigma, steps=100, samples=10**6, seed=0):
    """KS statistic of ``Z`` after ``steps`` walk steps, ``Z ~ N(0, sigma^2)``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    x = sigma * rng.standard_normal(samples)
    for _ in range(steps):
        x += step_many(x, sigma, walk, rng)
    return float(stats.kstest(x, "norm", args=(0.0, sigma)).statistic)


# -- vector streams ---------------------------------------------------------


def _unit_rows(rng, n, count):
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g


def generate(name, n, t, seed=0):
    """Yield ``t`` :class:`SparseVector` of dimension ``n`` from stream ``name``.

    ``random_unit``      i.i.d. uniformly random unit vectors
    ``basis_cycle``      e_0, e_1, ..., e_{n-1}, e_0, ...
    ``repeated_vector``  one random unit vector, ``t`` times
    ``mixed_norms``      random directions with norms spread over 8 dyadic scales
    """
    if name not in GENERATORS:
        raise DomainError(f"unknown generator {name!r}; expected one of {GENERATORS}")
    if n < 1 or t < 0:
        raise DomainError("need n >= 1 and t >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    dense_idx = tuple(range(n))
    if name == "basis_cycle":
        basis = [SparseVector((i,), (1.0,)) for i in range(n)]
        for i in range(t):
            yield basis[i % n]
    elif name == "repeated_vector":
        v = SparseVector(dense_idx, tuple(_unit_rows(rng, n, 1)[0].tolist()))
        for _ in range(t):
            yield v
    else:
        block = 1024
        done = 0
        while done < t:
            count = min(block, t - done)
            rows = _unit_rows(rng, n, count)
            if name == "mixed_norms":
                scale = rng.uniform(0.5, 1.0, count) * np.exp2(-rng.integers(0, 8, count))
                rows *= scale[:, None]
            for row in rows.tolist():
                yield SparseVector(dense_idx, tuple(row))
            done += count


# -- experiments ------------------------------------------------------------


class RandomSigner:
    """Baseline: independent uniform +-1 signs."""

    def __init__(self, seed=None):
        self._uniform = _Draws(_child(_seed_sequence(seed), 1), "uniform")
        self.stats = RunningStats()
        self.t = 0
        self.sign_counts = {-1: 0, 1: 0}

    def process(self, v):
        v = as_sparse(v)
        self.t += 1
        s = 1 if self._uniform() < 0.5 else -1
        self.stats.add(v.indices, v.values, s)
        self.sign_counts[s] += 1
        return SignRecord(self.t, s, False)

    @property
    def running_max(self):
        return self.stats.running_max

    def discrepancy(self):
        return self.stats.discrepancy()


def make_signer(algorithm, sigma=1.0, delta=0.01, seed=None, max_rounds=64):
    if algorithm in ("partial", "balance"):
        return OnlineBalancer(algorithm, sigma, delta, seed)
    if algorithm == "full":
        return FullColoring(sigma, delta, seed, max_rounds)
    if algorithm == "dyadic":
        return DyadicRouter("balance", delta, seed, sigma)
    if algorithm == "random":
        return RandomSigner(seed)
    raise DomainError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def gaussian_bound(n, t, delta, sigma=1.0):
    """``2 sigma sqrt(2 log(2 n t / delta))``: the union-bound l-inf envelope."""
    return 2.0 * sigma * math.sqrt(2.0 * math.log(2.0 * n * t / delta))


@dataclass
class ExperimentReport:
    algorithm: str
    generator: str
    sigma: float
    delta: float
    t: int
    n: int
    seed: int
    rng: str
    max_running_discrepancy: float
    final_discrepancy: float
    bound: float
    sign_histogram: dict
    used_fraction: float
    zero_signs: int
    n_filtered: int
    rounds: int | None = None
    wall_time: float = 0.0
    trace: list | None = field(default=None, repr=False)

    def to_dict(self, include_timing=False):
        out = asdict(self)
        out.pop("trace")
        if not include_timing:
            out.pop("wall_time")
        return out

    def to_json(self, include_timing=False):
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)

    def trace_csv(self):
        lines = ["step,max_running_discrepancy"]
        lines += [f"{i},{d!r}" for i, d in enumerate(self.trace or (), start=1)]
        return "\n".join(lines) + "\n"


def run_experiment(
    generator="random_unit",
    algorithm="partial",
    sigma=1.0,
    t=10**4,
    n=32,
    delta=0.01,
    seed=0,
    trace=False,
    max_rounds=64,
):
    """Stream ``t`` vectors from ``generator`` through ``algorithm``."""
    ss = np.random.SeedSequence(seed)
    signer = make_signer(algorithm, sigma, delta, _child(ss, 1), max_rounds)
    stream = generate(generator, n, t, seed=_child(ss, 0))
    steps = [] if trace else None
    start = time.perf_counter()
    process = signer.process
    for v in stream:
        process(v)
        if steps is not None:
            steps.append(signer.running_max)
    wall = time.perf_counter() - start

    counts = dict(signer.sign_counts)
    zeros = counts.get(0, 0)
    final = signer.discrepancy()[1]
    return ExperimentReport(
        algorithm=algorithm,
        generator=generator,
        sigma=float(sigma),
        delta=float(delta),
        t=int(t),
        n=int(n),
        seed=int(seed),
        rng=RNG_NAME,
        max_running_discrepancy=signer.running_max,
        final_discrepancy=final,
        bound=gaussian_bound(n, max(t, 1), delta, sigma),
        sign_histogram={str(s): c for s, c in sorted(counts.items())},
        used_fraction=1.0 - zeros / t if t else 1.0,
        zero_signs=zeros,
        n_filtered=getattr(signer, "n_filtered", 0),
        rounds=signer.rounds if algorithm == "full" else None,
        wall_time=wall,
        trace=steps,
    )


# -- verification suites ---------------------------------------------------


def identity_suite(points=101, tol=1e-12):
    """Theta identities and the stay-probability bound on a (sigma, f) grid."""
    sigmas = np.linspace(0.5, 4.0, points)
    shifts = np.linspace(-0.5, 0.5, points)
    worst_identity = worst_cross = worst_excess = 0.0
    worst_symmetry = 0.0
    for sigma in sigmas.tolist():
        cap = math.exp(-sigma * sigma)
        for f in shifts.tolist():
            r = eval_r_series(f, sigma, tol).value
            total = eval_p(f, sigma, tol).value + r + eval_p(-f, sigma, tol).value
            worst_identity = max(worst_identity, abs(total - 1.0))
            worst_cross = max(worst_cross, abs(r - eval_r_product(f, sigma, tol).value))
            worst_excess = max(worst_excess, r - cap)
            worst_symmetry = max(worst_symmetry, abs(r - eval_r_series(-f, sigma, tol).value))
    # the bound r(0) <= exp(-sigma^2) on [1/2, 2] at spacing 1e-3
    fine = np.round(np.arange(500, 2001) * 1e-3, 3)
    fine_margin = min(math.exp(-s * s) - eval_r_series(0.0, s, tol).value for s in fine.tolist())
    passed = (
        worst_identity <= 3 * tol
        and worst_cross <= 1e-10
        and worst_excess <= 1e-10
        and worst_symmetry <= 2 * tol
        and fine_margin >= -1e-10
    )
    return {
        "suite": "identities",
        "passed": bool(passed),
        "grid": [points, points],
        "worst_identity_residual": worst_identity,
        "worst_series_product_gap": worst_cross,
        "worst_bound_excess": worst_excess,
        "worst_symmetry_gap": worst_symmetry,
        "min_bound_margin_fine_grid": fine_margin,
    }


def stationarity_suite(threshold=1e-8):
    rows = stationarity_grid()
    worst = max(rows, key=lambda r: r["residual"])
    return {
        "suite": "stationarity",
        "passed": bool(worst["residual"] <= threshold),
        "chains": len(rows),
        "worst_residual": worst["residual"],
        "worst_case": {k: worst[k] for k in ("walk", "sigma", "f", "N")},
        "max_boundary_mass": max(r["boundary_mass"] for r in rows),
    }


def inequality_grid(tol=1e-12):
    """Margins of the +-1/+2 climb probability on sigma in [1, 8] x f in [-1/2, 1/2]."""
    sigmas = np.round(1.0 + np.arange(701) * 0.01, 2)
    shifts = np.round(-0.5 + np.arange(101) * 0.01, 2)
    margins = np.empty((sigmas.size, shifts.size))
    holds = True
    for i, sigma in enumerate(sigmas.tolist()):
        for j, f in enumerate(shifts.tolist()):
            check = check_balance_inequality(sigma, f, tol)
            margins[i, j] = check.margin
            holds &= check.holds
    return sigmas, shifts, margins, holds


def inequality_suite(tol=1e-12):
    sigmas, shifts, margins, holds = inequality_grid(tol)
    i, j = np.unravel_index(np.argmin(margins), margins.shape)
    return {
        "suite": "inequality",
        "passed": bool(holds and margins.min() >= 0.0),
        "points": int(margins.size),
        "min_margin": float(margins[i, j]),
        "argmin": {"sigma": float(sigmas[i]), "f": float(shifts[j])},
    }


SUITES = {
    "identities": identity_suite,
    "stationarity": stationarity_suite,
    "inequality": inequality_suite,
}


def run_verification(suites=None):
    names = list(SUITES) if not suites or suites == "all" else [suites] if isinstance(suites, str) else list(suites)
    results = []
    for name in names:
        if name not in SUITES:
            raise DomainError(f"unknown suite {name!r}; expected one of {tuple(SUITES)}")
        results.append(SUITES[name]())
    return {"passed": all(r["passed"] for r in results), "suites": results}
