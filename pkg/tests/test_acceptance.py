"""Acceptance gate.

Each test checks one criterion at its stated tolerance and records a
PASS/FAIL line; the lines are printed in the pytest terminal summary, or
directly when this file is run as a script::

    python3 -m pytest tests/test_acceptance.py
    python3 tests/test_acceptance.py
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from gausswalk.balancer import OnlineBalancer, SparseVector
from gausswalk.harness import (
    gaussian_bound,
    identity_suite,
    inequality_suite,
    monte_carlo_fixed_point,
    run_experiment,
    stationarity_suite,
)

RESULTS = {}
SEEDS = range(100)


def record(k, ok, detail):
    RESULTS[k] = f"{'PASS' if ok else 'FAIL'}  criterion {k:>2}: {detail}"
    return ok


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def test_c01_stationarity_oracle():
    res, secs = timed(stationarity_suite, threshold=1e-8)
    ok = res["passed"] and res["chains"] == 35 and secs < 1.0
    assert record(1, ok, f"worst |pi P - pi|_1 = {res['worst_residual']:.2e} over {res['chains']} chains, {secs:.3f} s")


def test_c02_theta_identities():
    res, secs = timed(identity_suite, points=101)
    ok = res["worst_identity_residual"] <= 3e-12 and res["worst_series_product_gap"] <= 1e-10 and secs < 5.0
    assert record(
        2,
        ok,
        f"worst |p+r+p-1| = {res['worst_identity_residual']:.2e}, "
        f"series/product gap = {res['worst_series_product_gap']:.2e}, {secs:.2f} s",
    )


def test_c03_stay_probability_bound():
    res = identity_suite(points=101)
    ok = res["worst_bound_excess"] <= 1e-10
    assert record(3, ok, f"max r - exp(-sigma^2) = {res['worst_bound_excess']:.3e} on 101x101 grid")


def test_c04_climb_inequality_grid():
    res = inequality_suite()
    ok = res["passed"] and res["points"] == 701 * 101
    where = res["argmin"]
    assert record(
        4, ok, f"min margin {res['min_margin']:.5f} at sigma={where['sigma']}, f={where['f']} ({res['points']} points)"
    )


@pytest.mark.slow
def test_c05_monte_carlo_fixed_point():
    stats = {
        (walk, sigma): monte_carlo_fixed_point(walk, sigma, steps=100, samples=10**6, seed=i)
        for i, (walk, sigma) in enumerate([("jacobi", 1.0), ("jacobi", 2.0), ("ramanujan", 1.0), ("ramanujan", 1.5)])
    }
    ok = max(stats.values()) <= 0.002
    detail = ", ".join(f"{w} {s}: {d:.5f}" for (w, s), d in stats.items())
    assert record(5, ok, f"KS after 100 steps, m=1e6: {detail}")


@pytest.mark.slow
def test_c06_usage_fraction():
    used = [run_experiment("random_unit", "partial", 1.0, t=10**5, n=8, seed=s).used_fraction for s in SEEDS]
    good = sum(u >= 0.96 for u in used)
    assert record(6, good >= 99, f"used_fraction >= 0.96 in {good}/100 runs (min {min(used):.4f})")


@pytest.mark.slow
def test_c07_discrepancy_bound():
    bound = gaussian_bound(32, 10**4, 0.01)
    within = {}
    for gen in ("basis_cycle", "random_unit"):
        runs = [run_experiment(gen, "balance", 1.0, t=10**4, n=32, delta=0.01, seed=s) for s in SEEDS]
        within[gen] = sum(r.max_running_discrepancy <= bound for r in runs)
    baseline = [run_experiment("basis_cycle", "random", t=10**4, n=32, seed=s).max_running_discrepancy for s in SEEDS]
    beaten = sum(b > bound for b in baseline)
    ok = min(within.values()) >= 99 and beaten == 100
    assert record(
        7,
        ok,
        f"bound {bound:.4f}; within bound: basis_cycle {within['basis_cycle']}/100, "
        f"random_unit {within['random_unit']}/100; random signs exceed it {beaten}/100 (min {min(baseline):.2f})",
    )


@pytest.mark.slow
def test_c08_full_usage_regime():
    t, delta = 10**4, 0.01
    sigma = math.sqrt(math.log(t / delta))
    zeros = [run_experiment("random_unit", "partial", sigma, t=t, n=8, delta=delta, seed=s).zero_signs for s in SEEDS]
    clean = sum(z == 0 for z in zeros)
    assert record(8, clean >= 99, f"sigma={sigma:.4f}: no zero signs in {clean}/100 runs")


@pytest.mark.slow
def test_c09_rerun_termination():
    rounds = [run_experiment("random_unit", "full", 1.0, t=10**4, n=8, delta=0.01, seed=s).rounds for s in SEEDS]
    good = sum(r <= 10 for r in rounds)
    assert record(9, good >= 99, f"<= 10 rounds in {good}/100 runs (max {max(rounds)})")


def _cli(args, data):
    return subprocess.run(
        [sys.executable, "-m", "gausswalk", *args], input=data, capture_output=True, check=True
    ).stdout


def _lockstep(lines):
    proc = subprocess.Popen(
        [sys.executable, "-m", "gausswalk", "partial", "--seed", "3"],
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.DEVNULL,
        text=True,
    )
    try:
        out = []
        for line in lines:
            proc.stdin.write(line)
            proc.stdin.flush()
            # blocks until the sign for this line is out; no further input is sent
            out.append(proc.stdout.readline())
        proc.stdin.close()
        proc.wait(timeout=30)
        return out, proc.returncode
    finally:
        proc.kill()


def test_c10_determinism_and_online_contract():
    rng = np.random.default_rng(0)
    rows = rng.standard_normal((400, 5))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    data = "".join(",".join(f"{a:.17g}" for a in r) + "\n" for r in rows)
    modes = ("partial", "balance", "full", "dyadic")
    same = all(_cli([m, "--seed", "17"], data.encode()) == _cli([m, "--seed", "17"], data.encode()) for m in modes)
    out, code = _lockstep(data.splitlines(keepends=True)[:50])
    online = code == 0 and len(out) == 50 and all(s.strip() in {"-1", "0", "1"} for s in out)
    assert record(10, same and online, f"byte-identical streams: {same}; lock-step pipe over 50 lines: {online}")


@pytest.mark.slow
def test_c11_throughput():
    t, nnz, dim, chunk = 10**6, 10, 10**5, 20000
    rng = np.random.default_rng(0)
    bal = OnlineBalancer("partial", 1.0, 0.01, 0)
    process = bal.process
    busy = 0.0
    for _ in range(t // chunk):
        # distinct indices: nnz different blocks of 1000, one offset in each
        blocks = rng.random((chunk, dim // 1000)).argsort(axis=1)[:, :nnz]
        idx = np.sort(blocks * 1000 + rng.integers(0, 1000, (chunk, nnz)), axis=1)
        vals = rng.standard_normal((chunk, nnz))
        vals /= np.linalg.norm(vals, axis=1, keepdims=True)
        vecs = [SparseVector(i, v) for i, v in zip(idx.tolist(), vals.tolist())]
        start = time.perf_counter()
        for v in vecs:
            process(v)
        busy += time.perf_counter() - start
    ok = bal.t == t and busy < 30.0
    assert record(11, ok, f"{t} vectors with nnz={nnz}: {busy:.1f} s processing ({busy / t * 1e6:.1f} us/vector)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
