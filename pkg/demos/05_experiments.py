"""Seeded experiments: walk-based signing against independent random signs."""

# %%
import json

from gausswalk import run_experiment
from gausswalk.harness import gaussian_bound

# %% [markdown]
# Cycling through the basis vectors is the classic bad case for random
# signs: each coordinate performs a simple random walk, so the discrepancy
# grows like sqrt(t / n).  The balancer stays inside the logarithmic
# envelope.

# %%
n, t = 32, 10_000
print(f"envelope: {gaussian_bound(n, t, 0.01):.3f}")
for algorithm in ("random", "partial", "balance", "full"):
    reps = [run_experiment("basis_cycle", algorithm, 1.0, t=t, n=n, seed=s) for s in range(5)]
    worst = max(r.max_running_discrepancy for r in reps)
    print(f"{algorithm:8s} worst max discrepancy over 5 seeds: {worst:7.3f}")

# %% [markdown]
# Reports are plain JSON and reproduce byte for byte from the seed.

# %%
a = run_experiment("mixed_norms", "dyadic", t=2000, n=8, seed=7)
b = run_experiment("mixed_norms", "dyadic", t=2000, n=8, seed=7)
print(a.to_json())
print("identical:", a.to_json() == b.to_json())

# %% [markdown]
# A per-step trace of the running maximum, ready for plotting elsewhere.

# %%
rep = run_experiment("random_unit", "balance", t=1000, n=8, seed=0, trace=True)
print(rep.trace_csv().splitlines()[:4])
print(json.dumps(rep.sign_histogram))
