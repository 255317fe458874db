"""Getting rid of zero signs, and handling vectors of very different lengths."""

# %%
import math

from gausswalk import DyadicRouter, FullColoring, OnlineBalancer, generate

# %% [markdown]
# Route 1: a large sigma makes the stay mass at most exp(-sigma^2) = delta/t,
# so with sigma = sqrt(log(t/delta)) no vector is omitted with probability
# at least 1 - delta.  The price is a sigma-times larger discrepancy.

# %%
t, delta = 10_000, 0.01
sigma = math.sqrt(math.log(t / delta))
bal = OnlineBalancer("partial", sigma, delta, seed=0)
bal.process_many(generate("random_unit", 8, t, seed=1))
print(f"sigma={sigma:.3f}: zero signs={bal.sign_counts[0]}, max discrepancy={bal.running_max:.2f}")

# %% [markdown]
# Route 2: keep sigma = 1 and hand every omitted vector straight to a fresh
# partial coloring, round after round.  Each round omits about 3.6% of what
# it sees, so a handful of rounds suffice.

# %%
fc = FullColoring(sigma=1.0, delta=delta, seed=0)
for v in generate("random_unit", 8, t, seed=1):
    fc.process(v)
print("rounds used:", fc.rounds)
print("vectors per round:", [r.t for r in fc.rounds_])
print(f"signs={fc.sign_counts} max discrepancy={fc.running_max:.2f}")

# %% [markdown]
# Mixed lengths: a vector of norm in (2^-(k+1), 2^-k] goes to its own
# balancer for scale k, rescaled to norm in (1/2, 1], so every walk there
# runs with sigma in [1, 2).

# %%
router = DyadicRouter("balance", delta, seed=0)
for v in generate("mixed_norms", 8, t, seed=2):
    router.process(v)
for k in sorted(router.scales):
    print(f"scale {k}: {router.scales[k].t:5d} vectors")
print(f"max discrepancy={router.running_max:.2f}")
