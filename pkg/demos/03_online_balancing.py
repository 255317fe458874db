"""Signing a stream of vectors online while the signed sum stays small."""

# %%
import numpy as np

from gausswalk import OnlineBalancer, SparseVector, generate
from gausswalk.harness import gaussian_bound

# %% [markdown]
# Each arriving vector gets its sign before the next one is seen.  In
# partial mode a sign may be 0 (vector omitted); in balance mode the
# alternatives are -1, +1 and +2.

# %%
n, t = 16, 20_000
vectors = list(generate("random_unit", n, t, seed=0))

for mode in ("partial", "balance"):
    bal = OnlineBalancer(mode, sigma=1.0, delta=0.01, seed=42)
    signs = bal.process_many(vectors)
    _, final = bal.discrepancy()
    print(
        f"{mode:8s} signs={dict(bal.sign_counts)} used={bal.used_fraction:.4f} "
        f"max prefix discrepancy={bal.running_max:.3f} final={final:.3f}"
    )
print(f"union-bound envelope 2 sqrt(2 log(2nt/delta)) = {gaussian_bound(n, t, 0.01):.3f}")

# %% [markdown]
# Sparse input costs only its nonzeros: coordinates of the hidden Gaussian
# point are drawn the first time they are touched.

# %%
bal = OnlineBalancer("balance", 1.0, 0.01, seed=3)
for k in range(5):
    bal.process(SparseVector((10**9 + k, 10**12), (0.6, 0.8)))
print("coordinates materialized:", sorted(bal.w0))

# %% [markdown]
# Very short vectors are signed +1 without touching the walk.  Their total
# length is below sum 1/(2 t^2) < 1.

# %%
bal = OnlineBalancer("partial", 1.0, 0.01, seed=0)
recs = [bal.process(SparseVector((0,), (0.4 / (s * s),))) for s in range(1, 1001)]
print("filtered:", sum(r.filtered for r in recs), "discrepancy:", round(bal.discrepancy()[1], 4))

# %% [markdown]
# The walk point itself stays exactly Gaussian; across seeds its
# coordinates have variance sigma^2 no matter which vectors came before.

# %%
prefix = [SparseVector((0, 1), (0.6, -0.8)), SparseVector((0,), (0.7,)), SparseVector((1,), (1.0,))]
samples = []
for seed in range(5000):
    b = OnlineBalancer("balance", 1.0, 0.01, seed)
    for v in prefix * 3:
        b.process(v)
    samples.append((b.w[0], b.w[1]))
print("sample variance of w after 9 steps:", np.var(samples, axis=0).round(3))
