"""Two lattice walks that leave the Gaussian exactly where it was."""

# %%
import numpy as np

from gausswalk import (
    build_truncated_chain,
    jacobi_distribution,
    monte_carlo_fixed_point,
    ramanujan_distribution,
    stationarity_residual,
    step_many,
)

# %% [markdown]
# Step distributions.  The 0/+-1 walk may stay only at the origin; the
# +-1/+2 walk replaces staying by a jump of +2.

# %%
for x in (0.0, 0.3, 1.25, -3.3):
    j = jacobi_distribution(x, 1.0)
    r = ramanujan_distribution(x, 1.0)
    print(f"x={x:+.2f}  0/+-1: {dict(zip(j.support, (round(p, 5) for p in j.probs)))}")
    print(f"        +-1/+2: {dict(zip(r.support, (round(p, 5) for p in r.probs)))}")

# %% [markdown]
# Exact check on a finite window: build the transition matrix on
# ``f + {-N..N}`` and compare ``pi P`` with ``pi`` for the discrete Gaussian
# ``pi``.

# %%
for walk, sigma, f in [("jacobi", 0.75, 0.25), ("jacobi", 2.0, -0.5), ("ramanujan", 1.0, 0.3), ("ramanujan", 1.5, 0.49)]:
    chain = build_truncated_chain(sigma, f, walk)
    print(f"{walk:9s} sigma={sigma} f={f:+.2f} N={chain.N}: |pi P - pi|_1 = {stationarity_residual(chain):.1e}")

# %% [markdown]
# Monte Carlo: start from N(0, sigma^2), walk 100 steps, compare with the
# start distribution.

# %%
for walk, sigma in [("jacobi", 1.0), ("ramanujan", 1.5)]:
    ks = monte_carlo_fixed_point(walk, sigma, steps=100, samples=200_000, seed=0)
    print(f"{walk:9s} sigma={sigma}: KS distance after 100 steps = {ks:.4f}")

# %% [markdown]
# A single trajectory never leaves its coset ``f + Z``.

# %%
rng = np.random.default_rng(1)
x = np.array([0.37])
path = [x[0]]
for _ in range(12):
    x = x + step_many(x, 1.0, "jacobi", rng)
    path.append(x[0])
print("trajectory:", np.round(path, 2))
