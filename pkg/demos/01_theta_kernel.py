"""The probabilities behind every step: one-sided theta sums p and the stay mass r."""

# %%
import math

import numpy as np

from gausswalk import check_balance_inequality, eval_p, eval_r_product, eval_r_series

# %% [markdown]
# A walker at ``n + f`` with ``n >= 1`` steps outward with probability
# ``p_sigma(n + f)``, an alternating sum of Gaussian weights.  Each value
# comes back with a certified error bound.

# %%
got = eval_p(0.0, 1.0)
print(f"p_1(0)   = {got.value:.15f}  (+- {got.abs_error_bound:.1e})")
print(f"p_1(1.5) = {eval_p(1.5, 1.0).value:.6f}")
print(f"p_1(50)  = {eval_p(50.0, 1.0).value:.3e}")

# %% [markdown]
# At the origin the walker may also stay.  The stay mass has two formulas,
# a two-sided series and a product of positive factors; they agree to
# roundoff.

# %%
for sigma, f in [(1.0, 0.0), (1.0, 0.3), (1.3, 0.4), (2.0, 0.2)]:
    series = eval_r_series(f, sigma).value
    product = eval_r_product(f, sigma).value
    print(f"sigma={sigma:<4} f={f:<4} r={series:.12f} gap={abs(series - product):.1e} e^-sigma^2={math.exp(-sigma**2):.4f}")

# %% [markdown]
# The three origin probabilities sum to one, and the stay mass never exceeds
# ``exp(-sigma^2)`` once ``sigma >= 1/2``.

# %%
sigmas = np.linspace(0.5, 4.0, 36)
shifts = np.linspace(-0.5, 0.5, 21)
worst = max(
    abs(eval_p(f, s).value + eval_r_series(f, s).value + eval_p(-f, s).value - 1)
    for s in sigmas.tolist()
    for f in shifts.tolist()
)
print(f"worst |p(f) + r(f) + p(-f) - 1| on a 36x21 grid: {worst:.1e}")

# %% [markdown]
# The +-1/+2 walk needs ``p(1 + f) >= r(f) exp((2f + 1) / (2 sigma^2))`` so
# the climb from 1 to 2 has nonnegative probability.  The margin is
# smallest at sigma = 1, not at f = 1/2 but near f = 0.3.

# %%
margins = [(check_balance_inequality(1.0, f).margin, f) for f in np.round(np.arange(-0.5, 0.501, 0.05), 2).tolist()]
for m, f in margins[::4]:
    print(f"sigma=1 f={f:+.2f} margin={m:.5f}")
print("minimum over this row:", min(margins))
