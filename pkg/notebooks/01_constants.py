# %% [markdown]
# # The two constants
#
# `alpha` sets the leading term of the dense extremal bound, and `gamma(H)`
# refines it per target graph. Both are cheap to compute.

# %%
import math

from minorkit import compute_alpha
from minorkit.extremal import alpha_objective
from minorkit.gamma import compute_gamma, tau_of
from minorkit.generators import complete_bipartite, random_avg_degree

res = compute_alpha()
print(f"alpha = {res.alpha:.6f} at p* = {res.p_star:.6f}")

# %% [markdown]
# The objective is flat near its peak, so p* is less sharply determined
# than alpha itself.

# %%
for p in (0.5, 0.6, 0.7, res.p_star, 0.75, 0.8, 0.9):
    print(f"p = {p:.4f}  objective = {alpha_objective(p):.6f}")

# %% [markdown]
# ## gamma on balanced complete bipartite targets
#
# The value creeps up with t toward 2 sqrt(beta (1 - beta)) = 1.

# %%
for t in (100, 400, 1600):
    wv = compute_gamma(complete_bipartite(t // 2, t // 2))
    print(f"t = {t:5d}  gamma = {wv.objective:.4f}  slack = {wv.slack:.2e}")

# %% [markdown]
# ## Random targets versus the constant weighting

# %%
for seed, (t, d) in enumerate([(20, 6), (40, 12), (60, 30)]):
    H = random_avg_degree(t, d, seed)
    wv = compute_gamma(H)
    print(f"t = {t}, d = {d}: gamma = {wv.objective:.4f}, sqrt(tau) = {math.sqrt(tau_of(H)):.4f}")
