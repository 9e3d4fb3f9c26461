# %% [markdown]
# # The two embedders
#
# Dense hosts get the random-equipartition route. Sparse, highly connected
# hosts get the 16-core route. Both hand back models that are re-verified.

# %%
import time

from minorkit import DenseConfig, embed_dense_rooted, verify_model
from minorkit.generators import cycle, glued_cliques, gnp, random_avg_degree
from minorkit.sparse import SparseConfig, run_sparse

G = gnp(1500, 0.75, 0)
H = random_avg_degree(40, 8, 0)
t0 = time.perf_counter()
model = embed_dense_rooted(G, H, list(range(40)), DenseConfig(seed=0))
print(f"dense: {time.perf_counter() - t0:.2f} s, violations = {verify_model(G, model)}")
print("largest branch set:", max(len(U) for U in model.branch_sets))

# %% [markdown]
# ## Sparse fixture
#
# Sixteen 60-cliques glued by matchings. The trace records how each core
# was refined and how much of it the rerouted paths used.

# %%
G = glued_cliques(16, 60, 2, 0)
run = run_sparse(G, cycle(5), 60.0, SparseConfig(seed=0))
print("violations:", verify_model(G, run.model))
print("refinement rounds:", [c["refinement_rounds"] for c in run.trace["cores"]])
print("max core usage:", run.trace["paths"]["max_core_usage"])
