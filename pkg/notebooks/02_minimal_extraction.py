# %% [markdown]
# # Minor-minimal members of E(m, k)
#
# Start from a random graph that is comfortably inside the class and shrink
# it by deletions and contractions until no single step stays inside.

# %%
from minorkit import ExtremalClassParams, extract_minor_minimal, in_class
from minorkit.generators import complete, gnp

P = ExtremalClassParams(5, 2)
G = gnp(60, 0.4, 0)
print(G, "in class:", in_class(G, P))

ext = extract_minor_minimal(G, P)
print("minimal:", ext.graph)
print(ext.certificate.to_dict())

# %% [markdown]
# Every surviving vertex stands for a connected set of host vertices.

# %%
sizes = sorted(len(o) for o in ext.origin)
print("origin set sizes:", sizes)

# %% [markdown]
# ## When mk <= 1 the degree bound can fail
#
# With m < 2.5 and k small, a clique on ceil(2m) + 1 vertices is minimal but
# its minimum degree is at least 2m. The certificate reports this honestly.

# %%
P = ExtremalClassParams(2.467, 0.1234)
ext = extract_minor_minimal(complete(100), P)
cert = ext.certificate
print(ext.graph, "passed:", cert.passed)
print(cert.to_dict())
