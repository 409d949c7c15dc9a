# %% [markdown]
# Joint covariants of a cubic and a quartic, then a sextic with a quadratic.

# %%
import time

from binaryforms.gordan import candidate_transvectants, joint_basis, named_basis, adjoin_s2, verify_generation
from binaryforms.repro import render_table

# %%
S3 = named_basis(3)
S4 = named_basis(4, "v")
for g in S3:
    print(g.name, g.grade, g.recipe)

# %%
# candidates come from the irreducible solutions of a small Diophantine system
cands = candidate_transvectants(S3, S4)
kept = [c for c in cands if c.kept]
print(len(cands), "candidates,", len(kept), "kept")
print(kept[0].recipe)

# %%
t = time.perf_counter()
G = joint_basis(S3, S4)
print(f"{len(G)} generators in {time.perf_counter() - t:.1f} s")
print(render_table(G))

# %%
# every slice up to degree 13 is spanned, and nothing is redundant
rep = verify_generation(G)
print(rep.full, rep.minimal, rep.slices)

# %%
# adding a quadratic to the sextic
G62 = adjoin_s2(named_basis(6))
print(len(G62), G62.order_totals())
print(render_table(G62))
