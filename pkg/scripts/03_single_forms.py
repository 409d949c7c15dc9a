# %% [markdown]
# Covariant bases of a single form, built up from smaller orders.

# %%
from binaryforms.gordan import S4_RELATION_ORDER, find_relations, named_basis, simple_basis, verify_generation
from binaryforms.repro import render_table

# %%
bases = {4: simple_basis(4)}
for n in (3, 5, 6):
    bases[n] = simple_basis(n, bases)
    print(f"S{n}: {len(bases[n])} generators")

# %%
print(render_table(bases[6]))

# %%
# the quartic has one relation, in degree 6 and order 12
S4 = named_basis(4)
for rel in find_relations(S4, (6,), 12, S4_RELATION_ORDER, normalization="gordan"):
    print(rel)

# %%
# the octic: candidates are cut at degree 12, then checked beyond it
S8 = simple_basis(8, {4: bases[4]}, degree_bound=12)
print(len(S8))
rep = verify_generation(S8, 14)
print(rep.full, rep.minimal)
