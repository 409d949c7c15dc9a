# %% [markdown]
# Transvectants of binary forms, by hand and by recipe.

# %%
from fractions import Fraction

from binaryforms.forms import FormSpace, generic_form
from binaryforms.transvectant import evaluate_molecule, parse_molecule, transvectant

# %%
# a generic cubic f and quadratic g
space = FormSpace([3, 2])
f, g = generic_form(space, "f"), generic_form(space, "g")
print(f.as_covariant().value)

# %%
# (f, g)_1 has degree (1, 1) and order 3
h = transvectant(f, g, 1)
print(h.multidegree, h.order)
print(h.value)

# %%
# swapping the arguments costs a sign (-1)^r
for r in range(3):
    same = transvectant(g, f, r).value == transvectant(f, g, r).value.scale((-1) ** r)
    print(r, same)

# %%
# the Hessian of the cubic, in both scalings
H = transvectant(f, f, 2)
Hg = transvectant(f, f, 2, normalization="gordan")
k, c = next(iter(H.value.terms.items()))
print("ratio", Fraction(c) / Fraction(Hg.value.terms[k]))

# %%
# the same covariant as a molecule: two atoms joined by a double edge
mol = parse_molecule("""
atom A:3
atom B:3
edge A B 2
""")
space1 = FormSpace([3])
f1 = generic_form(space1, 0)
print(evaluate_molecule(mol, [f1]).value)

# %%
# a degree three identity for the sextic
s6 = FormSpace([6])
f6 = generic_form(s6, 0)
lhs = transvectant(f6.as_covariant() ** 2, f6, 5, normalization="gordan")
rhs = transvectant(transvectant(f6, f6, 4, normalization="gordan"), f6, 1, normalization="gordan")
k, c = next(iter(rhs.value.terms.items()))
ratio = Fraction(lhs.value.terms[k]) / Fraction(c)
print("(f^2, f)_5 / ((f, f)_4, f)_1 =", ratio, lhs.value == rhs.value.scale(ratio))
