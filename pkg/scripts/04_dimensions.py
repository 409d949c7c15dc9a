# %% [markdown]
# Dimensions of covariant spaces and truncated Hilbert series.

# %%
from binaryforms.dimension import DimQuery, covariant_dimension, gaussian_binomial, hilbert_series, invariant_count

# %%
print(gaussian_binomial(6, 3))

# %%
# invariants of S8 + S4 + S4 in multidegree (4, 4, 4)
print(covariant_dimension(DimQuery((8, 4, 4), (4, 4, 4), 0)))

# %%
# all invariants of total degree 49
print(invariant_count((8, 4, 4), 49))

# %%
# Cov(S4 + S3): grading by degree + order versus degree alone
print(list(hilbert_series((4, 3), "total", 18).coefficients))
print(list(hilbert_series((4, 3), "degree", 8).coefficients))
