from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from binaryforms.evaluation import PRIME, ModSpan, ModularEvaluator, audit_recipe, exact_covariant
from binaryforms.forms import FormSpace


def _mod(v):
    v = Fraction(v)
    return v.numerator * pow(v.denominator, -1, PRIME) % PRIME


@pytest.mark.parametrize("recipe", ["T(T(f, f, 2)*g, T(g, g, 2), 3)", "T(f, g, 2)", "f^2*g",
                                    "T(T(f, g, 1), T(f, g, 1), 2)"])
@pytest.mark.parametrize("normalization", ["paper", "gordan"])
def test_modular_matches_exact(recipe, normalization):
    space = FormSpace((3, 4))
    ev = ModularEvaluator(space, points=3, seed=5, normalization=normalization)
    cov = exact_covariant(recipe, space, normalization)
    M = ev.coefficients(recipe)
    assert M.shape[0] == cov.order + 1
    for pt in range(3):
        vals = {"x": 1, "y": 1}
        for name, n in zip(space.names, space.orders):
            for i in range(n + 1):
                # evaluator stores plain coefficients, C(n, i) a_i
                vals[f"{name}_{i}"] = int(ev.forms[name][i, pt]) * pow(comb(n, i), -1, PRIME) % PRIME
        for j, c in enumerate(cov.coeffs()):
            assert _mod(c.evaluate(vals)) == int(M[j, pt])


def test_audit_passes_and_catches_zero():
    space = FormSpace((3, 4))
    assert all(audit_recipe("T(T(f, f, 2), g, 2)", space).values())
    res = audit_recipe("T(f, f, 1)", space)
    assert res["homogeneous"] and res["equivariant"] and not res["nonzero"]


@settings(max_examples=60)
@given(st.integers(1, 8), st.integers(1, 12), st.integers(0, 10 ** 6))
def test_modspan_rank(cols, rows, seed):
    rng = np.random.default_rng(seed)
    rank = min(cols, rows, int(rng.integers(1, cols + 1)))
    A = rng.integers(0, 50, size=(rank, cols))
    C = rng.integers(0, 50, size=(rows, rank))
    V = (C @ A) % PRIME  # rank at most ``rank``
    import flint
    expected = flint.nmod_mat(V.tolist(), PRIME).rank()
    S = ModSpan(cols)
    mask = S.add(V.astype(np.int64), chunk=3)
    assert S.rank == expected == sum(mask)
    for row in V:
        assert S.contains(row.astype(np.int64))


def test_modspan_stop_at():
    S = ModSpan(4)
    V = np.eye(4, dtype=np.int64)
    mask = S.add(V, stop_at=2)
    assert S.rank == 2 and mask[:2] == [True, True]
