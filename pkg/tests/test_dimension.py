import itertools

import pytest
from hypothesis import given, strategies as st

from binaryforms import reference as ref
from binaryforms.dimension import (DimQuery, covariant_dimension, gaussian_binomial, hilbert_series,
                                   invariant_count)
from binaryforms.kernel import ExactMatrix, MultiPoly, UsageError, VarSpace, exact_kernel


def _isobaric(orders, degrees, weight):
    """Exponent vectors of monomials in the coefficients with given degrees and weight."""
    blocks = []
    for n, d in zip(orders, degrees):
        blocks.append([e for e in itertools.product(range(d + 1), repeat=n + 1) if sum(e) == d])
    out = []
    for choice in itertools.product(*blocks):
        w = sum(i * x for e in choice for i, x in enumerate(e))
        if w == weight:
            out.append(tuple(x for e in choice for x in e))
    return out


def annihilator_dimension(orders, degrees, order):
    """Sources of covariants: isobaric polynomials killed by sum_i i a_(i-1) d/d a_i."""
    W = sum(n * d for n, d in zip(orders, degrees))
    if W < order or (W - order) % 2:
        return 0
    w = (W - order) // 2
    names = [f"a{s}_{i}" for s, n in enumerate(orders) for i in range(n + 1)]
    vs = VarSpace(names)
    dom = _isobaric(orders, degrees, w)
    if not dom:
        return 0
    cod = {m: j for j, m in enumerate(_isobaric(orders, degrees, w - 1))}
    ent = {}
    for col, m in enumerate(dom):
        p = MultiPoly.monomial(vs, m)
        img = MultiPoly.zero(vs)
        for s, n in enumerate(orders):
            for i in range(1, n + 1):
                img = img + MultiPoly.var(vs, f"a{s}_{i - 1}") * p.diff(f"a{s}_{i}") * i
        for key, c in img.to_dict().items():
            ent[(cod[key], col)] = c
    M = ExactMatrix(max(len(cod), 1), len(dom), ent)
    return len(exact_kernel(M))


@pytest.mark.parametrize("n", range(5))
def test_single_form_against_annihilator(n):
    for d in range(5):
        for k in range(n * d + 1):
            assert covariant_dimension(DimQuery((n,), (d,), k)) == annihilator_dimension((n,), (d,), k), (n, d, k)


def test_two_forms_against_annihilator():
    for d1, d2 in itertools.product(range(3), repeat=2):
        W = 3 * d1 + 2 * d2
        for k in range(W + 1):
            q = DimQuery((3, 2), (d1, d2), k)
            assert covariant_dimension(q) == annihilator_dimension((3, 2), (d1, d2), k)


@given(st.integers(0, 12), st.integers(0, 12))
def test_gaussian_binomial(m, k):
    g = gaussian_binomial(m, k)
    if k > m:
        assert g == (0,)
        return
    # evaluation at q = 1 and palindromic symmetry
    from math import comb
    assert sum(g) == comb(m, k)
    assert g == g[::-1]
    assert g == gaussian_binomial(m, m - k)


def test_reference_values():
    assert covariant_dimension(DimQuery((8, 4, 4), (4, 4, 4), 0)) == 1004
    for md, dim in ref.INV_S8_S4_S4_DEG12.items():
        assert covariant_dimension(DimQuery((8, 4, 4), md, 0)) == dim
    assert invariant_count((8, 4, 4), 49) == 103947673173


def test_series_graded_by_degree_plus_order():
    series = hilbert_series((4, 3), "total", len(ref.SERIES_S4_S3) - 1)
    assert list(series.coefficients) == ref.SERIES_S4_S3
    # grading by degree alone gives a different sequence
    assert list(hilbert_series((4, 3), "degree", 6).coefficients) != ref.SERIES_S4_S3[:7]


def test_quadratic_series():
    # Cov(S2) is free on f and its discriminant
    coeffs = hilbert_series((2,), "degree", 10).coefficients
    assert list(coeffs) == [d // 2 + 1 for d in range(11)]
    inv = hilbert_series((2,), "degree", 10, invariants_only=True).coefficients
    assert list(inv) == [1 if d % 2 == 0 else 0 for d in range(11)]


def test_multigraded_series_consistent():
    mg = dict(hilbert_series((3, 2), "multigraded", 4).coefficients)
    total = hilbert_series((3, 2), "degree", 4).coefficients
    for d in range(5):
        assert total[d] == sum(sum(row.values()) for md, row in mg.items() if sum(md) == d)


def test_query_validation():
    with pytest.raises(UsageError):
        DimQuery((2, 3), (1,), 0)
    with pytest.raises(UsageError):
        DimQuery((2,), (-1,), 0)
    with pytest.raises(UsageError):
        hilbert_series((2,), "weird", 3)
    assert covariant_dimension(DimQuery((3,), (2,), 1)) == 0
