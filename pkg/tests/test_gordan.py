from collections import Counter

import pytest

from binaryforms import reference as ref
from binaryforms.forms import FormSpace
from binaryforms.gordan import (S4_RELATION_ORDER, S6_RELATION_ORDER, CandidateFilters, GeneratorSet,
                                adjoin_s2, candidate_transvectants, check_relation, find_relations,
                                joint_basis, make_generator, minimize, named_basis, simple_basis,
                                slice_monomials, verify_generation)
from binaryforms.kernel import UsageError
from binaryforms.repro import S4_LEADS, S6_LEADS, degree_order_matrix, proportional, relation_pattern


@pytest.fixture(scope="module")
def cov_s3_s4():
    return joint_basis(named_basis(3), named_basis(4, "v"))


@pytest.fixture(scope="module")
def cov_s6_s2():
    return adjoin_s2(named_basis(6))


def _signature(G):
    return sorted((g.multidegree, g.order) for g in G)


# shipped bases: audits, generation, idempotence

@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_named_bases(n):
    G = named_basis(n)
    assert G.audit() == []
    rep = verify_generation(G, 17 if n == 6 else 10)
    assert rep.full and rep.minimal, rep.to_dict()
    again = minimize(list(G), G.space)
    assert _signature(again) == _signature(G)


def test_computed_simple_bases(computed_bases):
    for n, G in computed_bases.items():
        assert len(G) == ref.SIMPLE_COUNTS[n]
        assert G.audit() == []
        assert not G.report.incomplete
        rep = verify_generation(G)
        assert rep.full and rep.minimal, (n, rep.to_dict())
        assert _signature(minimize(list(G), G.space)) == _signature(G)
    assert degree_order_matrix(computed_bases[6]) == ref.COV_S6


def test_small_simple_bases():
    assert len(simple_basis(1)) == 1
    assert len(simple_basis(2)) == 2
    assert len(simple_basis(0)) == 1
    with pytest.raises(UsageError):
        simple_basis(6)  # needs a basis of Cov(S4)
    assert len(simple_basis(6, recursive=True)) == 26


def test_joint_basis_s3_s4(cov_s3_s4):
    G = cov_s3_s4
    assert len(G) == 63
    assert G.stats["candidates"] == 104
    assert degree_order_matrix(G) == ref.COV_S3_S4
    assert G.audit() == []
    rep = verify_generation(G)
    assert rep.full and rep.minimal
    assert _signature(minimize(list(G), G.space)) == _signature(G)


def test_order_bound_does_not_change_the_basis(cov_s3_s4):
    loose = joint_basis(named_basis(3), named_basis(4, "v"), filters=CandidateFilters(order_bound=False))
    assert _signature(loose) == _signature(cov_s3_s4)
    loose = adjoin_s2(named_basis(2))
    assert len(loose) == len(joint_basis(named_basis(2), named_basis(2, "u"),
                                         filters=CandidateFilters(order_bound=False)))


def test_normalization_does_not_change_counts(cov_s3_s4):
    G = joint_basis(named_basis(3), named_basis(4, "v"), normalization="gordan")
    assert G.counts() == cov_s3_s4.counts()


def test_adjoin_s2_sextic(cov_s6_s2):
    G = cov_s6_s2
    assert len(G) == 99
    assert G.order_totals() == ref.COV_S6_S2_ORDER_TOTALS
    assert degree_order_matrix(G) == ref.COV_S6_S2
    assert G.audit() == []


def test_adjoin_s2_against_joint_basis():
    for n in (1, 2, 3):
        a = adjoin_s2(named_basis(n), slot="u")
        b = joint_basis(named_basis(n), named_basis(2, "u"))
        assert a.counts() == b.counts(), n


def test_two_quartics():
    G = joint_basis(named_basis(4), named_basis(4, "v"), relations_a=S4_LEADS,
                    relations_b=S4_LEADS)
    assert sorted(tuple(g.multidegree) + (g.order,) for g in G) == sorted(ref.COV_S4_S4)
    assert verify_generation(G).full


def test_sextic_quartic_candidates():
    A, B = named_basis(6), named_basis(4, "v")
    cands = candidate_transvectants(A, B, CandidateFilters(relations_a=S6_LEADS, relations_b=S4_LEADS))
    kept = [c for c in cands if c.kept]
    assert len(cands) == ref.COV_S6_S4_CANDIDATES
    assert len(kept) == ref.COV_S6_S4_FILTERED
    assert dict(sorted(Counter(c.u + c.v for c in kept).items())) == ref.COV_S6_S4_FILTERED_BY_ORDER
    reasons = Counter(c.reason for c in cands if not c.kept)
    assert set(reasons) <= {"order bound u+v >= a+b", "divisible by a relation leading monomial"}


def test_degree_bound_filter():
    A, B = named_basis(3), named_basis(4, "v")
    cut = candidate_transvectants(A, B, CandidateFilters(degree_bound=5))
    full = candidate_transvectants(A, B)
    assert all(c.degree <= 5 for c in cut)
    assert sorted(c.recipe for c in cut) == sorted(c.recipe for c in full if c.degree <= 5)


# negative controls for the property net

def test_deleted_generator_is_detected(cov_s3_s4):
    G = cov_s3_s4
    victim = max(range(len(G)), key=lambda i: (G[i].degree, G[i].order))
    smaller = GeneratorSet(G.space, [g for i, g in enumerate(G) if i != victim])
    rep = verify_generation(smaller, G[victim].degree)
    assert not rep.full
    assert (G[victim].grade in {g for g, _, _ in rep.deficient})


def test_duplicated_generator_is_redundant():
    G = named_basis(4)
    extra = make_generator("T(f, f, 2)*T(f, f, 4)", G.space)
    rep = verify_generation(GeneratorSet(G.space, list(G) + [extra]), 6)
    assert rep.full and not rep.minimal and rep.redundant == [extra.name]


def test_audit_flags_vanishing_recipe():
    G = named_basis(3)
    bad = GeneratorSet(G.space, list(G) + [make_generator("T(f, f, 1)", G.space)])
    assert [name for name, _ in bad.audit()] == ["T(f, f, 1)"]


# serialization

def test_json_round_trip(cov_s3_s4):
    back = GeneratorSet.from_json(cov_s3_s4.to_json())
    assert back == cov_s3_s4
    assert GeneratorSet.from_json(named_basis(6).to_json()) == named_basis(6)


def test_empty_generator_set_json():
    empty = GeneratorSet(None, [])
    assert empty.to_json() == '{"generators":[],"counts":{}}'
    assert len(GeneratorSet.from_json(empty.to_json())) == 0


def test_json_counts_are_checked():
    text = named_basis(3).to_json().replace('"1:3":1', '"1:3":2')
    with pytest.raises(UsageError):
        GeneratorSet.from_json(text)


# relations

def test_quartic_relation():
    S4 = named_basis(4)
    rels = find_relations(S4, (6,), 12, S4_RELATION_ORDER, normalization="gordan")
    assert len(rels) == 1
    rel = rels[0]
    assert proportional(relation_pattern(rel), ref.S4_RELATION)
    assert rel.lead_dict() == {"k3_6": 2}
    assert rel.shape == "single-power"
    assert check_relation(rel, S4, "gordan")
    # same kernel in the other normalization, with different coefficients
    default_rel = find_relations(S4, (6,), 12, S4_RELATION_ORDER)
    assert len(default_rel) == 1 and check_relation(default_rel[0], S4)


def test_sextic_square_relation():
    S6 = named_basis(6)
    rels = find_relations(S6, (6,), 24, S6_RELATION_ORDER, normalization="gordan")
    assert len(rels) == 1
    assert proportional(relation_pattern(rels[0]), ref.S6_H3_12_RELATION)
    assert rels[0].lead_dict() == {"h3_12": 2}
    assert check_relation(rels[0], S6, "gordan")


def test_relation_kernel_matches_dimension_count():
    # number of independent relations = monomials - dimension of the slice
    from binaryforms.dimension import DimQuery, covariant_dimension
    S4 = named_basis(4)
    for d, k in [(4, 8), (5, 10), (6, 12), (6, 0), (7, 6)]:
        mons = slice_monomials(S4, (d,), k)
        rels = find_relations(S4, (d,), k, S4_RELATION_ORDER)
        assert len(mons) - len(rels) == covariant_dimension(DimQuery((4,), (d,), k))


def test_relation_order_validation():
    with pytest.raises(UsageError):
        find_relations(named_basis(4), (6,), 12, ["v", "i"])
