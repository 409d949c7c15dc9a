import random

import pytest
from hypothesis import given, strategies as st

from binaryforms.forms import (Atom, BinaryForm, Covariant, FormSpace, Prod, Trans, UnimodularMatrix,
                               format_recipe, generic_form, parse_recipe, product, recipe_grading,
                               rename_slots, sl2_act, substitute_atoms)
from binaryforms.kernel import UsageError
from binaryforms.transvectant import transvectant


def test_generic_form_binomial_convention():
    space = FormSpace([2])
    f = generic_form(space, 0).as_covariant()
    assert f.coeffs()[1] == generic_form(space, 0).coefficients[1] * 2
    assert [c.degree() for c in f.coeffs()] == [1, 1, 1]
    assert f.multidegree == (1,) and f.order == 2 and f.audit()


def test_form_space_validation():
    with pytest.raises(UsageError):
        FormSpace([2, -1])
    with pytest.raises(UsageError):
        FormSpace([2, 2], ["f", "f"])
    with pytest.raises(UsageError):
        FormSpace([2], ["x"])
    with pytest.raises(UsageError):
        BinaryForm(3, [1, 2])
    assert FormSpace([1, 2, 3]).names == ("f", "g", "h")


recipes = st.recursive(
    st.sampled_from(["f", "g"]),
    lambda inner: st.one_of(
        st.builds(lambda a, b, r: f"T({a}, {b}, {r})", inner, inner, st.integers(0, 3)),
        st.builds(lambda a, b: f"{a}*{b}", inner, inner),
        st.builds(lambda a, e: f"({a})^{e}", inner, st.integers(2, 3))),
    max_leaves=5)


@given(recipes)
def test_recipe_round_trip(text):
    node = parse_recipe(text)
    assert parse_recipe(format_recipe(node)) == node


@given(recipes)
def test_recipe_grading_matches_expansion(text):
    space = FormSpace([3, 2])
    from binaryforms.evaluation import exact_covariant
    node = parse_recipe(text)
    md, order = recipe_grading(node, space)
    if sum(md) > 5:
        return
    cov = exact_covariant(node, space)
    assert cov.multidegree == md
    if order >= 0 and not cov.is_zero():
        assert cov.order == order and cov.audit()


def test_recipe_parser_errors():
    for bad in ["T(f, g)", "f*", "2*f", "T(f, g, 1", "f g"]:
        with pytest.raises(UsageError):
            parse_recipe(bad)
    assert parse_recipe("1") == Prod(())
    assert format_recipe(parse_recipe("g*f*f")) == "f^2*g"


def test_product_and_substitution():
    node = product([(Atom("f"), 2), (Trans(Atom("f"), Atom("f"), 2), 1)])
    assert format_recipe(node) == "T(f, f, 2)*f^2"
    sub = substitute_atoms(parse_recipe("T(f, g, 1)"), {"g": parse_recipe("T(f, f, 2)")})
    assert format_recipe(sub) == "T(f, T(f, f, 2), 1)"
    assert format_recipe(rename_slots(parse_recipe("T(f, f, 2)"), {"f": "v"})) == "T(v, v, 2)"


def test_unimodular():
    with pytest.raises(UsageError):
        UnimodularMatrix(2, 0, 0, 1)
    g = UnimodularMatrix.random(random.Random(3))
    assert g @ g.inverse() == UnimodularMatrix(1, 0, 0, 1)


def test_sl2_action_is_a_group_action():
    space = FormSpace([3])
    f = generic_form(space, 0)
    c = transvectant(f, f, 2)
    x = UnimodularMatrix(1, 2, 0, 1)
    y = UnimodularMatrix(1, 0, -1, 1)
    # invariance of a covariant under both generators and their product
    assert sl2_act(x, c).value == c.value
    assert sl2_act(y, c).value == c.value
    assert sl2_act(x @ y, c).value == c.value
    # the form itself is not preserved coefficientwise but is a covariant as well
    assert sl2_act(x, f.as_covariant()).value == f.as_covariant().value
    # a non-covariant expression is moved
    space2 = FormSpace([2])
    a0 = generic_form(space2, 0).coefficients[0]
    bad = Covariant(space2, a0, (1,), 0)
    assert sl2_act(x, bad).value == bad.value  # a_0 is fixed by upper shears
    assert sl2_act(y, bad).value != bad.value


def test_covariant_products_track_grading():
    space = FormSpace([2, 1])
    f, g = generic_form(space, 0).as_covariant(), generic_form(space, 1).as_covariant()
    h = f * g ** 2
    assert h.multidegree == (1, 2) and h.order == 4 and h.recipe == "f*g^2" and h.audit()
    assert not Covariant(space, h.value, (2, 2), 4).audit()
