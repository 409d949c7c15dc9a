import os
import random

import pytest
from hypothesis import HealthCheck, settings

from binaryforms.forms import BinaryForm, Covariant, FormSpace, UnimodularMatrix
from binaryforms.gordan import named_basis, simple_basis
from binaryforms.kernel import MultiPoly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def numeric_form(space: FormSpace, slot: int, coeffs) -> Covariant:
    """A concrete form in one slot of ``space`` (binomial-convention coefficients)."""
    return BinaryForm(space.orders[slot], list(coeffs), space, slot).as_covariant()


def act(cov: Covariant, g: UnimodularMatrix) -> Covariant:
    """cov(g x): substitute x -> a x + b y, y -> c x + d y."""
    vs = cov.space.varspace
    x, y = MultiPoly.var(vs, "x"), MultiPoly.var(vs, "y")
    value = cov.value.substitute({"x": x * g.a + y * g.b, "y": x * g.c + y * g.d}, vs)
    return Covariant(cov.space, value, cov.multidegree, cov.order)


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(scope="session")
def cov_s4():
    return named_basis(4)


@pytest.fixture(scope="session")
def cov_s6():
    return named_basis(6)


@pytest.fixture(scope="session")
def computed_bases():
    """Bases produced by the simple algorithm for n = 3..6."""
    bases = {4: simple_basis(4)}
    for n in (3, 5, 6):
        bases[n] = simple_basis(n, bases)
    return bases
