import random
from fractions import Fraction

import pytest
from hypothesis import assume
from hypothesis import strategies as st

from quartic_sos.cli import parse_polynomial
from quartic_sos.forms import Matrix3, Poly, monomials

CIRTOAJE_4 = "4*(x^4+y^4+z^4)+21*(x*y+y*z+z*x)^2-10*(x^2+y^2+z^2)*(x*y+y*z+z*x)-37*x*y*z*(x+y+z)"
CIRTOAJE_3 = "(x^2+y^2+z^2)^2-3*(x^3*y+y^3*z+z^3*x)"
SCHEIDERER = "x^4+y^4+z^4+x*y^3+x*z^3+y*z^3-3*x^2*y*z-4*x*y^2*z+2*x^2*y^2"


@pytest.fixture(scope="session")
def xyz():
    return Poly.gens()


@pytest.fixture(scope="session")
def four_zero_form():
    return parse_polynomial(CIRTOAJE_4)


@pytest.fixture(scope="session")
def cyclic_form():
    return parse_polynomial(CIRTOAJE_3)


@pytest.fixture(scope="session")
def scheiderer_form():
    return parse_polynomial(SCHEIDERER)


def random_form(rng: random.Random, degree: int, lo: int = -10, hi: int = 10, density: float = 1.0) -> Poly:
    terms = {}
    for e in monomials(3, degree):
        if rng.random() < density:
            terms[e] = Fraction(rng.randint(lo, hi))
    return Poly(terms)


def random_sos(rng: random.Random, squares: int) -> Poly:
    acc = Poly.zero()
    for _ in range(squares):
        q = random_form(rng, 2)
        acc = acc + q * q
    return acc


small_rationals = st.fractions(min_value=-8, max_value=8, max_denominator=6)
small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def forms(draw, degree: int, coeffs=small_ints):
    return Poly({e: Fraction(draw(coeffs)) for e in monomials(3, degree)})


@st.composite
def invertible_matrices(draw):
    rows = [[draw(small_ints) for _ in range(3)] for _ in range(3)]
    A = Matrix3(rows)
    assume(A.det() != 0)
    return A
