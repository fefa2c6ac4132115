import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import forms, random_form
from quartic_sos.cli import parse_polynomial
from quartic_sos.errors import DegenerateSystem
from quartic_sos.forms import LEMMA3, Poly, UniPoly, recompose
from quartic_sos.elimination import (
    bareiss_det,
    discriminant,
    discriminant_pqr,
    eliminate_system,
    resultant,
    resultant_coeffs,
    squarefree_decompose,
    sylvester_matrix,
    sylvester_resultant,
)
from quartic_sos.realalg import alg_sqrt_nonneg

coeff_lists = st.lists(st.integers(-9, 9), min_size=1, max_size=6).filter(lambda c: c[-1] != 0)


def test_linear_resultant_matches_sylvester():
    a, b = UniPoly([-1, 1]), UniPoly([-2, 1])
    assert sylvester_matrix(a.c, b.c) == [[1, -1], [1, -2]]
    assert resultant(a, b) == -1


def test_resultant_of_quadratics_by_root_products():
    # prod over roots (+-sqrt2 - +-sqrt3) = ((2 - 3))^2 = 1
    assert resultant(UniPoly([-2, 0, 1]), UniPoly([-3, 0, 1])) == 1


def test_cyclic_form_resultant_factorisation(cyclic_form):
    R = resultant(cyclic_form, cyclic_form.derivative("x"), "x")
    h = parse_polynomial("13*y^4-18*y^3*z-y^2*z^2-6*y*z^3+13*z^4")
    cubic = parse_polynomial("y^3-5*y^2*z+6*y*z^2-z^3", None)
    line = parse_polynomial("y-z", None)
    assert R == (h * line**2 * cubic**2).scale(9)


def test_both_constant_rejected(xyz):
    _, y, z = xyz
    with pytest.raises(ValueError):
        resultant(y * y, z * z, "x")
    with pytest.raises(ValueError):
        resultant(UniPoly([3]), UniPoly([5]))


def test_discriminant_examples():
    Y, Z = Poly.gens(("y", "z"))
    assert discriminant_pqr(Y * Y, Y * Z * Z, Z**4).is_zero()
    # Lemma-3 shape with q = sqrt(t) z q1, r = t z^2 and t = 2
    t = Fraction(2)
    rt = alg_sqrt_nonneg(t)
    p = Y * Y + Y * Z.scale(3) + Z * Z.scale(5)
    q1 = Y + Z
    q = (Z * q1).scale(rt)
    r = (Z * Z).scale(t)
    assert discriminant_pqr(p, q, r) == (Z * Z * (p - q1 * q1)).scale(t)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9), st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_discriminant_pointwise(cs, pt):
    Y, Z = Poly.gens(("y", "z"))
    quad = lambda a, b, c: Y * Y.scale(a) + Y * Z.scale(b) + Z * Z.scale(c)
    p, q, r = quad(*cs[0:3]), quad(*cs[3:6]), quad(*cs[6:9])
    f = recompose(p, q, r, LEMMA3)
    D = discriminant(f, LEMMA3)
    pv, qv, rv = (u.evaluate(pt) for u in (p, q, r))
    assert D.evaluate(pt) == pv * rv - qv * qv


def test_squarefree_decompose_examples():
    f = parse_polynomial("(x-y)^2*(x^2+y^2+z^2)")
    parts = squarefree_decompose(f)
    x, y, z = Poly.gens()
    assert (x - y, 2) in parts or (y - x, 2) in parts
    prod = Poly.const(1)
    for p, m in parts:
        prod = prod * p**m
    assert prod == f
    parts = squarefree_decompose(x * x * y * y)
    prod = Poly.const(1)
    for p, m in parts:
        prod = prod * p**m
    assert prod == x * x * y * y
    assert all(m == 2 for p, m in parts if p.degree > 0)


@settings(max_examples=40, deadline=None)
@given(forms(1), forms(2))
def test_squarefree_round_trip(g, h):
    if g.is_zero() or h.is_zero():
        return
    f = g * g * h
    prod = Poly.const(1)
    for p, m in squarefree_decompose(f):
        prod = prod * p**m
    assert prod == f


def test_eliminate_circle_and_line(xyz):
    x, y, _ = xyz
    g = eliminate_system([x * x + y * y - 1, x - y], ["x", "y"])
    assert g.primitive() == UniPoly([-1, 0, 2])


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=4), st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_eliminate_planted_point(a, b):
    x, y, _ = Poly.gens()
    g = eliminate_system([x - a, x * x + y * y - a * a - b * b, x + y - a - b], ["x", "y"])
    assert g(b) == 0


def test_eliminant_of_dependent_system_is_reported(xyz):
    x, y, _ = xyz
    with pytest.raises(DegenerateSystem):
        eliminate_system([x * y - 1, (x * y - 1).scale(2)], ["x", "y"])


def _sylvester_vs_prs(a, b):
    return resultant_coeffs(a, b) == sylvester_resultant(a, b)


@settings(max_examples=80, deadline=None)
@given(coeff_lists, coeff_lists)
def test_prs_matches_sylvester_rational(a, b):
    if len(a) == 1 and len(b) == 1:
        return
    a = [Fraction(c) for c in a]
    b = [Fraction(c, 2) for c in b]
    assert _sylvester_vs_prs(a, b)


def test_prs_matches_sylvester_polynomial_entries():
    rng = random.Random(7)
    for _ in range(30):
        da, db = rng.randint(1, 4), rng.randint(1, 4)
        a = [UniPoly([rng.randint(-4, 4) for _ in range(3)]) for _ in range(da)] + [UniPoly([rng.randint(1, 4)])]
        b = [UniPoly([rng.randint(-4, 4) for _ in range(3)]) for _ in range(db)] + [UniPoly([rng.randint(1, 4), 1])]
        assert resultant_coeffs(a, b) == bareiss_det(sylvester_matrix(a, b))


@settings(max_examples=40, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists)
def test_resultant_multiplicative(f, g, h):
    F, G, H = UniPoly(f), UniPoly(g), UniPoly(h)
    if min(F.degree, G.degree, H.degree) < 1:
        return
    assert resultant(F * G, H) == resultant(F, H) * resultant(G, H)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists)
def test_resultant_vanishes_iff_common_factor(f, g):
    F, G = UniPoly(f), UniPoly(g)
    if F.degree < 1 or G.degree < 1:
        return
    assert (resultant(F, G) == 0) == (F.gcd(G).degree > 0)
    common = UniPoly([1, 1])
    assert resultant(F * common, G * common) == 0


def test_form_resultant_is_binary_of_expected_degree():
    rng = random.Random(3)
    for _ in range(5):
        f, g = random_form(rng, 2, -3, 3), random_form(rng, 3, -3, 3)
        if f.degree_in("x") < 1 or g.degree_in("x") < 1:
            continue
        R = resultant(f, g, "x")
        assert R.is_zero() or R.is_homogeneous(6)
        assert R.degree_in("x") <= 0
