import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_form
from quartic_sos.cli import parse_polynomial
from quartic_sos.elimination import resultant, squarefree_part
from quartic_sos.forms import Poly, UniPoly, monomials
from quartic_sos.linalg import nullspace
from quartic_sos.realalg import real_roots, sign, sign_at
from quartic_sos.zerofinder import (
    EMPTY,
    FINITE,
    INFINITE,
    ProjectiveZero,
    binary_projective_roots,
    is_strictly_positive_binary,
    line_pair,
    projective_real_zeros,
    proportional,
)

CUBIC = UniPoly([-1, 6, -5, 1])


def binary(text):
    return parse_polynomial(text, None).with_vars(("y", "z"))


def assert_sound(f, Z):
    for P in Z.points:
        assert sign(f.evaluate(P.coords)) == 0
    for i, P in enumerate(Z.points):
        for Q in Z.points[i + 1:]:
            assert not proportional(P.coords, Q.coords)


def test_four_zero_form(four_zero_form):
    Z = projective_real_zeros(four_zero_form)
    assert Z.kind == FINITE
    expected = [ProjectiveZero.of(p) for p in [(1, 1, 1), (3, 2, 2), (2, 3, 2), (2, 2, 3)]]
    assert len(Z.points) == 4
    assert all(any(p == q for q in Z.points) for p in expected)
    assert_sound(four_zero_form, Z)


def test_cyclic_form_zeros(cyclic_form):
    Z = projective_real_zeros(cyclic_form)
    assert Z.kind == FINITE and len(Z.points) == 4
    assert_sound(cyclic_form, Z)
    rational = [p for p in Z.points if p.is_rational()]
    assert rational == [ProjectiveZero.of((1, 1, 1))]
    alphas = [v for v, _ in real_roots(CUBIC)]
    # (1/alpha_{i+1}, alpha_i, 1) for the cyclic successor of each root
    for p in Z.points:
        if p.is_rational():
            continue
        x, y, z = p.coords
        assert z == 1
        assert sign_at(CUBIC, y) == 0
        i = next(k for k, a in enumerate(alphas) if a == y)
        assert x * alphas[(i + 1) % 3] == 1


def test_scheiderer_form_has_no_zeros(scheiderer_form):
    assert projective_real_zeros(scheiderer_form).kind == EMPTY


def test_square_of_sphere_is_empty():
    assert projective_real_zeros(parse_polynomial("(x^2+y^2+z^2)^2")).kind == EMPTY


def test_repeated_lines_are_infinite():
    Z = projective_real_zeros(parse_polynomial("(x-y)^2*(x^2+y^2+z^2)"))
    assert Z.kind == INFINITE
    x, y, _ = Poly.gens()
    assert any(l == x - y or l == y - x for l in Z.lines)


def test_product_of_squared_lines_names_both_lines():
    f = parse_polynomial("x^2*y^2")
    Z = projective_real_zeros(f)
    assert Z.kind == INFINITE
    assert len(Z.lines) == 2
    assert all((l * l).divides(f) for l in Z.lines)


def test_irrational_line_pair():
    f = parse_polynomial("(x^2-2*y^2)^2")
    Z = projective_real_zeros(f)
    assert Z.kind == INFINITE and len(Z.lines) == 2
    assert all((l * l).divides(f) for l in Z.lines)
    assert line_pair(parse_polynomial("x^2+y^2-z^2", None)) == []


def test_square_of_indefinite_conic_is_infinite():
    Z = projective_real_zeros(parse_polynomial("(x^2+y^2-z^2)^2"))
    assert Z.kind == INFINITE and Z.square_factors


def test_square_of_semidefinite_quadratic_is_one_point():
    Z = projective_real_zeros(parse_polynomial("(x^2+y^2)^2"))
    assert Z.kind == FINITE and Z.points == [ProjectiveZero.of((0, 0, 1))]


def test_binary_roots_simple():
    roots = binary_projective_roots(binary("y^2-z^2"))
    assert roots == [((-1, 1), 1), ((1, 1), 1)]


def test_binary_roots_of_cyclic_resultant(cyclic_form):
    R = resultant(cyclic_form, cyclic_form.derivative("x"), "x").with_vars(("y", "z"))
    roots = binary_projective_roots(R)
    assert len(roots) == 4
    assert ((1, 1), 2) in roots
    for (a, b), m in roots:
        assert m == 2 and b == 1
        assert sign_at(UniPoly([-1, 1]) * CUBIC, a) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=5), min_size=1, max_size=5, unique=True))
def test_planted_binary_roots(rs):
    y, z = Poly.gens(("y", "z"))
    R = Poly.const(1, ("y", "z"))
    for r in rs:
        R = R * (y - z.scale(r))
    got = sorted(a for (a, b), _ in binary_projective_roots(R))
    assert got == sorted(rs)


def test_root_at_infinity():
    roots = binary_projective_roots(binary("y*z^2 + y^2*z"))
    pts = [p for p, _ in roots]
    assert (1, 0) in pts and (0, 1) in pts and (-1, 1) in pts


def test_strict_positivity():
    assert is_strictly_positive_binary(binary("13*y^4-18*y^3*z-y^2*z^2-6*y*z^3+13*z^4"))
    assert not is_strictly_positive_binary(binary("y^2-z^2"))
    assert is_strictly_positive_binary(binary("(y^2+z^2)^2"))
    assert not is_strictly_positive_binary(binary("(y-z)^2*(y^2+z^2)"))


def _quadratics_through(points):
    basis = monomials(3, 2)
    rows = [[Fraction(P[0]) ** e[0] * Fraction(P[1]) ** e[1] * Fraction(P[2]) ** e[2] for e in basis] for P in points]
    return [Poly(dict(zip(basis, v))) for v in nullspace(rows, len(basis))]


def test_planted_zeros_are_found():
    rng = random.Random(11)
    for trial in range(6):
        k = 1 + trial % 3
        pts = [tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(k)]
        if any(P == (0, 0, 0) for P in pts):
            continue
        space = _quadratics_through(pts)
        f = Poly.zero()
        for _ in range(3):
            q = Poly.zero()
            for b in space:
                q = q + b.scale(rng.randint(-3, 3))
            f = f + q * q
        if f.is_zero():
            continue
        Z = projective_real_zeros(f)
        if Z.kind == INFINITE:
            continue
        assert_sound(f, Z)
        for P in pts:
            assert any(proportional(P, Q.coords) for Q in Z.points)


def test_some_resultant_survives_on_squarefree_quartics():
    rng = random.Random(2)
    for _ in range(15):
        f = random_form(rng, 4, -3, 3, density=0.6)
        if f.is_zero() or not f.is_homogeneous(4):
            continue
        g = squarefree_part(f)
        nonzero = []
        for v in "xyz":
            if g.degree_in(v) < 1:
                continue
            nonzero.append(not resultant(g, g.derivative(v), v).is_zero())
        assert any(nonzero)


def test_zero_form_rejected():
    with pytest.raises(ValueError):
        projective_real_zeros(Poly.zero())


def test_projective_equality_is_exact():
    assert ProjectiveZero.of((2, 4, 6)) == ProjectiveZero.of((1, 2, 3))
    assert ProjectiveZero.of((1, 0, 0)) == ProjectiveZero.of((-5, 0, 0))
    assert ProjectiveZero.of((1, 2, 3)) != ProjectiveZero.of((1, 2, 4))
