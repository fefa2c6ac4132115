from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_sos.errors import DegreeBudgetExceeded
from quartic_sos.forms import UniPoly
from quartic_sos.realalg import (
    RealAlgebraic,
    alg_add,
    alg_inv,
    alg_mul,
    alg_neg,
    alg_sqrt_nonneg,
    compare,
    count_roots,
    degree_limit,
    isolate_roots,
    real_roots,
    refine,
    sign,
    sign_at,
    squarefree_factorization,
    sturm_chain,
)

T3 = UniPoly([-1, 6, -5, 1])  # t^3 - 5t^2 + 6t - 1


def sqrt2():
    return alg_sqrt_nonneg(Fraction(2))


def test_sturm_chain_of_x2_minus_2():
    chain = sturm_chain(UniPoly([-2, 0, 1]))
    assert chain == [UniPoly([-2, 0, 1]), UniPoly([0, 2]), UniPoly([2])]
    assert count_roots(UniPoly([-2, 0, 1]), -2, 2) == 2


def test_sturm_chain_rejects_zero():
    with pytest.raises(ValueError):
        sturm_chain(UniPoly())


def test_no_real_roots_of_x2_plus_1():
    p = UniPoly([1, 0, 1])
    assert count_roots(p) == 0
    assert count_roots(p, -100, 100) == 0
    assert isolate_roots(p) == []


def test_cubic_has_three_roots_in_0_5():
    assert count_roots(T3, 0, 5) == 3
    assert count_roots(T3) == 3


def test_isolation_reports_multiplicity():
    p = UniPoly.from_roots([1, 1, -2])
    roots = isolate_roots(p)
    assert [r.multiplicity for r in roots] == [1, 2]
    lo, hi = roots[0].lo, roots[0].hi
    assert lo <= -2 <= hi
    assert roots[1].lo <= 1 <= roots[1].hi
    assert roots[0].hi <= roots[1].lo


def test_dehomogenised_double_factor():
    # (y - z)^2 in the chart z = 1
    roots = real_roots(UniPoly([1, -2, 1]))
    assert roots == [(Fraction(1), 2)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=9), min_size=1, max_size=6, unique=True))
def test_planted_rational_roots_recovered(rs):
    p = UniPoly.from_roots(rs)
    got = [v for v, _ in real_roots(p)]
    assert got == sorted(rs)
    assert count_roots(p) == len(rs)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=8))
def test_isolation_count_matches_sturm(cs):
    p = UniPoly(cs)
    if p.degree < 1:
        return
    roots = isolate_roots(p)
    assert len(roots) == count_roots(p.squarefree_part())
    for a, b in zip(roots, roots[1:]):
        assert a.hi <= b.lo


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=7))
def test_squarefree_factorisation_multiplies_back(cs):
    p = UniPoly(cs) * UniPoly(cs[:2] or [1, 1])
    if p.degree < 1:
        return
    prod = UniPoly([1])
    for f, m in squarefree_factorization(p):
        prod = prod * f**m
    assert prod.monic() == p.monic()


def test_sign_at_defining_root_is_zero():
    r2 = sqrt2()
    assert sign_at(UniPoly([-2, 0, 1]), r2) == 0
    assert sign_at(UniPoly([-3, 0, 1]), r2) == -1
    assert sign_at(UniPoly([-1, 1]), r2) == 1


def test_cubic_roots_are_ordered():
    a1, a2, a3 = [v for v, _ in real_roots(T3)]
    assert compare(a1, a2) == -1
    assert compare(a2, a3) == -1
    assert compare(a3, a1) == 1
    assert compare(a2, a2) == 0
    assert 0 < a1 < 1 < a2 < 2 < a3 < 4


def test_refine_width():
    r2 = sqrt2()
    refine(r2, Fraction(1, 10**6))
    lo, hi = r2.enclosure()
    assert hi - lo <= Fraction(1, 10**6)
    assert abs(float(lo) - 1.41421356237) < 2e-6
    assert lo * lo <= 2 <= hi * hi


def test_field_arithmetic_examples():
    r2 = sqrt2()
    assert alg_add(r2, alg_neg(r2)) == 0
    assert alg_mul(r2, r2) == 2
    assert isinstance(alg_mul(r2, r2), (Fraction, RealAlgebraic))
    assert sign(alg_mul(r2, r2) - 2) == 0
    assert r2 * r2 == 2 and 1 < r2 < 2
    assert alg_inv(r2) * r2 == 1
    assert r2.defining == UniPoly([-2, 0, 1])


def test_sqrt_domain_errors():
    with pytest.raises(ValueError):
        alg_sqrt_nonneg(Fraction(-1))
    with pytest.raises(ZeroDivisionError):
        alg_inv(Fraction(0))


def test_nested_square_roots():
    r2 = sqrt2()
    r3 = alg_sqrt_nonneg(Fraction(3))
    s = r2 + r3
    assert s * s == 5 + 2 * r2 * r3
    t = alg_sqrt_nonneg(s)
    assert t * t == s
    assert str(r2).startswith("root(t^2 - 2, [")


def test_degree_budget_is_a_distinct_failure():
    r2 = sqrt2()
    with degree_limit(2):
        with pytest.raises(DegreeBudgetExceeded):
            alg_sqrt_nonneg(r2 + 1)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=0, max_value=50, max_denominator=20), st.fractions(min_value=0, max_value=50, max_denominator=20))
def test_rational_closure(a, b):
    # rational values carried by irrational generators: (sqrt2 + a) - sqrt2
    ra = alg_add(alg_add(sqrt2(), a), alg_neg(sqrt2()))
    rb = alg_add(alg_sqrt_nonneg(Fraction(3)) + b, -alg_sqrt_nonneg(Fraction(3)))
    assert alg_add(ra, rb) == a + b
    assert alg_mul(ra, rb) == a * b


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.integers(2, 30))
def test_compare_matches_squares(a, b):
    ra, rb = alg_sqrt_nonneg(Fraction(a)), alg_sqrt_nonneg(Fraction(b))
    assert compare(ra, rb) == (a > b) - (a < b)
    assert compare(rb, ra) == -compare(ra, rb)
