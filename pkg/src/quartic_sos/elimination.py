"""Resultants, square-free decomposition and successive elimination.

Univariate-in-one-variable polynomials over a coefficient ring are plain
lists (constant term first).  The ring may be ``Fraction``, ``UniPoly`` or
``Poly``; all that is needed is ``+ - *``, ``== 0`` and exact division.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import DegenerateSystem
from .forms import XYZ, Poly, ShapeError, UniPoly, x_decomposition, LEMMA2, LEMMA3


def _exquo(a, b):
    if isinstance(a, (UniPoly, Poly)):
        return a.exquo(b)
    return a / b


def _strip(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _one_like(a):
    if isinstance(a, UniPoly):
        return UniPoly((1,))
    if isinstance(a, Poly):
        return Poly.const(1, a.vars)
    return Fraction(1)


def _zero_like(a):
    if isinstance(a, UniPoly):
        return UniPoly()
    if isinstance(a, Poly):
        return Poly.zero(a.vars)
    return Fraction(0)


def _pow(a, n: int):
    r = _one_like(a)
    while n:
        if n & 1:
            r = r * a
        a = a * a
        n >>= 1
    return r


def prem(a: list, b: list) -> list:
    """Pseudo-remainder: ``lc(b)**(deg a - deg b + 1) * a mod b``."""
    a, b = _strip(a), _strip(b)
    db = len(b) - 1
    delta = len(a) - 1 - db
    if delta < 0:
        return a
    lb = b[-1]
    r = list(a)
    for _ in range(delta + 1):
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        k = len(r) - 1 - db
        t = r[-1]
        r = [c * lb for c in r]
        for j in range(db + 1):
            r[k + j] = r[k + j] - t * b[j]
        r.pop()
        r = _strip(r)
    return r


def resultant_coeffs(a: Sequence, b: Sequence):
    """Resultant of two polynomials given as coefficient lists over an
    integral domain with exact division (subresultant PRS).

    The sign follows the Sylvester determinant with the coefficients of
    ``a`` in the first ``deg b`` rows.
    """
    A, B = _strip(a), _strip(b)
    if not A or not B:
        probe = (list(a) + list(b) + [Fraction(0)])[0]
        return _zero_like(probe)
    da, dbb = len(A) - 1, len(B) - 1
    if da == 0 and dbb == 0:
        raise ValueError("resultant of two constants")
    s = 1
    if da < dbb:
        A, B = B, A
        if da % 2 == 1 and dbb % 2 == 1:
            s = -1
    g = _one_like(A[-1])
    h = _one_like(A[-1])
    if len(B) == 1:
        r = _pow(B[0], len(A) - 1)
        return r if s == 1 else -r
    while True:
        delta = len(A) - len(B)
        if (len(A) - 1) % 2 == 1 and (len(B) - 1) % 2 == 1:
            s = -s
        R = prem(A, B)
        if not R:
            return _zero_like(A[-1])
        A = B
        div = g * _pow(h, delta)
        B = [_exquo(c, div) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _exquo(_pow(g, delta), _pow(h, delta - 1))
        if len(B) == 1:
            dA = len(A) - 1
            if dA == 0:
                r = B[0]
            elif dA == 1:
                r = B[0]
            else:
                r = _exquo(_pow(B[0], dA), _pow(h, dA - 1))
            return r if s == 1 else -r


def sylvester_matrix(a: Sequence, b: Sequence) -> List[list]:
    """Classical Sylvester matrix; rows hold coefficients highest degree
    first."""
    A, B = _strip(a), _strip(b)
    m, n = len(A) - 1, len(B) - 1
    size = m + n
    zero = _zero_like(A[-1])
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(A)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(B)):
            row[i + j] = c
        rows.append(row)
    return rows


def bareiss_det(M: List[list]):
    """Fraction-free determinant with row pivoting."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    M = [list(r) for r in M]
    sign = 1
    prev = _one_like(M[0][0])
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return _zero_like(M[0][0])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = _exquo(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign == 1 else -d


def sylvester_resultant(a: Sequence, b: Sequence):
    return bareiss_det(sylvester_matrix(a, b))


def charpoly(rep: UniPoly, modulus: UniPoly) -> UniPoly:
    """``res_t(modulus(t), x - rep(t))`` as a polynomial in ``x``: its roots
    are ``rep`` evaluated at the roots of ``modulus``."""
    a = [UniPoly((c,)) for c in modulus.c]
    b = [UniPoly((0, 1)) - UniPoly((rep[0],))] + [UniPoly((-c,)) for c in rep.c[1:]]
    if rep.degree < 1:
        return UniPoly((-rep[0], 1)) ** modulus.degree
    return resultant_coeffs(a, b)


# ---------------------------------------------------------------------------
# Resultants of forms


def _to_nested(f: Poly, var: int, other: int) -> List[UniPoly]:
    """``f`` as a list (powers of ``var``) of UniPolys in ``other``; every
    remaining variable must be absent."""
    d = f.degree_in(var)
    out = [[Fraction(0)] * (f.degree_in(other) + 1) for _ in range(d + 1)]
    for e, c in f.terms.items():
        if any(k for i, k in enumerate(e) if i not in (var, other)):
            raise ValueError("unexpected variable")
        out[e[var]][e[other]] = c
    return [UniPoly(c) for c in out]


def _from_nested(coeffs: List[UniPoly], var: int, other: int, vars) -> Poly:
    n = len(vars)
    terms = {}
    for i, u in enumerate(coeffs):
        for j, c in enumerate(u.c):
            if c != 0:
                e = [0] * n
                e[var] = i
                e[other] = j
                terms[tuple(e)] = c
    return Poly(terms, vars)


def resultant(f, g, var=None):
    """Resultant with respect to ``var``.

    UniPoly inputs give a rational number.  Homogeneous ternary forms give
    a binary form in the other two variables, computed in the chart where
    the last remaining variable is 1 and then rehomogenised.  Other
    polynomials in at most two variables give a polynomial in the second.
    """
    if isinstance(f, UniPoly):
        return resultant_coeffs(list(f.c), list(g.c))
    f_vars = f.vars
    v = f._index(var)
    if f.degree_in(v) <= 0 and g.degree_in(v) <= 0:
        raise ValueError("both inputs are constant in the elimination variable")
    if f.nvars == 3 and f.is_homogeneous() and g.is_homogeneous():
        others = [i for i in range(3) if i != v]
        keep, drop = others
        a, b = f.degree_in(v), g.degree_in(v)
        D = b * f.degree + a * g.degree - a * b
        fd, gd = f.dehomogenize(drop), g.dehomogenize(drop)
        r = resultant_coeffs(_to_nested(fd, v, keep), _to_nested(gd, v, keep))
        out = Poly.from_unipoly(r, keep, f_vars) if isinstance(r, UniPoly) else Poly.const(r, f_vars)
        return out.homogenize(drop, D) if not out.is_zero() else out
    used = {i for p in (f, g) for e in p.terms for i, k in enumerate(e) if k and i != v}
    if len(used) <= 1:
        other = used.pop() if used else (1 if v == 0 else 0)
        r = resultant_coeffs(_to_nested(f, v, other), _to_nested(g, v, other))
        return Poly.from_unipoly(r, other, f_vars) if isinstance(r, UniPoly) else Poly.const(r, f_vars)
    return resultant_coeffs(f.as_univariate(v), g.as_univariate(v))


def discriminant(f: Poly, layout: str = LEMMA2) -> Poly:
    """``p*r - q**2`` for the quadratic-in-x presentation of ``f``."""
    p, q, r = x_decomposition(f, layout)
    return p * r - q * q


def discriminant_pqr(p: Poly, q: Poly, r: Poly) -> Poly:
    return p * r - q * q


# ---------------------------------------------------------------------------
# gcd and square-free decomposition for forms


def _content(coeffs: List[UniPoly]) -> UniPoly:
    g = UniPoly()
    for c in coeffs:
        g = g.gcd(c) if not g.is_zero() else c.monic()
        if g.degree == 0:
            return UniPoly((1,))
    return g


def _prim(coeffs: List[UniPoly]) -> Tuple[UniPoly, List[UniPoly]]:
    c = _content(coeffs)
    return c, [u.exquo(c) for u in coeffs]


def _normalise(coeffs: List[UniPoly]) -> List[UniPoly]:
    coeffs = _strip(coeffs)
    if not coeffs:
        return coeffs
    lc = coeffs[-1].lc
    return [u.scale(1 / lc) for u in coeffs]


def nested_gcd(f: List[UniPoly], g: List[UniPoly]) -> List[UniPoly]:
    """gcd in ``Q[y][x]`` by content splitting and a primitive PRS."""
    f, g = _strip(f), _strip(g)
    if not f:
        return _normalise(g)
    if not g:
        return _normalise(f)
    cf, pf = _prim(f)
    cg, pg = _prim(g)
    c = cf.gcd(cg)
    a, b = (pf, pg) if len(pf) >= len(pg) else (pg, pf)
    while b and len(b) > 1:
        r = prem(a, b)
        a = b
        b = _prim(r)[1] if r else r
    if b:  # nonzero constant in x: primitive parts are coprime
        return [c]
    return _normalise([c * u for u in _prim(a)[1]])


def _z_power(f: Poly, zi: int) -> Tuple[int, Poly]:
    k = min(e[zi] for e in f.terms)
    if k == 0:
        return 0, f
    terms = {}
    for e, c in f.terms.items():
        ne = list(e)
        ne[zi] -= k
        terms[tuple(ne)] = c
    return k, Poly(terms, f.vars)


def form_gcd(f: Poly, g: Poly) -> Poly:
    """Monic-normalised gcd of two ternary (or binary) forms."""
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if f.vars != g.vars:
        raise ValueError("variable mismatch")
    n = f.nvars
    zi = n - 1
    kf, f1 = _z_power(f, zi)
    kg, g1 = _z_power(g, zi)
    kz = min(kf, kg)
    if n == 1:
        raise ValueError("forms need at least two variables")
    if n == 2:
        uf = f1.dehomogenize(zi).to_unipoly(0)
        ug = g1.dehomogenize(zi).to_unipoly(0)
        h = uf.gcd(ug)
        hp = Poly.from_unipoly(h, 0, f.vars)
    else:
        fd, gd = f1.dehomogenize(zi), g1.dehomogenize(zi)
        h = nested_gcd(_to_nested(fd, 0, 1), _to_nested(gd, 0, 1))
        hp = _from_nested(h, 0, 1, f.vars)
    hp = hp.homogenize(zi, hp.degree) if not hp.is_zero() else hp
    zpow = Poly.gens(f.vars)[zi] ** kz
    return _monic_form(hp * zpow)


def _monic_form(f: Poly) -> Poly:
    if f.is_zero():
        return f
    _, lc = max(f.terms.items(), key=lambda t: t[0])
    return f.scale(1 / lc)


def squarefree_decompose(f) -> List[Tuple[object, int]]:
    """Square-free decomposition of a UniPoly or a form.

    Returns pairwise coprime square-free factors with multiplicities whose
    product reproduces ``f`` exactly; a constant factor, when not 1, is
    listed first with multiplicity 1.
    """
    if isinstance(f, UniPoly):
        from .realalg import squarefree_factorization

        if f.is_zero():
            raise ValueError("square-free decomposition of zero")
        parts = squarefree_factorization(f)
        prod = UniPoly((1,))
        for p, m in parts:
            prod = prod * p ** m
        unit = f.lc / prod.lc
        return ([(UniPoly((unit,)), 1)] if unit != 1 else []) + parts
    if f.is_zero():
        raise ValueError("square-free decomposition of zero")
    factors = _form_yun(f)
    prod = Poly.const(1, f.vars)
    for p, m in factors:
        prod = prod * p ** m
    unit = f.leading()[1] / prod.leading()[1]
    out = [(Poly.const(unit, f.vars), 1)] if unit != 1 else []
    return out + factors


def _form_yun(f: Poly) -> List[Tuple[Poly, int]]:
    """Yun's algorithm on a form, splitting off variables one at a time:
    first the part involving the first variable, then its content."""
    if f.degree <= 0:
        return []
    n = f.nvars
    # pick the first variable that occurs
    v = next((i for i in range(n) if f.degree_in(i) > 0), None)
    if v is None:
        return []
    # content with respect to v: gcd of coefficients, a form in the others
    coeffs = [c for c in f.as_univariate(v) if not c.is_zero()]
    cont = coeffs[0]
    for c in coeffs[1:]:
        cont = form_gcd(cont, c) if cont.degree > 0 else cont
        if cont.degree <= 0:
            break
    if cont.degree <= 0:
        cont = Poly.const(1, f.vars)
    else:
        cont = _monic_form(cont)
    prim = f.exquo(cont)
    out: List[Tuple[Poly, int]] = []
    # Yun on the primitive part with respect to v
    dp = prim.derivative(v)
    b = form_gcd(prim, dp)
    c = prim.exquo(b)
    d = dp.exquo(b) - c.derivative(v)
    i = 1
    while c.degree > 0:
        a = form_gcd(c, d) if not d.is_zero() else _monic_form(c)
        if a.degree > 0:
            out.append((_monic_form(a), i))
        c = c.exquo(a)
        d = d.exquo(a) - c.derivative(v)
        i += 1
    for p, m in _form_yun(cont):
        out.append((p, m))
    # merge factors of equal multiplicity
    merged = {}
    for p, m in out:
        merged[m] = merged[m] * p if m in merged else p
    return [(_monic_form(merged[m]), m) for m in sorted(merged)]


def squarefree_part(f: Poly) -> Poly:
    prod = Poly.const(1, f.vars)
    for p, m in _form_yun(f):
        prod = prod * p
    return prod


# ---------------------------------------------------------------------------
# Successive elimination


def eliminate_system(polys: Sequence[Poly], order: Sequence) -> UniPoly:
    """Eliminate the variables in ``order[:-1]`` by successive pairwise
    resultants and return a univariate polynomial in ``order[-1]``.

    Every coordinate value of a common real solution is a root of the
    result; extra roots may appear and must be checked by the caller.
    """
    if not polys:
        raise ValueError("empty system")
    current = [p for p in polys if not p.is_zero()]
    vars = current[0].vars
    for var in order[:-1]:
        vi = vars.index(var) if not isinstance(var, int) else var
        with_v = [p for p in current if p.degree_in(vi) > 0]
        without = [p for p in current if p.degree_in(vi) <= 0]
        if not with_v:
            continue
        if len(with_v) == 1:
            current = without
            continue
        base = with_v[0]
        nxt = []
        for other in with_v[1:]:
            r = resultant(base, other, vi)
            if isinstance(r, Poly) and r.is_zero():
                raise DegenerateSystem(f"resultant in {var} vanishes identically")
            nxt.append(r if isinstance(r, Poly) else Poly.const(r, vars))
        current = without + nxt
    last = order[-1]
    li = vars.index(last) if not isinstance(last, int) else last
    g = UniPoly()
    for p in current:
        u = p.to_unipoly(li)
        g = u if g.is_zero() else g.gcd(u) if g.gcd(u).degree > 0 else g
    if g.is_zero():
        raise DegenerateSystem("eliminant vanishes identically")
    return g.primitive()
