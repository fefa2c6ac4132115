"""Exact polynomial arithmetic: dense univariate polynomials, sparse
multivariate polynomials (ternary and binary forms), and 3x3 coordinate
changes.

Coefficients are ``fractions.Fraction`` or :class:`quartic_sos.realalg.RealAlgebraic`.
Nothing here imports ``realalg``; mixed arithmetic works through the
ordinary operators, and ``RealAlgebraic`` promotes rationals itself.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple

Exps = Tuple[int, ...]

XYZ = ("x", "y", "z")
YZ = ("y", "z")


def coeff(c):
    """Normalise a scalar: ints become Fractions, everything else passes."""
    if isinstance(c, int):
        return Fraction(c)
    return c


def is_rational(c) -> bool:
    return isinstance(c, (Fraction, int))


def exquo_scalar(a, b):
    return a / b


def format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# Univariate


class UniPoly:
    """Dense univariate polynomial, constant term first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [coeff(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c: tuple) -> "UniPoly":
        p = cls.__new__(cls)
        p.c = c
        return p

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, a) -> "UniPoly":
        return cls((a,))

    @classmethod
    def from_roots(cls, roots) -> "UniPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-coeff(r), 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else Fraction(0)

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def is_rational(self) -> bool:
        return all(isinstance(a, Fraction) for a in self.c)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.c):
            return self.c[i]
        return Fraction(0)

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            other = UniPoly((other,))
        if len(self.c) != len(other.c):
            return False
        return all(a == b for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash(self.c)

    def __neg__(self) -> "UniPoly":
        return UniPoly._raw(tuple(-a for a in self.c))

    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly((other,))
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return UniPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly((other,))
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return self.scale(other)
        a, b = self.c, other.c
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u == 0:
                continue
            for j, v in enumerate(b):
                out[i + j] = out[i + j] + u * v
        return UniPoly(out)

    __rmul__ = __mul__

    def scale(self, k) -> "UniPoly":
        k = coeff(k)
        if k == 0:
            return UniPoly()
        return UniPoly._raw(tuple(a * k for a in self.c))

    def __pow__(self, n: int) -> "UniPoly":
        result = UniPoly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = other.degree
        lc_inv = 1 / other.lc
        if len(r) - 1 < db:
            return UniPoly(), self
        q = [Fraction(0)] * (len(r) - db)
        b = other.c
        for k in range(len(r) - 1 - db, -1, -1):
            t = r[k + db] * lc_inv
            q[k] = t
            if t == 0:
                continue
            for j in range(db + 1):
                r[k + j] = r[k + j] - t * b[j]
        return UniPoly(q), UniPoly(r[:db])

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def exquo(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return self.scale(1 / coeff(other))
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly._raw(tuple(a * i for i, a in enumerate(self.c) if i)) if len(self.c) > 1 else UniPoly()

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def primitive(self) -> "UniPoly":
        """Rational polynomial rescaled to coprime integers, positive leading
        coefficient."""
        if self.is_zero():
            return self
        den = 1
        for a in self.c:
            den = den * a.denominator // _gcd(den, a.denominator)
        ints = [a.numerator * (den // a.denominator) for a in self.c]
        g = 0
        for v in ints:
            g = _gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return UniPoly._raw(tuple(Fraction(v // g) for v in ints))

    def int_coeffs(self) -> List[int]:
        """Integer coefficients of the primitive associate."""
        return [a.numerator for a in self.primitive().c]

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd. Rational inputs use a primitive integer remainder
        sequence to keep coefficient growth down."""
        if self.is_rational() and other.is_rational():
            return _rational_gcd(self, other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for a in reversed(self.c):
            acc = acc * inner + a
        return acc

    def reverse(self, n: int | None = None) -> "UniPoly":
        """``x^n p(1/x)`` with ``n`` defaulting to the degree."""
        if n is None:
            n = self.degree
        c = list(self.c) + [Fraction(0)] * (n + 1 - len(self.c))
        return UniPoly(reversed(c[: n + 1]))

    def neg_var(self) -> "UniPoly":
        return UniPoly._raw(tuple(a if i % 2 == 0 else -a for i, a in enumerate(self.c)))

    def shift_scale(self, a, b) -> "UniPoly":
        """``p(a + b*x)``."""
        return self.compose(UniPoly((a, b)))

    def squarefree_part(self) -> "UniPoly":
        if self.degree < 1:
            return self.monic() if not self.is_zero() else self
        return self.exquo(self.gcd(self.derivative())).monic()

    def to_str(self, var: str = "t") -> str:
        terms = [(i, a) for i, a in enumerate(self.c) if a != 0]
        if not terms:
            return "0"
        out = []
        for i, a in reversed(terms):
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            out.append(_signed_term(a, mono))
        return _join_terms(out)

    def __str__(self) -> str:
        return self.to_str("t")

    def __repr__(self) -> str:
        return f"UniPoly({self.to_str('t')})"


def _gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def _int_prem(a: List[int], b: List[int]) -> List[int]:
    """Integer pseudo-remainder of dense integer lists (constant first)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        t = r[-1]
        r = [v * lb for v in r]
        for j in range(db + 1):
            r[k + j] -= t * b[j]
        while r and r[-1] == 0:
            r.pop()
    return r


def _int_primitive(a: List[int]) -> List[int]:
    g = 0
    for v in a:
        g = _gcd(g, v)
        if g == 1:
            break
    if g == 0:
        return a
    if a[-1] < 0:
        g = -g
    return [v // g for v in a]


def _rational_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    a = [v.numerator for v in p.primitive().c]
    b = [v.numerator for v in q.primitive().c]
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return UniPoly((1,))
        r = _int_prem(a, b)
        a, b = b, (_int_primitive(r) if r else r)
    return UniPoly(a).monic()


def _signed_term(a, mono: str) -> str:
    """Render ``a*mono`` with an explicit leading sign character."""
    if isinstance(a, Fraction):
        sign = "-" if a < 0 else "+"
        mag = -a if a < 0 else a
        if mono and mag == 1:
            return sign + mono
        body = format_rational(mag)
        return sign + (body + "*" + mono if mono else body)
    body = f"({a})"
    return "+" + (body + "*" + mono if mono else body)


def _join_terms(parts: List[str]) -> str:
    s = ""
    for k, p in enumerate(parts):
        sign, body = p[0], p[1:]
        if k == 0:
            s = body if sign == "+" else "-" + body
        else:
            s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------
# Multivariate


class Poly:
    """Sparse polynomial over named variables; the form types are instances
    with 3 (``x, y, z``) or 2 (``y, z``) variables.

    ``terms`` maps exponent tuples to nonzero coefficients.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Dict[Exps, object] | None = None, vars: Sequence[str] = XYZ):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.vars}")
                c = coeff(c)
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, vars: tuple) -> "Poly":
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    @classmethod
    def gens(cls, vars: Sequence[str] = XYZ) -> Tuple["Poly", ...]:
        n = len(vars)
        return tuple(
            cls({tuple(1 if j == i else 0 for j in range(n)): 1}, vars) for i in range(n)
        )

    @classmethod
    def const(cls, c, vars: Sequence[str] = XYZ) -> "Poly":
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def zero(cls, vars: Sequence[str] = XYZ) -> "Poly":
        return cls._raw({}, tuple(vars))

    # -- structure ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return d is None or degs == {d}

    def degree_in(self, var) -> int:
        i = self._index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def _index(self, var) -> int:
        if isinstance(var, int):
            return var
        return self.vars.index(var)

    def coefficient(self, exps: Exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def coeff_values(self):
        return list(self.terms.values())

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other, self.vars)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                s = v + c
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
        return Poly._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other, self.vars)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw({e: c for e, c in out.items() if c != 0}, self.vars)

    __rmul__ = __mul__

    def scale(self, k) -> "Poly":
        k = coeff(k)
        if k == 0:
            return Poly.zero(self.vars)
        return Poly._raw({e: c * k for e, c in self.terms.items()}, self.vars)

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(other, self.vars)
        if self.vars != other.vars or self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms)))

    def map_coeffs(self, fn) -> "Poly":
        return Poly({e: fn(c) for e, c in self.terms.items()}, self.vars)

    # -- calculus and evaluation ------------------------------------------

    def derivative(self, var) -> "Poly":
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly._raw(out, self.vars)

    def gradient(self) -> List["Poly"]:
        return [self.derivative(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence):
        """Exact value at ``point``; entries may be rational or algebraic."""
        point = [coeff(v) for v in point]
        powers = [_power_table(v, self.degree) for v in point]
        acc = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * powers[i][k]
            acc = acc + t
        return acc

    __call__ = evaluate

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Compose: variable ``i`` is replaced by ``images[i]`` (all images
        share one variable tuple)."""
        out_vars = images[0].vars
        deg = max(self.degree, 0)
        tables = [_power_table(im, deg, one=Poly.const(1, out_vars)) for im in images]
        acc = Poly.zero(out_vars)
        for e, c in self.terms.items():
            t = Poly.const(c, out_vars)
            for i, k in enumerate(e):
                if k:
                    t = t * tables[i][k]
            acc = acc + t
        return acc

    def substitute_linear(self, A: "Matrix3") -> "Poly":
        """``f(A @ v)``: variable ``i`` becomes row ``i`` of ``A`` applied to
        the same variables."""
        if self.nvars != 3:
            raise ValueError("substitute_linear expects a ternary form")
        if A.det() == 0:
            raise ValueError("coordinate change is singular")
        g = Poly.gens(self.vars)
        images = [sum((g[j].scale(A[i][j]) for j in range(3)), Poly.zero(self.vars)) for i in range(3)]
        return self.substitute(images)

    # -- univariate views --------------------------------------------------

    def as_univariate(self, var) -> List["Poly"]:
        """Coefficients of powers of ``var`` (constant first) as polynomials
        in the same variables with ``var`` absent."""
        i = self._index(var)
        d = self.degree_in(i)
        out = [dict() for _ in range(max(d, 0) + 1)]
        for e, c in self.terms.items():
            ne = list(e)
            k = ne[i]
            ne[i] = 0
            out[k][tuple(ne)] = c
        if d < 0:
            return []
        return [Poly._raw(t, self.vars) for t in out]

    @classmethod
    def from_univariate(cls, coeffs: Sequence["Poly"], var, vars: Sequence[str]) -> "Poly":
        vars = tuple(vars)
        i = var if isinstance(var, int) else vars.index(var)
        acc = {}
        for k, p in enumerate(coeffs):
            for e, c in p.terms.items():
                ne = list(e)
                ne[i] += k
                acc[tuple(ne)] = c
        return cls(acc, vars)

    def to_unipoly(self, var=None) -> UniPoly:
        """Univariate view when only ``var`` occurs (others must be absent)."""
        if not self.terms:
            return UniPoly()
        if var is None:
            used = {i for e in self.terms for i, k in enumerate(e) if k}
            if len(used) > 1:
                raise ValueError("polynomial is not univariate")
            var = used.pop() if used else 0
        i = self._index(var)
        d = self.degree_in(i)
        c = [Fraction(0)] * (d + 1)
        for e, v in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial is not univariate")
            c[e[i]] = v
        return UniPoly(c)

    @classmethod
    def from_unipoly(cls, p: UniPoly, var, vars: Sequence[str]) -> "Poly":
        vars = tuple(vars)
        i = var if isinstance(var, int) else vars.index(var)
        return cls({tuple(k if j == i else 0 for j in range(len(vars))): a for k, a in enumerate(p.c)}, vars)

    def dehomogenize(self, var) -> "Poly":
        """Set ``var`` to 1 (variable kept in the tuple with exponent 0)."""
        i = self._index(var)
        out: Dict[Exps, object] = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] = 0
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return Poly(out, self.vars)

    def homogenize(self, var, degree: int) -> "Poly":
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            s = sum(e) - e[i]
            if s > degree:
                raise ValueError("degree too small to homogenize")
            ne = list(e)
            ne[i] = degree - s
            out[tuple(ne)] = c
        return Poly._raw(out, self.vars)

    def with_vars(self, vars: Sequence[str]) -> "Poly":
        """Re-embed into another variable tuple containing every variable
        that actually occurs."""
        vars = tuple(vars)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for name, k in zip(self.vars, e):
                if k:
                    if name not in vars:
                        raise ValueError(f"variable {name} missing from {vars}")
                    ne[vars.index(name)] = k
            out[tuple(ne)] = c
        return Poly._raw(out, vars)

    # -- division ----------------------------------------------------------

    def leading(self) -> Tuple[Exps, object]:
        e = max(self.terms)
        return e, self.terms[e]

    def divmod_lex(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        """Multivariate division by a single divisor in lex order."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        le, lc = other.leading()
        lc_inv = 1 / lc
        q: Dict[Exps, object] = {}
        rem: Dict[Exps, object] = {}
        p = dict(self.terms)
        while p:
            e = max(p)
            c = p.pop(e)
            if all(a >= b for a, b in zip(e, le)):
                de = tuple(a - b for a, b in zip(e, le))
                t = c * lc_inv
                q[de] = q.get(de, 0) + t
                for oe, oc in other.terms.items():
                    if oe == le:
                        continue
                    ne = tuple(a + b for a, b in zip(oe, de))
                    v = p.get(ne, 0) - t * oc
                    if v == 0:
                        p.pop(ne, None)
                    else:
                        p[ne] = v
            else:
                rem[e] = c
        return Poly(q, self.vars), Poly(rem, self.vars)

    def exquo(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(1 / coeff(other))
        q, r = self.divmod_lex(other)
        if not r.is_zero():
            raise ArithmeticError("inexact multivariate division")
        return q

    def divides(self, other: "Poly") -> bool:
        """True when ``self`` divides ``other`` exactly."""
        return self.is_zero() and other.is_zero() or (not self.is_zero() and other.divmod_lex(self)[1].is_zero())

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self) -> List[Tuple[Exps, object]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def monomial_str(self, e: Exps) -> str:
        parts = []
        for name, k in zip(self.vars, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return _join_terms([_signed_term(c, self.monomial_str(e)) for e, c in self.sorted_terms()])

    def __repr__(self) -> str:
        return f"Poly({self}; vars={','.join(self.vars)})"


def _power_table(v, deg: int, one=None):
    table = [Fraction(1) if one is None else one]
    for _ in range(deg):
        table.append(table[-1] * v)
    return table


def ternary(terms: Dict[Exps, object]) -> Poly:
    return Poly(terms, XYZ)


def binary(terms: Dict[Exps, object]) -> Poly:
    return Poly(terms, YZ)


def sphere(vars: Sequence[str] = XYZ) -> Poly:
    """Sum of squares of the variables."""
    g = Poly.gens(vars)
    return sum((v * v for v in g), Poly.zero(vars))


def monomials(n: int, d: int) -> List[Exps]:
    """All exponent tuples of ``n`` variables with total degree ``d`` in
    graded-lex order."""
    out = [e for e in product(range(d + 1), repeat=n) if sum(e) == d]
    return sorted(out, reverse=True)


def add(f: Poly, g: Poly) -> Poly:
    if not f.is_zero() and not g.is_zero() and f.is_homogeneous() and g.is_homogeneous():
        if f.degree != g.degree:
            raise ValueError(f"cannot add forms of degree {f.degree} and {g.degree}")
    return f + g


def scale(c, f: Poly) -> Poly:
    return f.scale(c)


def mul(f: Poly, g: Poly) -> Poly:
    return f * g


def substitute_linear(f: Poly, A: "Matrix3") -> Poly:
    return f.substitute_linear(A)


def derivative(f: Poly, var) -> Poly:
    return f.derivative(var)


def evaluate(f: Poly, point: Sequence):
    return f.evaluate(point)


def binary_to_ternary(b: Poly) -> Poly:
    """Embed a form in ``y, z`` (or any subset of ``x, y, z``) as a ternary form."""
    return b.with_vars(XYZ)


def ternary_to_binary(f: Poly, vars: Sequence[str] = YZ) -> Poly:
    return f.with_vars(vars)


# ---------------------------------------------------------------------------
# x-decompositions


LEMMA2 = "lemma2"
LEMMA3 = "lemma3"


class ShapeError(ValueError):
    """A form does not fit the requested decomposition layout."""


def x_decomposition(f: Poly, layout: str = LEMMA2) -> Tuple[Poly, Poly, Poly]:
    """Split a ternary quartic as a quadratic in ``x``.

    ``lemma2``: ``f = x^2 p + 2 x q + r`` with ``p, q, r`` binary forms of
    degrees 2, 3, 4 in ``y, z``.

    ``lemma3``: ``f = x^2 p + 2 x z q + z^2 r`` with ``p, q, r`` binary
    quadratics.
    """
    if f.nvars != 3 or not f.is_homogeneous(4) and not f.is_zero():
        raise ShapeError("expected a ternary quartic")
    parts = f.as_univariate("x") + [Poly.zero(XYZ)] * 5
    if any(not parts[k].is_zero() for k in (3, 4)):
        raise ShapeError("terms of x-degree above 2 present")
    p = parts[2].with_vars(YZ)
    q = parts[1].with_vars(YZ).scale(Fraction(1, 2))
    r = parts[0].with_vars(YZ)
    if layout == LEMMA2:
        return p, q, r
    if layout != LEMMA3:
        raise ValueError(f"unknown layout {layout!r}")
    _, z = Poly.gens(YZ)
    try:
        q3 = q.exquo(z)
        r3 = r.exquo(z * z)
    except ArithmeticError:
        raise ShapeError("x-linear part not divisible by z or x-free part not divisible by z^2") from None
    return p, q3, r3


def recompose(p: Poly, q: Poly, r: Poly, layout: str = LEMMA2) -> Poly:
    x, y, z = Poly.gens(XYZ)
    P, Q, R = (t.with_vars(XYZ) for t in (p, q, r))
    if layout == LEMMA2:
        return x * x * P + x * Q.scale(2) + R
    return x * x * P + x * z * Q.scale(2) + z * z * R


# ---------------------------------------------------------------------------
# 3x3 matrices


class Matrix3:
    """3x3 matrix of exact coefficients, used as a coordinate change."""

    __slots__ = ("rows", "_inv")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(coeff(v) for v in row) for row in rows)
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("Matrix3 needs 3 rows of 3 entries")
        self._inv = None

    @classmethod
    def identity(cls) -> "Matrix3":
        return cls([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix3":
        return cls([[cols[j][i] for j in range(3)] for i in range(3)])

    def __getitem__(self, i):
        return self.rows[i]

    def column(self, j: int) -> tuple:
        return tuple(self.rows[i][j] for i in range(3))

    def det(self):
        a = self.rows
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )

    def inverse(self) -> "Matrix3":
        if self._inv is not None:
            return self._inv
        d = self.det()
        if d == 0:
            raise ValueError("matrix is singular")
        a = self.rows
        cof = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != i]
                c = [k for k in range(3) if k != j]
                m = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
                cof[i][j] = m if (i + j) % 2 == 0 else -m
        dinv = 1 / d
        inv = Matrix3([[cof[j][i] * dinv for j in range(3)] for i in range(3)])
        inv._inv = self
        self._inv = inv
        return inv

    def __matmul__(self, other):
        if isinstance(other, Matrix3):
            return Matrix3(
                [[sum((self.rows[i][k] * other.rows[k][j] for k in range(3)), Fraction(0)) for j in range(3)] for i in range(3)]
            )
        return tuple(sum((self.rows[i][k] * coeff(other[k]) for k in range(3)), Fraction(0)) for i in range(3))

    def transpose(self) -> "Matrix3":
        return Matrix3([[self.rows[j][i] for j in range(3)] for i in range(3)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix3) and all(
            self.rows[i][j] == other.rows[i][j] for i in range(3) for j in range(3)
        )

    def __repr__(self) -> str:
        return f"Matrix3({[[str(v) for v in r] for r in self.rows]})"
