"""Exact real algebraic numbers.

A :class:`Root` is a real root of a square-free rational polynomial, pinned
by an isolating interval.  A :class:`RealAlgebraic` is an element of the
field generated by one root, stored as a polynomial in that root.  Elements
over different roots are brought into a common field by a primitive element
``theta1 + k*theta2`` whose defining polynomial is a resultant.

Sign questions are answered lazily: interval evaluation first, and an exact
gcd-based zero test when the interval still straddles zero.
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import DegreeBudgetExceeded, RefinementBudgetExceeded
from .forms import UniPoly

DEFAULT_DEGREE_BUDGET = 64
DEFAULT_REFINEMENT_BUDGET = 20000

degree_budget: contextvars.ContextVar[int] = contextvars.ContextVar(
    "degree_budget", default=DEFAULT_DEGREE_BUDGET
)
refinement_budget: contextvars.ContextVar[int] = contextvars.ContextVar(
    "refinement_budget", default=DEFAULT_REFINEMENT_BUDGET
)


@contextlib.contextmanager
def degree_limit(n: int):
    """Temporarily change the maximum defining-polynomial degree."""
    if n < 1:
        raise ValueError("degree budget must be positive")
    token = degree_budget.set(n)
    try:
        yield
    finally:
        degree_budget.reset(token)


def _check_degree(d: int, what: str = "algebraic number"):
    limit = degree_budget.get()
    if d > limit:
        raise DegreeBudgetExceeded(f"{what} needs degree {d} > budget {limit}")


# ---------------------------------------------------------------------------
# Sturm sequences and isolation


def sturm_chain(p: UniPoly) -> List[UniPoly]:
    """Classical Sturm sequence ``p, p', -rem(p, p'), ...``."""
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _scaled_chain(p: UniPoly) -> List[List[int]]:
    """Sturm chain with each member divided by a positive constant, as
    integer coefficient lists.  Sign variations are unchanged."""
    chain = [p.primitive(), p.derivative().primitive()]
    chain = [c for c in chain if not c.is_zero()]
    while len(chain) >= 2:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        r = -r
        # primitive() may flip the sign; undo that so only positive scaling happens
        pr = r.primitive()
        if (pr.lc > 0) != (r.lc > 0):
            pr = -pr
        chain.append(pr)
    return [[a.numerator for a in c.c] for c in chain]


def _eval_int(c: List[int], x: Fraction) -> Fraction:
    n, d = x.numerator, x.denominator
    acc = 0
    k = len(c) - 1
    # homogenised Horner: sum c_i n^i d^(k-i), sign equals sign of p(x)
    dp = 1
    for a in reversed(c):
        acc = acc * n + a * dp
        dp *= d
    return acc


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(signs: Sequence[int]) -> int:
    last = 0
    count = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _var_at(chain: List[List[int]], x) -> int:
    if x == "inf":
        return _variations([_sign(c[-1]) for c in chain])
    if x == "-inf":
        return _variations([_sign(c[-1]) * (-1 if (len(c) - 1) % 2 else 1) for c in chain])
    return _variations([_sign(_eval_int(c, x)) for c in chain])


def count_roots(p: UniPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``; ``None``
    bounds mean infinity."""
    if p.degree < 1:
        return 0
    chain = _scaled_chain(p)
    a = "-inf" if lo is None else Fraction(lo)
    b = "inf" if hi is None else Fraction(hi)
    return _var_at(chain, a) - _var_at(chain, b)


def root_bound(p: UniPoly) -> Fraction:
    """A power of two strictly exceeding the modulus of every root."""
    lc = abs(p.lc)
    m = max((abs(a) for a in p.c[:-1]), default=Fraction(0)) / lc
    b = Fraction(1)
    while b <= 1 + m:
        b *= 2
    return b


@dataclass(frozen=True)
class IsolatedRoot:
    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi


def _isolate_squarefree(p: UniPoly) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the real roots of a square-free
    ``p``.  Open intervals have nonzero endpoint values; rational roots met
    on a bisection point come back as degenerate intervals."""
    if p.degree < 1:
        return []
    chain = _scaled_chain(p)
    ip = [a.numerator for a in p.primitive().c]
    B = root_bound(p)
    out: List[Tuple[Fraction, Fraction]] = []
    stack = [(-B, B, _var_at(chain, -B), _var_at(chain, B))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _eval_int(ip, mid) == 0:
            out.append((mid, mid))
            # step away from the rational root until it is alone
            eps = (hi - lo) / 4
            while True:
                a, b = mid - eps, mid + eps
                if _eval_int(ip, a) and _eval_int(ip, b):
                    va, vb = _var_at(chain, a), _var_at(chain, b)
                    if va - vb == 1:
                        break
                eps /= 2
            stack.append((b, hi, vb, vhi))
            stack.append((lo, a, vlo, va))
            continue
        vm = _var_at(chain, mid)
        stack.append((mid, hi, vm, vhi))
        stack.append((lo, mid, vlo, vm))
    out.sort()
    return out


def squarefree_factorization(p: UniPoly) -> List[Tuple[UniPoly, int]]:
    """Yun's algorithm: monic pairwise-coprime square-free factors with
    multiplicities; the product of ``f**m`` equals ``p`` up to a constant."""
    if p.degree < 1:
        return []
    out = []
    b = p.gcd(p.derivative())
    c = p.exquo(b)
    d = p.derivative().exquo(b) - c.derivative()
    i = 1
    while c.degree > 0:
        a = c.gcd(d)
        if a.degree > 0:
            out.append((a.monic(), i))
        c = c.exquo(a)
        d = d.exquo(a) - c.derivative()
        i += 1
    return out


def isolate_roots(p: UniPoly) -> List[IsolatedRoot]:
    """Ascending disjoint isolating intervals for the distinct real roots of
    ``p``, with multiplicities."""
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    factors = squarefree_factorization(p)
    out = []
    for f, m in factors:
        for lo, hi in _isolate_squarefree(f):
            out.append([lo, hi, m, f])
    out.sort(key=lambda t: (t[0], t[1]))
    # factors are coprime, so overlapping intervals can be separated by refining
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            a, b = out[i], out[i + 1]
            if a[1] > b[0]:
                for t in (a, b):
                    if t[0] != t[1]:
                        t[0], t[1] = _bisect_once(t[3], t[0], t[1])
                changed = True
        out.sort(key=lambda t: (t[0], t[1]))
    return [IsolatedRoot(lo, hi, m) for lo, hi, m, _ in out]


def _bisect_once(p: UniPoly, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    mid = (lo + hi) / 2
    vm = p(mid)
    if vm == 0:
        return mid, mid
    if _sign(p(lo)) != _sign(vm):
        return lo, mid
    return mid, hi


def real_roots(p: UniPoly) -> List[Tuple[object, int]]:
    """Distinct real roots as exact numbers (``Fraction`` when rational,
    otherwise :class:`RealAlgebraic`), ascending, with multiplicities."""
    out = []
    for f, m in squarefree_factorization(p):
        for lo, hi in _isolate_squarefree(f):
            if lo == hi:
                out.append((lo, m))
            else:
                out.append((RealAlgebraic.from_root(f, lo, hi), m))
    out.sort(key=lambda t: _approx_key(t[0]))
    return out


def _approx_key(v):
    if isinstance(v, Fraction):
        return v
    return v.midpoint(Fraction(1, 2**60))


# ---------------------------------------------------------------------------
# Interval helpers


def _imul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def interval_eval(p: UniPoly, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner."""
    if p.is_zero():
        return Fraction(0), Fraction(0)
    if lo == hi:
        v = p(lo)
        return v, v
    # evaluate around the midpoint: p(m + s) with s in [-r, r] shrinks the overestimate
    m = (lo + hi) / 2
    r = (hi - lo) / 2
    q = p.compose(UniPoly((m, 1))) if p.degree > 1 else p.shift_scale(m, 1)
    acc = (q.c[-1], q.c[-1])
    for a in reversed(q.c[:-1]):
        acc = _imul(acc, (-r, r))
        acc = (acc[0] + a, acc[1] + a)
    return acc


# ---------------------------------------------------------------------------
# Generators


_uid = itertools.count()


class Root:
    """A real root of a square-free rational polynomial.

    ``poly`` may be replaced internally by a factor that still has the root
    (learned from gcds during zero tests); the isolating interval only ever
    shrinks.  Neither change alters the number represented.
    """

    __slots__ = ("poly", "lo", "hi", "uid", "_ip")

    def __init__(self, poly: UniPoly, lo, hi):
        poly = poly.monic()
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty isolating interval")
        self.uid = next(_uid)
        self.poly = poly
        self.lo = lo
        self.hi = hi
        self._ip = None
        if lo == hi:
            if poly(lo) != 0:
                raise ValueError("point interval is not a root")
            self._set_rational(lo)
        elif poly(lo) == 0 or poly(hi) == 0:
            raise ValueError("isolating interval endpoint is a root")
        elif _sign(poly(lo)) == _sign(poly(hi)):
            raise ValueError("interval does not bracket a root")
        else:
            self._detect_rational()

    def _detect_rational(self):
        """Rational roots have denominators dividing the leading integer
        coefficient, so once the interval is narrower than ``1/lc**2`` the
        simplest rational inside is the only candidate."""
        if self.poly.degree == 1:
            self._set_rational(-self.poly.c[0] / self.poly.c[1])
            return
        lc = abs(self._intpoly()[-1])
        if lc.bit_length() <= 48:
            self.refine_to(Fraction(1, 2 * lc * lc))
            if self.is_rational:
                return
            c = _simplest_between(self.lo, self.hi)
            if self.poly(c) == 0:
                self._set_rational(c)
            return
        # huge leading coefficients: only small denominators are looked for;
        # a missed rational root is still handled exactly, just as a root
        self.refine_to(Fraction(1, 2**120))
        if self.is_rational:
            return
        mid = (self.lo + self.hi) / 2
        for c in (_simplest_between(self.lo, self.hi), mid.limit_denominator(2**48)):
            if self.lo <= c <= self.hi and self.poly(c) == 0:
                self._set_rational(c)
                return

    def _set_rational(self, v: Fraction):
        self.poly = UniPoly((-v, 1))
        self.lo = self.hi = v
        self._ip = None

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def is_rational(self) -> bool:
        return self.poly.degree == 1

    @property
    def rational_value(self) -> Fraction:
        return -self.poly.c[0] / self.poly.c[1]

    def _intpoly(self):
        if self._ip is None:
            self._ip = [a.numerator for a in self.poly.primitive().c]
        return self._ip

    def bisect(self):
        if self.is_rational:
            v = self.rational_value
            self.lo = self.hi = v
            return
        mid = (self.lo + self.hi) / 2
        ip = self._intpoly()
        vm = _eval_int(ip, mid)
        if vm == 0:
            self._set_rational(mid)
            return
        if _sign(_eval_int(ip, self.lo)) != _sign(vm):
            self.hi = mid
        else:
            self.lo = mid

    def refine_to(self, width: Fraction):
        budget = refinement_budget.get()
        steps = 0
        while self.hi - self.lo > width:
            self.bisect()
            steps += 1
            if steps > budget:
                raise RefinementBudgetExceeded("refinement budget exhausted")

    def is_root_of(self, h: UniPoly) -> bool:
        """Exact test: does ``h`` (a divisor of ``poly``) vanish here?"""
        if h.degree < 1:
            return False
        if self.is_rational:
            return h(self.rational_value) == 0
        return _sign(h(self.lo)) != _sign(h(self.hi))

    def shrink(self, h: UniPoly):
        """Replace ``poly`` by the divisor ``h``, which must vanish here."""
        h = h.monic()
        if h.degree == self.poly.degree:
            return
        self.poly = h
        self._ip = None
        if h.degree == 1:
            self._set_rational(-h.c[0])

    def split_by(self, g: UniPoly) -> bool:
        """Given a rational ``g``, shrink ``poly`` using ``gcd(g, poly)`` and
        report whether ``g`` vanishes at the root."""
        if g.is_zero():
            return True
        h = g.gcd(self.poly)
        if h.degree < 1:
            return False
        if self.is_root_of(h):
            self.shrink(h)
            return True
        self.shrink(self.poly.exquo(h))
        return False

    def approx(self, digits: int = 20) -> float:
        self.refine_to(Fraction(1, 10**digits))
        return float((self.lo + self.hi) / 2)

    def __repr__(self) -> str:
        return f"Root({self.poly}, [{self.lo}, {self.hi}])"


def root_of(poly: UniPoly, lo, hi) -> Root:
    return Root(poly.squarefree_part(), lo, hi)


# ---------------------------------------------------------------------------
# Common fields


_field_cache: dict = {}


def _same_number(g1: Root, g2: Root) -> bool:
    h = g1.poly.gcd(g2.poly)
    if h.degree < 1 or not g1.is_root_of(h) or not g2.is_root_of(h):
        return False
    g1.shrink(h)
    g2.shrink(h)
    if g1.is_rational or g2.is_rational:
        return g1.is_rational and g2.is_rational and g1.rational_value == g2.rational_value
    lo, hi = max(g1.lo, g2.lo), min(g1.hi, g2.hi)
    if lo >= hi:
        return False
    return count_roots(h, lo, hi) == 1


def _compose_linear_bivariate(d2: UniPoly, k: int) -> List[UniPoly]:
    """Coefficients in ``s`` (constant first, entries polynomials in ``t``)
    of ``k**deg * d2((t - s)/k)``, which vanishes at ``s = theta1`` when
    ``t = theta1 + k*theta2``."""
    n = d2.degree
    # (t - s)^j * k^(n-j), expanded in s
    out = [UniPoly() for _ in range(n + 1)]
    from math import comb

    for j, a in enumerate(d2.c):
        if a == 0:
            continue
        scale = a * Fraction(k) ** (n - j)
        for i in range(j + 1):
            # term C(j,i) t^(j-i) (-s)^i
            c = scale * comb(j, i) * (-1 if i % 2 else 1)
            out[i] = out[i] + UniPoly([0] * (j - i) + [c])
    return out


def common_field(g1: Root, g2: Root):
    """Return ``(gen, a1, a2)`` where ``gen`` generates a field containing
    both roots and ``a1, a2`` are rational polynomials with
    ``a1(gen) = g1``, ``a2(gen) = g2``."""
    key = (g1.uid, g2.uid)
    hit = _field_cache.get(key)
    if hit is not None:
        return hit
    X = UniPoly((0, 1))
    if g1 is g2:
        res = (g1, X, X)
    elif g1.is_rational:
        res = (g2, UniPoly((g1.rational_value,)), X)
    elif g2.is_rational:
        res = (g1, X, UniPoly((g2.rational_value,)))
    elif _same_number(g1, g2):
        res = (g1, X, X)
    else:
        res = _primitive_element(g1, g2)
    _field_cache[key] = res
    _field_cache[(g2.uid, g1.uid)] = (res[0], res[2], res[1])
    return res


def _primitive_element(g1: Root, g2: Root):
    from .elimination import resultant_coeffs

    d1, d2 = g1.poly, g2.poly
    _check_degree(d1.degree * d2.degree, "primitive element")
    for k in (1, -1, 2, -2, 3, -3, 5, -5, 7, -7):
        s_coeffs = _compose_linear_bivariate(d2, k)
        d1c = [UniPoly((a,)) for a in d1.c]
        R = resultant_coeffs(d1c, s_coeffs)
        if R.is_zero() or R.gcd(R.derivative()).degree > 0:
            continue
        R = R.monic()
        gen = _isolate_combination(R, g1, g2, k)
        # theta1 is the common root in s of d1(s) and d2((gamma - s)/k)
        one = RealAlgebraic(gen, UniPoly((0, 1)))
        p1 = UniPoly([RealAlgebraic._lift(gen, UniPoly((a,))) for a in d1.c])
        p2 = UniPoly([_eval_unipoly_at(c, one) for c in s_coeffs])
        g = p1.gcd(p2)
        if g.degree != 1:
            continue
        theta1 = -g.c[0] / g.c[1]
        a1 = _rep_in(gen, theta1)
        a2 = (UniPoly((0, 1)) - a1).scale(Fraction(1, k)) % gen.poly
        return gen, a1, a2
    raise DegreeBudgetExceeded("no separating primitive element found")


def _eval_unipoly_at(p: UniPoly, a: "RealAlgebraic"):
    acc = Fraction(0)
    for c in reversed(p.c):
        acc = acc * a + c
    return acc


def _rep_in(gen: Root, v) -> UniPoly:
    if isinstance(v, RealAlgebraic):
        if v.gen is not gen:
            raise AssertionError("value escaped its field")
        return v.rep
    return UniPoly((v,))


def _isolate_combination(R: UniPoly, g1: Root, g2: Root, k: int) -> Root:
    budget = refinement_budget.get()
    for _ in range(budget):
        lo1, hi1 = g1.lo, g1.hi
        lo2, hi2 = (g2.lo * k, g2.hi * k) if k > 0 else (g2.hi * k, g2.lo * k)
        lo, hi = lo1 + lo2, hi1 + hi2
        if lo == hi:
            return Root(R, lo, hi)
        if R(lo) != 0 and R(hi) != 0 and count_roots(R, lo, hi) == 1:
            return Root(R, lo, hi)
        g1.bisect()
        g2.bisect()
    raise RefinementBudgetExceeded("could not isolate primitive element")


# ---------------------------------------------------------------------------
# Field elements


def _promote(v):
    if isinstance(v, int):
        return Fraction(v)
    return v


class RealAlgebraic:
    """An exact real number ``rep(gen)`` in the field generated by ``gen``.

    Arithmetic results that turn out rational are returned as ``Fraction``.
    """

    __slots__ = ("gen", "rep", "_defining")

    def __init__(self, gen: Root, rep: UniPoly):
        self.gen = gen
        self.rep = rep % gen.poly if rep.degree >= gen.poly.degree else rep
        self._defining = None

    @classmethod
    def from_root(cls, poly: UniPoly, lo, hi):
        """The unique root of ``poly`` in ``[lo, hi]``; rational roots come
        back as ``Fraction``."""
        gen = root_of(poly, lo, hi)
        if gen.is_rational:
            return gen.rational_value
        _check_degree(gen.poly.degree, "defining polynomial")
        return cls(gen, UniPoly((0, 1)))

    @staticmethod
    def _lift(gen: Root, rep: UniPoly):
        rep = rep % gen.poly if rep.degree >= gen.poly.degree else rep
        if rep.degree < 1:
            return rep[0]
        return RealAlgebraic(gen, rep)

    def _reduced(self) -> UniPoly:
        if self.rep.degree >= self.gen.poly.degree:
            self.rep = self.rep % self.gen.poly
        return self.rep

    def _align(self, other) -> Tuple[Root, UniPoly, UniPoly]:
        other = _promote(other)
        if isinstance(other, Fraction):
            return self.gen, self._reduced(), UniPoly((other,))
        if not isinstance(other, RealAlgebraic):
            raise TypeError(f"cannot combine RealAlgebraic with {type(other).__name__}")
        if other.gen is self.gen:
            return self.gen, self._reduced(), other._reduced()
        gen, a1, a2 = common_field(self.gen, other.gen)
        r1 = self._reduced().compose(a1) % gen.poly
        r2 = other._reduced().compose(a2) % gen.poly
        return gen, r1, r2

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        gen, a, b = self._align(other)
        return RealAlgebraic._lift(gen, a + b)

    __radd__ = __add__

    def __neg__(self):
        return RealAlgebraic(self.gen, -self._reduced())

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        gen, a, b = self._align(other)
        return RealAlgebraic._lift(gen, a - b)

    def __rsub__(self, other):
        if not isinstance(other, (Fraction, int)):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        other = _promote(other)
        if isinstance(other, Fraction):
            if other == 0:
                return Fraction(0)
            return RealAlgebraic(self.gen, self._reduced().scale(other))
        gen, a, b = self._align(other)
        return RealAlgebraic._lift(gen, (a * b) % gen.poly)

    __rmul__ = __mul__

    def inverse(self):
        rep = self._reduced()
        gen = self.gen
        if rep.degree < 1:
            return 1 / rep[0]
        g = rep.gcd(gen.poly)
        if g.degree > 0:
            if gen.is_root_of(g):
                gen.shrink(g)
                raise ZeroDivisionError("RealAlgebraic division by zero")
            gen.shrink(gen.poly.exquo(g))
            rep = self._reduced()
            if rep.degree < 1:
                return 1 / rep[0]
        inv = _inverse_mod(rep, gen.poly)
        return RealAlgebraic._lift(gen, inv)

    def __truediv__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        other = _promote(other)
        if isinstance(other, Fraction):
            return self * (1 / other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (Fraction, int)):
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- sign and order ----------------------------------------------------

    def enclosure(self) -> Tuple[Fraction, Fraction]:
        return interval_eval(self._reduced(), self.gen.lo, self.gen.hi)

    def sign(self) -> int:
        gen = self.gen
        rep = self._reduced()
        if rep.degree < 1:
            return _sign(rep[0])
        lo, hi = self.enclosure()
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if gen.split_by(rep):
            return 0
        rep = self._reduced()
        if rep.degree < 1:
            return _sign(rep[0])
        budget = refinement_budget.get()
        for _ in range(budget):
            gen.bisect()
            rep = self._reduced()
            if rep.degree < 1:
                return _sign(rep[0])
            lo, hi = interval_eval(rep, gen.lo, gen.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
        raise RefinementBudgetExceeded("sign undecided within refinement budget")

    def __eq__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        if self._separate(other, 24) != 0:
            return False
        return _equal_by_defining(self, other)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def _separate(self, other, steps: int) -> int:
        """Order decided from enclosures alone (``0`` if still overlapping)."""
        other_alg = other if isinstance(other, RealAlgebraic) else None
        for _ in range(steps):
            lo1, hi1 = self.enclosure()
            lo2, hi2 = other_alg.enclosure() if other_alg else (Fraction(other), Fraction(other))
            if hi1 < lo2:
                return -1
            if lo1 > hi2:
                return 1
            if other_alg is not None and not other_alg.gen.is_rational and hi2 - lo2 > hi1 - lo1:
                other_alg.gen.bisect()
            elif not self.gen.is_rational:
                self.gen.bisect()
            else:
                break
        return 0

    def _cmp(self, other) -> int:
        o = self._separate(other, 48)
        if o:
            return o
        if _equal_by_defining(self, other):
            return 0
        o = self._separate(other, refinement_budget.get())
        if o:
            return o
        d = self - other
        if isinstance(d, Fraction):
            return _sign(d)
        return d.sign()

    def __lt__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other):
        if not isinstance(other, (RealAlgebraic, Fraction, int)):
            return NotImplemented
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- approximation -----------------------------------------------------

    def refine(self, width) -> "RealAlgebraic":
        """Shrink the enclosure of this value to at most ``width``."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        budget = refinement_budget.get()
        for _ in range(budget):
            lo, hi = self.enclosure()
            if hi - lo <= width:
                return self
            self.gen.bisect()
        raise RefinementBudgetExceeded("refinement budget exhausted")

    def midpoint(self, width=Fraction(1, 2**64)) -> Fraction:
        self.refine(width)
        lo, hi = self.enclosure()
        return (lo + hi) / 2

    def __float__(self) -> float:
        lo, hi = self.enclosure()
        mag = max(abs(lo), abs(hi), Fraction(1, 2**200))
        return float(self.midpoint(mag / 2**60 if mag > 0 else Fraction(1, 2**200)))

    def approx(self, digits: int = 20) -> str:
        """Decimal string with ``digits`` significant places (advisory)."""
        from decimal import Decimal, localcontext

        m = self.midpoint(Fraction(1, 10 ** (digits + 5)))
        with localcontext() as ctx:
            ctx.prec = digits
            return str(Decimal(m.numerator) / Decimal(m.denominator))

    # -- defining polynomial ----------------------------------------------

    @property
    def defining(self) -> UniPoly:
        """A square-free rational polynomial vanishing at this value."""
        self._isolate_value()
        return self._defining[0]

    @property
    def interval(self) -> Tuple[Fraction, Fraction]:
        """Interval isolating this value among the roots of ``defining``."""
        self._isolate_value()
        return self._defining[1], self._defining[2]

    def as_rational(self) -> Optional[Fraction]:
        """The value as a ``Fraction`` when it happens to be rational."""
        self._isolate_value()
        return self._defining[3]

    def simplify(self):
        r = self.as_rational()
        return self if r is None else r

    def _isolate_value(self):
        if self._defining is not None:
            return
        from .elimination import charpoly

        rep = self._reduced()
        if rep.degree < 1 or self.gen.is_rational:
            v = rep(self.gen.lo)
            self._defining = (UniPoly((-v, 1)).primitive(), v, v, v)
            return
        p, rats = _strip_rational_roots(charpoly(rep, self.gen.poly).squarefree_part())
        for r in rats:
            lo, hi = self.enclosure()
            if lo <= r <= hi and (self - r).sign() == 0:
                self._defining = (UniPoly((-r, 1)).primitive(), r, r, r)
                return
        budget = refinement_budget.get()
        for _ in range(budget):
            lo, hi = self.enclosure()
            if lo == hi:
                self._defining = (UniPoly((-lo, 1)).primitive(), lo, lo, lo)
                return
            if lo < hi and p(lo) != 0 and p(hi) != 0 and count_roots(p, lo, hi) == 1:
                break
            self.gen.bisect()
        else:
            raise RefinementBudgetExceeded("could not isolate value")
        lo, hi = _tidy_interval(p, lo, hi)
        rat = _simplest_between(lo, hi)
        exact = rat if p(rat) == 0 else None
        self._defining = (p.primitive(), lo, hi, exact)
    def __str__(self) -> str:
        r = self.as_rational()
        if r is not None:
            return _fmt(r)
        p = self.defining
        lo, hi = self.interval
        return f"root({p.to_str('t')}, [{_fmt(lo)}, {_fmt(hi)}])"

    def __repr__(self) -> str:
        return f"RealAlgebraic({self}, ~{float(self):.12g})"


def _tidy_interval(p: UniPoly, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Widen an isolating interval to dyadic endpoints with small
    denominators while it still isolates the same root."""
    k = 0
    while True:
        s = 2**k
        a = Fraction((lo * s).__floor__(), s)
        b = Fraction(-((-hi * s).__floor__()), s)
        if a < b and p(a) != 0 and p(b) != 0 and count_roots(p, a, b) == 1:
            return a, b
        if a >= lo and b <= hi:
            return lo, hi
        k += 1


def _equal_by_defining(a: "RealAlgebraic", b) -> bool:
    """Exact equality from defining polynomials and isolating intervals,
    avoiding a common field."""
    if not isinstance(b, RealAlgebraic):
        r = a.as_rational()
        if r is not None:
            return r == b
        b = Fraction(b)
        lo, hi = a.interval
        return lo < b < hi and a.defining(b) == 0
    pa, pb = a.defining, b.defining
    g = pa.gcd(pb)
    if g.degree < 1:
        return False
    la, ha = a.interval
    lb, hb = b.interval
    if la == ha or lb == hb:
        va = la if la == ha else None
        vb = lb if lb == hb else None
        if va is not None and vb is not None:
            return va == vb
        if va is not None:
            return _equal_by_defining(b, va)
        return _equal_by_defining(a, vb)
    if max(la, lb) > min(ha, hb):
        return False
    if count_roots(g, la, ha) != 1 or count_roots(g, lb, hb) != 1:
        return False
    return count_roots(g, min(la, lb), max(ha, hb)) == 1


def _small_divisors(n: int, limit: int = 10**6) -> Optional[List[int]]:
    n = abs(n)
    if n == 0 or n > limit:
        return None
    out = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(out + [n // d for d in out]))


def _strip_rational_roots(p: UniPoly) -> Tuple[UniPoly, List[Fraction]]:
    """Divide out linear factors found by the rational root test, when the
    end coefficients are small enough to enumerate candidates."""
    if p.degree < 2:
        return p, []
    c = p.int_coeffs()
    lead = _small_divisors(c[-1])
    k = 0
    while c[k] == 0:
        k += 1
    const = _small_divisors(c[k])
    if lead is None or const is None or len(lead) * len(const) > 4000:
        return p, []
    out, found = p, []
    cands = [Fraction(0)] if k else []
    cands += [s * Fraction(a, b) for a in const for b in lead for s in (1, -1)]
    for r in cands:
        if out.degree > 1 and r not in found and out(r) == 0:
            out = out.exquo(UniPoly((-r, 1)))
            found.append(r)
        elif out.degree == 1 and out(r) == 0 and r not in found:
            found.append(r)
    return out, found


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in ``[lo, hi]``."""
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_between(-hi, -lo)
    # continued-fraction expansion shared by both endpoints
    terms = []
    while True:
        fl = lo.__floor__()
        if fl == lo:
            terms.append(fl)
            break
        if fl + 1 <= hi:
            terms.append(fl + 1)
            break
        terms.append(fl)
        lo, hi = 1 / (hi - fl), 1 / (lo - fl)
    v = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        v = a + 1 / v
    return v


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _inverse_mod(a: UniPoly, m: UniPoly) -> UniPoly:
    """``a**-1 mod m`` for coprime rational polynomials."""
    r0, r1 = m, a % m
    s0, s1 = UniPoly(), UniPoly((1,))
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ZeroDivisionError("not invertible modulo the defining polynomial")
    return (s0.scale(1 / r0.c[0])) % m


# ---------------------------------------------------------------------------
# Functional API


def is_algebraic(v) -> bool:
    return isinstance(v, RealAlgebraic)


def sign(v) -> int:
    v = _promote(v)
    if isinstance(v, Fraction):
        return _sign(v)
    return v.sign()


def sign_at(p: UniPoly, a) -> int:
    """Exact sign of the rational polynomial ``p`` at ``a``."""
    a = _promote(a)
    if isinstance(a, Fraction):
        return _sign(p(a))
    return sign(_eval_unipoly_at(p, a))


def refine(a, width):
    a = _promote(a)
    if isinstance(a, Fraction):
        return a
    return a.refine(width)


def compare(a, b) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to, or greater than ``b``."""
    return sign(_promote(a) - _promote(b))


def alg_add(a, b):
    return _promote(a) + _promote(b)


def alg_mul(a, b):
    return _promote(a) * _promote(b)


def alg_neg(a):
    return -_promote(a)


def alg_inv(a):
    a = _promote(a)
    if sign(a) == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / a


def alg_sqrt_nonneg(a):
    """Non-negative square root, as a new generator when irrational."""
    a = _promote(a)
    s = sign(a)
    if s < 0:
        raise ValueError("square root of a negative number")
    if s == 0:
        return Fraction(0)
    if isinstance(a, Fraction):
        r = _rational_sqrt(a)
        if r is not None:
            return r
        p = UniPoly((-a, 0, 1))
    else:
        p = a.defining.compose(UniPoly((0, 0, 1)))
    _check_degree(p.squarefree_part().degree, "square root")
    roots = [t for t in real_roots(p) if _approx_key(t[0]) > 0]
    for v, _ in roots:
        if isinstance(v, Fraction):
            if v * v == a:
                return v
            continue
        if v * v == a:
            return v
    raise AssertionError("square root not located")


def _rational_sqrt(a: Fraction) -> Optional[Fraction]:
    from math import isqrt

    n, d = a.numerator, a.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def to_float(v) -> float:
    return float(v)


def approx_str(v, digits: int = 12) -> str:
    v = _promote(v)
    if isinstance(v, Fraction):
        return _fmt(v)
    return v.approx(digits)


# ---------------------------------------------------------------------------
# Polynomials with algebraic coefficients


def common_gen(values: Sequence) -> Tuple[Optional[Root], List[UniPoly]]:
    """Express every value as a rational polynomial in one generator.

    Returns ``(None, constants)`` when all values are rational.
    """
    gen = None
    for v in values:
        v = _promote(v)
        if isinstance(v, RealAlgebraic):
            gen = v.gen if gen is None else common_field(gen, v.gen)[0]
    reps = []
    for v in values:
        v = _promote(v)
        if isinstance(v, Fraction):
            reps.append(UniPoly((v,)))
        elif v.gen is gen:
            reps.append(v._reduced())
        else:
            _, a_gen, a_v = common_field(gen, v.gen)
            reps.append(v._reduced().compose(a_v) % gen.poly)
    return gen, reps


def norm_poly(u: UniPoly) -> UniPoly:
    """A nonzero rational polynomial whose roots include those of ``u``
    (whose coefficients may be algebraic)."""
    if u.is_rational():
        return u
    from .elimination import resultant_coeffs

    gen, reps = common_gen(u.c)
    k = max(r.degree for r in reps) + 1
    # u(y) = sum_i reps_i(t) y^i; regroup by powers of t
    by_t = []
    for j in range(k):
        by_t.append(UniPoly([r[j] for r in reps]))
    d = [UniPoly((c,)) for c in gen.poly.c]
    _check_degree(gen.poly.degree * u.degree, "norm polynomial")
    N = resultant_coeffs(d, by_t)
    if N.is_zero():
        raise ArithmeticError("norm vanished identically")
    return N


def poly_real_roots(u: UniPoly) -> List[object]:
    """Distinct real roots of a polynomial with exact real coefficients."""
    if u.is_rational():
        return [r for r, _ in real_roots(u)]
    N = norm_poly(u)
    out = []
    for r, _ in real_roots(N):
        if _eval_unipoly_at(u, r) == 0:
            out.append(r)
    return out


def evaluate_unipoly(p: UniPoly, a):
    return _eval_unipoly_at(p, _promote(a))
