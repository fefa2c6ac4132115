"""Real projective zeros of PSD ternary quartics.

The main route eliminates one variable with ``res(g, dg/dv, v)`` on the
square-free part ``g``: for a PSD form every real zero is a critical
point, so its projection is a root of that binary resultant.  Each root is
lifted back by a gcd over the field it generates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .elimination import resultant, squarefree_decompose
from .errors import InternalError, NotPSDError
from .forms import XYZ, Matrix3, Poly, UniPoly, x_decomposition, LEMMA2
from .gram import LDLT, NotPSD, gram_matrix, ldlt_psd
from .realalg import (
    RealAlgebraic,
    alg_sqrt_nonneg,
    poly_real_roots,
    real_roots,
    sign,
    norm_poly,
)

CHART_Z = "z=1"
CHART_Y = "z=0,y=1"
CHART_X = "point(1,0,0)"


def _normalise_point(pt) -> Tuple[tuple, str]:
    x, y, z = pt
    if sign(z) != 0:
        return (_simp(x / z), _simp(y / z), Fraction(1)), CHART_Z
    if sign(y) != 0:
        return (_simp(x / y), Fraction(1), Fraction(0)), CHART_Y
    if sign(x) != 0:
        return (Fraction(1), Fraction(0), Fraction(0)), CHART_X
    raise ValueError("the origin is not a projective point")


def _simp(v):
    if isinstance(v, RealAlgebraic) and v.gen.degree <= 8:
        return v.simplify()
    return v


@dataclass(eq=False)
class ProjectiveZero:
    """A point of the real projective plane, stored in its chart."""

    coords: tuple
    chart: str

    @classmethod
    def of(cls, pt) -> "ProjectiveZero":
        pt = tuple(Fraction(v) if isinstance(v, int) else v for v in pt)
        coords, chart = _normalise_point(pt)
        return cls(coords, chart)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveZero):
            return NotImplemented
        if self.chart != other.chart:
            return False
        return all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    def approx(self) -> Tuple[float, float, float]:
        return tuple(float(c) for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def proportional(p: Sequence, q: Sequence) -> bool:
    """Exact projective equality by the cross product."""
    a = p[1] * q[2] - p[2] * q[1]
    b = p[2] * q[0] - p[0] * q[2]
    c = p[0] * q[1] - p[1] * q[0]
    return sign(a) == 0 and sign(b) == 0 and sign(c) == 0


EMPTY = "empty"
FINITE = "finite"
INFINITE = "infinite"


@dataclass
class ZeroSet:
    """``kind`` is ``empty``, ``finite`` or ``infinite``.

    For infinite sets, ``lines`` holds real linear forms whose squares
    divide the input, ``square_factors`` holds quadratic forms ``q`` with
    ``f = c*q**2``, and ``factorization`` is the square-free decomposition.
    """

    kind: str
    points: List[ProjectiveZero] = field(default_factory=list)
    lines: List[Poly] = field(default_factory=list)
    square_factors: List[Poly] = field(default_factory=list)
    factorization: list = field(default_factory=list)

    def __len__(self) -> int:
        if self.kind == INFINITE:
            raise TypeError("infinite zero set has no length")
        return len(self.points)

    def __bool__(self) -> bool:
        return self.kind != EMPTY

    @property
    def count(self):
        return float("inf") if self.kind == INFINITE else len(self.points)


def _dedup(points: List[ProjectiveZero]) -> List[ProjectiveZero]:
    out: List[ProjectiveZero] = []
    for p in points:
        if not any(p == q for q in out):
            out.append(p)
    return out


def _classify(points) -> ZeroSet:
    pts = _dedup(points)
    return ZeroSet(FINITE if pts else EMPTY, pts)


# ---------------------------------------------------------------------------
# Binary forms


def _binary_indices(R: Poly, exclude: Optional[int] = None) -> Tuple[int, int]:
    used = sorted({i for e in R.terms for i, k in enumerate(e) if k})
    idx = [i for i in range(R.nvars) if i != exclude]
    if len(idx) > 2:
        idx = [i for i in idx if i in used] if len(used) >= 2 else idx[-2:]
        if len(idx) > 2:
            raise ValueError("binary form expected")
        if len(idx) < 2:
            rest = [i for i in range(R.nvars) if i not in idx and i != exclude]
            idx = sorted(idx + rest[: 2 - len(idx)])
    return idx[0], idx[1]


def binary_projective_roots(R: Poly, exclude: Optional[int] = None) -> List[Tuple[tuple, int]]:
    """Real roots ``(a, b)`` of a binary form, normalised to ``(t, 1)`` or
    ``(1, 0)``, with multiplicities.

    The two variables are the ones in use (or all but ``exclude``).
    """
    if R.is_zero():
        raise ValueError("binary form is identically zero")
    i, j = _binary_indices(R, exclude)
    d = R.degree
    coeffs = [Fraction(0)] * (d + 1)
    for e, c in R.terms.items():
        coeffs[e[i]] = c
    u = UniPoly(coeffs)
    out = []
    if u.is_rational():
        for r, m in real_roots(u):
            out.append(((r, Fraction(1)), m))
    else:
        for r in poly_real_roots(u):
            out.append(((r, Fraction(1)), _multiplicity(u, r)))
    if u.degree < d:
        out.append(((Fraction(1), Fraction(0)), d - u.degree))
    return out


def _multiplicity(u: UniPoly, r) -> int:
    m = 0
    from .realalg import evaluate_unipoly

    while not u.is_zero() and evaluate_unipoly(u, r) == 0:
        m += 1
        u = u.derivative()
    return m


def is_strictly_positive_binary(h: Poly) -> bool:
    """True iff the binary form has no real projective zero and is positive
    at one sample point."""
    if h.is_zero() or h.degree % 2:
        return False
    if binary_projective_roots(h):
        return False
    i, j = _binary_indices(h)
    pt = [Fraction(0)] * h.nvars
    pt[i] = Fraction(1)
    return sign(h.evaluate(pt)) > 0


# ---------------------------------------------------------------------------
# Quadratic forms


def classify_quadratic(q: Poly):
    """``("definite", None)``, ``("indefinite", None)``, ``("point", P)`` for
    a rank-2 semidefinite form vanishing only at ``P``, or ``("rank1", None)``.
    The form is normalised so that its Gram matrix has a positive entry."""
    M, _ = gram_matrix(q)
    res = ldlt_psd(M)
    if isinstance(res, NotPSD):
        res2 = ldlt_psd([[-v for v in row] for row in M])
        if isinstance(res2, NotPSD):
            return "indefinite", None
        res = res2
        M = [[-v for v in row] for row in M]
    rank = sum(1 for d in res.D if sign(d) != 0)
    if rank == 3:
        return "definite", None
    if rank == 2:
        return "point", _kernel_vector(M)
    return "rank1", None


def line_pair(q: Poly) -> List[Poly]:
    """The two real lines of a singular indefinite quadratic form, or
    ``[]`` when ``q`` is not such a pair."""
    M, _ = gram_matrix(q)
    if sign(Matrix3(M).det()) != 0 or classify_quadratic(q)[0] != "indefinite":
        return []
    K = _kernel_vector(M)
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    U, V = next((u, v) for i, u in enumerate(units) for v in units[i + 1:]
                if sign(Matrix3([K, u, v]).det()) != 0)
    # q(sU + tV) = a s^2 + b s t + c t^2 vanishes at one point of each line
    a, c = q.evaluate(U), q.evaluate(V)
    b = q.evaluate(tuple(u + v for u, v in zip(U, V))) - a - c
    if sign(a) == 0:
        params = [(Fraction(1), Fraction(0)), (-c, b)]
    else:
        root = alg_sqrt_nonneg(b * b - 4 * a * c)
        params = [((-b + root) / (2 * a), Fraction(1)), ((-b - root) / (2 * a), Fraction(1))]
    out = []
    for s_, t_ in params:
        R = tuple(s_ * u + t_ * v for u, v in zip(U, V))
        n = (K[1] * R[2] - K[2] * R[1], K[2] * R[0] - K[0] * R[2], K[0] * R[1] - K[1] * R[0])
        line = Poly({e: c_ for e, c_ in zip(units, n)}, q.vars)
        out.append(line.scale(1 / line.leading()[1]))
    return out


def _kernel_vector(M) -> tuple:
    rows = [tuple(r) for r in M]
    for a in range(3):
        for b in range(a + 1, 3):
            u, v = rows[a], rows[b]
            c = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
            if any(sign(t) != 0 for t in c):
                return c
    raise InternalError("kernel of a rank-2 matrix not found")


# ---------------------------------------------------------------------------
# Lemma-5 style zero finding


_SHEARS = [
    Matrix3.identity(),
    Matrix3([[1, 1, 0], [0, 1, 0], [0, 1, 1]]),
    Matrix3([[1, 0, 2], [1, 1, 0], [0, 3, 1]]),
    Matrix3([[2, 1, 1], [1, 3, 1], [1, 1, 5]]),
    Matrix3([[1, 2, 3], [0, 1, 5], [2, 0, 1]]),
]


class _NeedsShear(Exception):
    pass


def projective_real_zeros(f: Poly, psd_assumed: bool = True) -> ZeroSet:
    """Real projective zeros of a (PSD) ternary quartic."""
    if f.is_zero():
        raise ValueError("the zero form vanishes everywhere")
    if f.nvars != 3 or not f.is_homogeneous():
        raise ValueError("expected a homogeneous ternary form")
    parts = [(p, m) for p, m in squarefree_decompose(f) if p.degree > 0]
    lines = [p for p, m in parts if m >= 2 and p.degree == 1]
    squares = [p for p, m in parts if m >= 2 and p.degree == 2]
    if lines:
        return ZeroSet(INFINITE, lines=lines, factorization=parts)
    if squares:
        q = squares[0]
        kind, P = classify_quadratic(q)
        if kind == "definite":
            return ZeroSet(EMPTY, factorization=parts)
        if kind == "point":
            return ZeroSet(FINITE, [ProjectiveZero.of(P)], factorization=parts)
        return ZeroSet(INFINITE, lines=line_pair(q), square_factors=[q], factorization=parts)
    g = Poly.const(1, f.vars)
    for p, _ in parts:
        g = g * p
    if g.degree <= 2:
        if g.degree == 2:
            kind, P = classify_quadratic(g)
            if kind == "point":
                return ZeroSet(FINITE, [ProjectiveZero.of(P)])
            if kind == "definite":
                return ZeroSet(EMPTY)
            return ZeroSet(INFINITE, square_factors=[], factorization=parts)
        return ZeroSet(INFINITE, lines=[g], factorization=parts)
    last_error = None
    for A in _SHEARS:
        try:
            gA = g if A == Matrix3.identity() else g.substitute_linear(A)
            res = _lemma5_zeros(gA)
        except _NeedsShear as exc:
            last_error = exc
            continue
        if isinstance(res, ZeroSet):
            if A == Matrix3.identity():
                res.factorization = parts
                return res
            # a line of zeros found in sheared coordinates
            Ainv = A.inverse()
            res.lines = [l.substitute_linear(Ainv) for l in res.lines]
            res.factorization = parts
            return res
        pts = [ProjectiveZero.of(A @ p.coords) for p in res]
        for p in pts:
            if sign(f.evaluate(p.coords)) != 0:
                raise InternalError("reported zero does not vanish")
        return _classify(pts)
    raise InternalError(f"zero finding did not settle after coordinate changes: {last_error}")


def _lemma5_zeros(g: Poly):
    R = None
    v = None
    for v in range(3):
        if g.degree_in(v) <= 0:
            continue
        R = resultant(g, g.derivative(v), v)
        if not R.is_zero():
            break
    if R is None or R.is_zero():
        raise InternalError("all elimination resultants vanish on a square-free quartic")
    others = [i for i in range(3) if i != v]
    gv = g.derivative(v)
    cg = g.as_univariate(v)
    cgv = gv.as_univariate(v)
    points: List[ProjectiveZero] = []
    # the coordinate point of v
    e = [Fraction(0)] * 3
    e[v] = Fraction(1)
    if sign(g.evaluate(e)) == 0:
        points.append(ProjectiveZero.of(e))
    for (a, b), _m in binary_projective_roots(R, exclude=v):
        pt = [Fraction(0)] * 3
        pt[others[0]], pt[others[1]] = a, b
        u = UniPoly([c.evaluate(pt) for c in cg])
        uv = UniPoly([c.evaluate(pt) for c in cgv])
        if u.is_zero():
            line = _line_through(v, others, a, b)
            return ZeroSet(INFINITE, lines=[line])
        h = u.gcd(uv) if not uv.is_zero() else u.monic()
        if h.degree < 1:
            continue
        if h.degree == 1:
            roots = [-h.c[0] / h.c[1]]
        elif h.is_rational():
            roots = [r for r, _ in real_roots(h)]
        else:
            raise _NeedsShear(f"fibre polynomial of degree {h.degree} over an extension")
        for r in roots:
            q = list(pt)
            q[v] = r
            if sign(g.evaluate(q)) == 0:
                points.append(ProjectiveZero.of(q))
    return _dedup(points)


def _line_through(v: int, others, a, b) -> Poly:
    gens = Poly.gens(XYZ)
    return gens[others[0]].scale(b) - gens[others[1]].scale(a)


# ---------------------------------------------------------------------------
# Classification around a known zero


def completion_matrix(P: Sequence) -> Matrix3:
    """An invertible matrix whose first column is ``P``; the remaining
    columns are unit vectors."""
    P = [Fraction(v) if isinstance(v, int) else v for v in P]
    k = max(range(3), key=lambda i: (sign(P[i]) != 0, -i))
    cols = [P]
    for j in range(3):
        if j != k:
            cols.append([Fraction(1) if i == j else Fraction(0) for i in range(3)])
    return Matrix3.from_columns(cols)


@dataclass
class KnownZeroAnalysis:
    """Result of analysing ``F = f o A`` where ``A`` sends ``(1,0,0)`` to a
    known zero: ``F = x^2 p + 2 x q + r``."""

    psd: bool
    zeros: ZeroSet
    A: Matrix3
    p: Poly
    q: Poly
    r: Poly
    disc: Poly
    witness: Optional[tuple] = None


def analyse_with_known_zero(f: Poly, P: Sequence) -> KnownZeroAnalysis:
    """Decide PSD-ness and the zero set of ``f`` exactly, given one real
    zero ``P``."""
    A = completion_matrix(P)
    F = f.substitute_linear(A)
    if sign(F.evaluate((1, 0, 0))) != 0:
        raise ValueError("the given point is not a zero")
    parts = F.as_univariate("x")
    _, y, z = Poly.gens(XYZ)
    if len(parts) > 3 and any(not c.is_zero() for c in parts[3:]):
        # odd growth along the x direction: pick a point where F < 0
        w = _negative_near_axis(F, parts)
        return KnownZeroAnalysis(False, ZeroSet(EMPTY), A, None, None, None, None, A @ w)
    p, q, r = x_decomposition(F, LEMMA2)
    D = p * r - q * q
    pts = [ProjectiveZero.of((1, 0, 0))]
    # p must be a PSD binary quadratic
    wit = _binary_negative(p)
    if wit is not None:
        t = _x_for_negative_p(F, wit)
        return KnownZeroAnalysis(False, ZeroSet(EMPTY), A, p, q, r, D, A @ t)
    p_roots = [] if p.is_zero() else binary_projective_roots(p.with_vars(("y", "z")))
    if p.is_zero():
        # F = 2xq + r: PSD forces q = 0 and r >= 0
        if not q.is_zero():
            w = _q_nonzero_witness(F, q)
            return KnownZeroAnalysis(False, ZeroSet(EMPTY), A, p, q, r, D, A @ w)
        wit = _binary_negative(r)
        if wit is not None:
            return KnownZeroAnalysis(False, ZeroSet(EMPTY), A, p, q, r, D, A @ (0, wit[0], wit[1]))
        roots = binary_projective_roots(r) if not r.is_zero() else None
        if roots == []:
            return KnownZeroAnalysis(True, ZeroSet(FINITE, [ProjectiveZero.of(P)]), A, p, q, r, D)
        return KnownZeroAnalysis(True, _infinite_from_lines(_lines_from_binary_roots(r), A), A, p, q, r, D)
    for (a, b), _ in p_roots:
        if sign(q.with_vars(("y", "z")).evaluate((a, b))) != 0:
            w = _q_nonzero_witness_at(F, q, (a, b))
            return KnownZeroAnalysis(False, ZeroSet(EMPTY), A, p, q, r, D, A @ w)
        rv = r.with_vars(("y", "z")).evaluate((a, b))
        if sign(rv) < 0:
            return KnownZeroAnalysis(False, ZeroSet(EMPTY), A, p, q, r, D, A @ (0, a, b))
        if sign(rv) == 0:
            line = z.scale(a) - y.scale(b)
            return KnownZeroAnalysis(True, _infinite_from_lines([line], A), A, p, q, r, D)
    Dyz = D.with_vars(("y", "z"))
    if not D.is_zero():
        wit = _binary_negative(D)
        if wit is not None:
            a, b = wit
            pv = p.with_vars(("y", "z")).evaluate((a, b))
            qv = q.with_vars(("y", "z")).evaluate((a, b))
            return KnownZeroAnalysis(False, ZeroSet(EMPTY), A, p, q, r, D, A @ (-qv / pv, a, b))
        for (a, b), _ in binary_projective_roots(Dyz):
            pv = p.with_vars(("y", "z")).evaluate((a, b))
            qv = q.with_vars(("y", "z")).evaluate((a, b))
            if sign(pv) == 0:
                continue
            pts.append(ProjectiveZero.of(A @ (-qv / pv, a, b)))
    else:
        # D vanishes identically: F = p (x + q/p)^2 has a curve of zeros
        return KnownZeroAnalysis(True, ZeroSet(INFINITE), A, p, q, r, D)
    pts = _dedup([ProjectiveZero.of(A @ (1, 0, 0))] + pts[1:])
    return KnownZeroAnalysis(True, ZeroSet(FINITE, pts), A, p, q, r, D)


def _infinite_from_lines(lines: List[Poly], A: Matrix3) -> ZeroSet:
    Ainv = A.inverse()
    return ZeroSet(INFINITE, lines=[l.substitute_linear(Ainv) for l in lines])


def _lines_from_binary_roots(r: Poly) -> List[Poly]:
    y, z = Poly.gens(XYZ)[1:]
    out = []
    if r.is_zero():
        return [y]
    for (a, b), _ in binary_projective_roots(r.with_vars(("y", "z"))):
        out.append(z.scale(a) - y.scale(b))
    return out or [y]


def _binary_negative(h: Poly) -> Optional[tuple]:
    """A point ``(a, b)`` with ``h(a, b) < 0`` for a binary form in ``y, z``,
    or ``None`` when ``h >= 0``."""
    if h.is_zero():
        return None
    hb = h.with_vars(("y", "z"))
    roots = [ab for ab, _ in binary_projective_roots(hb)]
    samples = _samples_between(roots)
    for s in samples:
        if sign(hb.evaluate(s)) < 0:
            return s
    return None


def _samples_between(roots) -> List[tuple]:
    """Rational sample points on the projective line, one in each arc cut
    out by the roots."""
    finite = [a for (a, b) in roots if sign(b) != 0]
    cuts = []
    for a in finite:
        if isinstance(a, Fraction):
            cuts.append((a, a))
        else:
            lo, hi = a.enclosure()
            cuts.append((lo, hi))
    cuts.sort()
    # refine algebraic enclosures until they are pairwise disjoint
    pts = []
    if not cuts:
        return [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    alg = [a for a in finite if not isinstance(a, Fraction)]
    for _ in range(200):
        cuts = sorted(((a, a) if isinstance(a, Fraction) else a.enclosure()) for a in finite)
        if all(cuts[i][1] < cuts[i + 1][0] for i in range(len(cuts) - 1)):
            break
        for a in alg:
            a.gen.bisect()
    pts.append((cuts[0][0] - 1, Fraction(1)))
    for i in range(len(cuts) - 1):
        pts.append(((cuts[i][1] + cuts[i + 1][0]) / 2, Fraction(1)))
    pts.append((cuts[-1][1] + 1, Fraction(1)))
    pts.append((Fraction(1), Fraction(0)))
    return pts


def _x_for_negative_p(F: Poly, yz) -> tuple:
    a, b = yz
    x = Fraction(1)
    while True:
        pt = (x, a, b)
        if sign(F.evaluate(pt)) < 0:
            return pt
        x *= 2


def _q_nonzero_witness_at(F: Poly, q: Poly, yz) -> tuple:
    """Near a root of ``p`` where ``q != 0`` the form is linear in ``x`` to
    leading order, so a large ``x`` of the right sign goes negative."""
    a, b = yz
    # move slightly off the root is unnecessary: on the root F = 2xq + r exactly
    qv = q.with_vars(("y", "z")).evaluate((a, b))
    s = -1 if sign(qv) > 0 else 1
    x = Fraction(s)
    while True:
        pt = (x, a, b)
        if sign(F.evaluate(pt)) < 0:
            return pt
        x *= 2


def _q_nonzero_witness(F: Poly, q: Poly) -> tuple:
    for s in _samples_between([]) + [(Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1))]:
        if sign(q.with_vars(("y", "z")).evaluate(s)) != 0:
            return _q_nonzero_witness_at(F, q, s)
    raise InternalError("nonzero binary form vanished at all samples")


def _negative_near_axis(F: Poly, parts) -> tuple:
    """``F`` has terms of x-degree 3 or 4 while ``F(1,0,0) = 0``."""
    if not parts[4:] or all(c.is_zero() for c in parts[4:]):
        c3 = parts[3]
        # c3 is linear in y, z: choose (y, z) making x^3 c3 dominate with a negative sign
        for yz in ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))):
            val = c3.evaluate((0, yz[0], yz[1]))
            if sign(val) != 0:
                s = -1 if sign(val) > 0 else 1
                eps = Fraction(s)
                while True:
                    pt = (Fraction(1), eps * yz[0], eps * yz[1])
                    if sign(F.evaluate(pt)) < 0:
                        return pt
                    eps /= 2
    raise NotPSDError("form is not PSD near the known zero")
