"""The reduction ladder: subtract weighted squares so that the residual
keeps its nonnegativity while its real zero set grows, until a Gram matrix
in the products ``xy, yz, zx`` (or a repeated factor) finishes the job.

Two modes are supported.  ``exact`` subtracts the true minima, which are
algebraic numbers in general.  ``hybrid`` picks a rational point near the
minimiser and bends the subtracted square slightly so that this point is an
exact critical point; every accepted residual is then checked for
nonnegativity exactly, so all results stay exact and rational.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .certify import Certificate, verify
from .elimination import eliminate_system, form_gcd, resultant, squarefree_decompose
from .errors import (
    BudgetExceeded,
    DegenerateSystem,
    InternalError,
    NotPSDError,
    QuarticSOSError,
)
from .forms import (
    LEMMA2,
    LEMMA3,
    XYZ,
    YZ,
    Matrix3,
    Poly,
    ShapeError,
    UniPoly,
    monomials,
    sphere,
    x_decomposition,
)
from .gram import NotPSD, ldlt_psd, sos_from_quadratic, squares_from_ldlt
from .linalg import min_norm_solution, nullspace, solve
from .realalg import (
    RealAlgebraic,
    common_gen,
    evaluate_unipoly,
    poly_real_roots,
    real_roots,
    sign,
)
from .zerofinder import (
    EMPTY,
    FINITE,
    INFINITE,
    ProjectiveZero,
    ZeroSet,
    _binary_negative,
    analyse_with_known_zero,
    binary_projective_roots,
    completion_matrix,
    projective_real_zeros,
    proportional,
)

log = logging.getLogger(__name__)

EXACT = "exact"
HYBRID = "hybrid"

Term = Tuple[object, Poly]


@dataclass
class LadderStep:
    """One reduction: ``input = residual + sum(w * g**2 for w, g in terms)``."""

    lemma: str
    case: str
    terms: List[Term]
    residual: Poly
    zeros_before: object
    zeros_after: Optional[ZeroSet] = None
    note: str = ""

    def check(self, f: Poly) -> bool:
        acc = self.residual
        for w, g in self.terms:
            acc = acc + (g * g).scale(w)
        return (acc - f).is_zero()

    def summary(self) -> dict:
        after = None
        if self.zeros_after is not None:
            after = "inf" if self.zeros_after.kind == INFINITE else len(self.zeros_after.points)
        return {
            "lemma": self.lemma,
            "case": self.case,
            "terms": len(self.terms),
            "zeros_before": self.zeros_before,
            "zeros_after": after,
            "note": self.note,
        }


@dataclass
class SphereMinimum:
    """Least value of ``f/(x^2+y^2+z^2)^2`` with a point attaining it.

    ``eliminant`` is a square-free rational polynomial whose real roots
    include every critical value; ``critical_values`` lists the verified
    ones in increasing order.
    """

    value: object
    witness: ProjectiveZero
    eliminant: UniPoly
    critical_values: list = field(default_factory=list)


def _zero_count(Z: ZeroSet):
    return "inf" if Z.kind == INFINITE else len(Z.points)


def _pull_back(terms: Sequence[Term], Ainv: Matrix3) -> List[Term]:
    return [(w, g.with_vars(XYZ).substitute_linear(Ainv)) for w, g in terms]


def _subtract(f: Poly, terms: Sequence[Term]) -> Poly:
    acc = f
    for w, g in terms:
        acc = acc - (g * g).scale(w)
    return acc


def _embed(b: Poly) -> Poly:
    return b.with_vars(XYZ)


# ---------------------------------------------------------------------------
# Numerics (only ever used to propose candidates that are checked exactly)


class _NumericForm:
    def __init__(self, f: Poly):
        items = list(f.terms.items())
        self.E = np.array([e for e, _ in items], dtype=float).reshape(-1, f.nvars)
        self.C = np.array([float(c) for _, c in items], dtype=float)
        self.n = f.nvars

    def values(self, V: np.ndarray) -> np.ndarray:
        # V: (k, n) points
        P = np.prod(V[:, None, :] ** self.E[None, :, :], axis=2)
        return P @ self.C

    def value(self, v):
        return float(self.values(np.asarray(v, dtype=float)[None, :])[0])

    def grad(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        g = np.zeros(self.n)
        for i in range(self.n):
            Ei = self.E.copy()
            coef = self.C * Ei[:, i]
            Ei[:, i] = np.maximum(Ei[:, i] - 1, 0)
            g[i] = float(np.prod(v[None, :] ** Ei, axis=1) @ coef)
        return g


def _sphere_points(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * i / n)
    theta = np.pi * (1 + 5**0.5) * i
    return np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1)


def numeric_sphere_minima(f: Poly, samples: int = 800, keep: int = 6) -> List[Tuple[float, np.ndarray]]:
    """Local minima of ``f`` on the unit sphere, best first (numerical)."""
    nf = _NumericForm(f)
    pts = _sphere_points(samples)
    vals = nf.values(pts)
    order = np.argsort(vals)

    def phi(v):
        s = float(v @ v)
        return nf.value(v) / (s * s)

    def dphi(v):
        s = float(v @ v)
        return nf.grad(v) / (s * s) - 4 * nf.value(v) * v / (s**3)

    found: List[Tuple[float, np.ndarray]] = []
    for idx in order[: 4 * keep]:
        res = minimize(phi, pts[idx], jac=dphi, method="BFGS", options={"gtol": 1e-13, "maxiter": 400})
        v = res.x / np.linalg.norm(res.x)
        val = phi(v)
        if any(abs(float(v @ w)) > 1 - 1e-9 for _, w in found):
            continue
        found.append((val, v))
        if len(found) >= keep:
            break
    found.sort(key=lambda t: t[0])
    return found


def _rationalise(v: np.ndarray, denominator: int) -> Tuple[Fraction, Fraction, Fraction]:
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]
    out = [Fraction(float(c)).limit_denominator(denominator) for c in v]
    out[k] = Fraction(1)
    return tuple(out)


_DENOMINATORS = (1, 2, 4, 8, 16, 64, 256, 1024, 4096, 2**14, 2**16, 2**18, 2**20, 2**24)


def find_negative_point(f: Poly, samples: int = 400) -> Optional[tuple]:
    """A rational point where ``f`` is negative, found by numerical search
    and confirmed exactly, or ``None``."""
    if f.is_zero():
        return None
    nf = _NumericForm(f)
    pts = _sphere_points(samples)
    vals = nf.values(pts)
    cands = [pts[i] for i in np.argsort(vals)[:3]]
    if vals.min() >= 0:
        minima = numeric_sphere_minima(f, samples=samples, keep=3)
        if not minima or minima[0][0] >= 0:
            return None
        cands = [v for _, v in minima]
    for v in cands:
        if nf.value(v) >= 0:
            continue
        for D in _DENOMINATORS:
            P = _rationalise(v, D)
            if sign(f.evaluate(P)) < 0:
                return P
    return None


# ---------------------------------------------------------------------------
# Exact minima


def _value_key(v):
    return v


def _least(values: List[Tuple[object, object]]):
    """Entry with the least first component, compared exactly."""
    best = None
    for item in values:
        if best is None or item[0] < best[0]:
            best = item
    return best


def min_binary_on_circle(h: Poly, weight: Poly, with_point: bool = False):
    """Exact minimum of ``h/weight`` on the unit circle for binary forms of
    equal degree in ``y, z`` (``weight`` positive on the circle)."""
    hb, wb = h.with_vars(YZ), weight.with_vars(YZ)
    if hb.degree != wb.degree and not hb.is_zero():
        raise ValueError("numerator and weight must have equal degree")
    d = wb.degree
    H = _dehom(hb, d)
    W = _dehom(wb, d)
    if W.degree < d and W.degree >= 0 and sign(W.c[-1] if W.c else 0) == 0:
        pass
    cands = []
    w_inf = wb.coefficient((d, 0))
    if sign(w_inf) == 0:
        raise ValueError("weight vanishes on the circle")
    cands.append((hb.coefficient((d, 0)) / w_inf, (Fraction(1), Fraction(0))))
    crit = H.derivative() * W - H * W.derivative()
    if not crit.is_zero():
        roots = real_roots(crit) if crit.is_rational() else [(r, 1) for r in poly_real_roots(crit)]
        for t, _ in roots:
            wv = evaluate_unipoly(W, t)
            if sign(wv) <= 0:
                raise ValueError("weight is not positive on the circle")
            cands.append((evaluate_unipoly(H, t) / wv, (t, Fraction(1))))
    else:
        cands.append((evaluate_unipoly(H, Fraction(0)) / evaluate_unipoly(W, Fraction(0)), (Fraction(0), Fraction(1))))
    best = _least(cands)
    return best if with_point else best[0]


def _dehom(b: Poly, d: int) -> UniPoly:
    c = [Fraction(0)] * (d + 1)
    for e, v in b.terms.items():
        c[e[0]] = v
    return UniPoly(c)


_ROTATIONS = [
    None,
    ((1, 2, 3),),
    ((2, -1, 1),),
    ((3, 1, -2),),
]


def _cayley(k) -> Matrix3:
    """Rational rotation ``(I - K)(I + K)^-1`` for the skew matrix of ``k``."""
    a, b, c = (Fraction(v) for v in k)
    K = Matrix3([[0, -c, b], [c, 0, -a], [-b, a, 0]])
    I = Matrix3.identity()
    Im = Matrix3([[I[i][j] - K[i][j] for j in range(3)] for i in range(3)])
    Ip = Matrix3([[I[i][j] + K[i][j] for j in range(3)] for i in range(3)])
    return Im @ Ip.inverse()


def _critical_points(f: Poly) -> List[tuple]:
    """Exact real projective points where the gradient of ``f`` is parallel
    to the position vector (critical points of ``f`` on the sphere)."""
    x, y, z = Poly.gens(XYZ)
    fx, fy, fz = f.gradient()
    E = [y * fz - z * fy, z * fx - x * fz, x * fy - y * fx]
    if all(e.is_zero() for e in E):
        raise DegenerateSystem("every point of the sphere is critical")
    G = None
    for e in E:
        if not e.is_zero():
            G = e if G is None else form_gcd(G, e)
    pts: List[tuple] = []
    if G is not None and G.degree > 0:
        E = [e.exquo(G) if not e.is_zero() else e for e in E]
        pts.extend(_curve_samples(G))
    pts.extend(_common_zeros(E))
    return pts


def _curve_samples(G: Poly) -> List[tuple]:
    """Points on the real curve ``G = 0`` met by the coordinate planes and
    the planes ``x = y``, ``y = z``, ``x = z``; a critical curve carries a
    constant value, so one point per component is enough."""
    out = []
    x, y, z = Poly.gens(XYZ)
    subs = [
        (lambda a, b: (Fraction(0), a, b)),
        (lambda a, b: (a, Fraction(0), b)),
        (lambda a, b: (a, b, Fraction(0))),
        (lambda a, b: (a, a, b)),
        (lambda a, b: (a, b, b)),
        (lambda a, b: (a, b, a)),
    ]
    images = [
        (Poly.zero(YZ), Poly.gens(YZ)[0], Poly.gens(YZ)[1]),
        (Poly.gens(YZ)[0], Poly.zero(YZ), Poly.gens(YZ)[1]),
        (Poly.gens(YZ)[0], Poly.gens(YZ)[1], Poly.zero(YZ)),
        (Poly.gens(YZ)[0], Poly.gens(YZ)[0], Poly.gens(YZ)[1]),
        (Poly.gens(YZ)[0], Poly.gens(YZ)[1], Poly.gens(YZ)[1]),
        (Poly.gens(YZ)[0], Poly.gens(YZ)[1], Poly.gens(YZ)[0]),
    ]
    for make, img in zip(subs, images):
        b = G.substitute(list(img))
        if b.is_zero():
            out.append(make(Fraction(1), Fraction(0)))
            continue
        for (a, c), _ in binary_projective_roots(b):
            out.append(make(a, c))
    return out


def _common_zeros(E: List[Poly]) -> List[tuple]:
    pts: List[tuple] = []
    x, y, z = Poly.gens(XYZ)
    # chart z = 0: binary forms in x, y
    at_inf = [e.substitute([x, y, Poly.zero(XYZ)]) for e in E]
    nz = [b for b in at_inf if not b.is_zero()]
    if nz:
        g = nz[0]
        for b in nz[1:]:
            g = form_gcd(g, b)
        if g.degree > 0:
            for (a, c), _ in binary_projective_roots(g.with_vars(("x", "y"))):
                pts.append((a, c, Fraction(0)))
    else:
        raise DegenerateSystem("line at infinity is critical")
    # chart z = 1
    a = E[0].dehomogenize("z")
    b = E[1].dehomogenize("z")
    c3 = E[2].dehomogenize("z")
    if a.is_zero() or b.is_zero():
        pair = [p for p in (a, b, c3) if not p.is_zero()][:2]
    else:
        pair = [a, b]
    if len(pair) < 2:
        raise DegenerateSystem("too few nonzero equations")
    try:
        d = eliminate_system(pair, ["x", "y"])
    except DegenerateSystem:
        raise
    for y0, _ in real_roots(d):
        ua = UniPoly([c.evaluate((0, y0, 1)) for c in pair[0].as_univariate("x")])
        ub = UniPoly([c.evaluate((0, y0, 1)) for c in pair[1].as_univariate("x")])
        uc = UniPoly([c.evaluate((0, y0, 1)) for c in c3.as_univariate("x")]) if not c3.is_zero() else UniPoly()
        h = ua.gcd(ub) if not ub.is_zero() else ua.monic()
        if not uc.is_zero() and h.degree > 0:
            h = h.gcd(uc)
        if h.is_zero():
            raise DegenerateSystem("critical line through a chart point")
        if h.degree < 1:
            continue
        if h.degree == 1:
            xs = [-h.c[0] / h.c[1]]
        elif h.is_rational():
            xs = [r for r, _ in real_roots(h)]
        else:
            raise DegenerateSystem("fibre of degree > 1 over an extension")
        for x0 in xs:
            pts.append((x0, y0, Fraction(1)))
    return pts


def min_on_sphere(f: Poly) -> SphereMinimum:
    """Exact minimum of ``f`` on the unit sphere (as ``f/s^2`` projectively)."""
    if f.is_zero():
        return SphereMinimum(Fraction(0), ProjectiveZero.of((0, 0, 1)), UniPoly((0, 1)), [Fraction(0)])
    if not (f.nvars == 3 and f.is_homogeneous(4)):
        raise ValueError("expected a ternary quartic")
    s = sphere()
    last: Optional[Exception] = None
    for rot in _ROTATIONS:
        Q = None if rot is None else _cayley(rot[0])
        g = f if Q is None else f.substitute_linear(Q)
        try:
            pts = _critical_points(g)
        except DegenerateSystem as exc:
            # f = c * s^2 is critical everywhere
            ratio = _constant_ratio(f, s)
            if ratio is not None:
                w = ProjectiveZero.of((0, 0, 1))
                return SphereMinimum(ratio, w, UniPoly((-ratio, 1)).primitive(), [ratio])
            last = exc
            continue
        if Q is not None:
            pts = [Q @ p for p in pts]
        vals = []
        for p in pts:
            sv = s.evaluate(p)
            vals.append((f.evaluate(p) / (sv * sv), p))
        if not vals:
            last = DegenerateSystem("no critical points found")
            continue
        best = _least(vals)
        elim = _eliminant([v for v, _ in vals])
        crit = sorted((v for v, _ in vals), key=float)
        return SphereMinimum(best[0], ProjectiveZero.of(best[1]), elim, _distinct(crit))
    raise DegenerateSystem(f"sphere minimum could not be isolated: {last}")


def _distinct(vals):
    out = []
    for v in vals:
        if not any(v == w for w in out if abs(float(v) - float(w)) < 1e-6):
            out.append(v)
    return out


def _constant_ratio(f: Poly, s: Poly):
    c = f.coefficient((4, 0, 0))
    if (f - (s * s).scale(c)).is_zero():
        return c
    return None


def _eliminant(values) -> UniPoly:
    prod = UniPoly((1,))
    seen: List[UniPoly] = []
    for v in values:
        if isinstance(v, Fraction):
            p = UniPoly((-v, 1))
        else:
            p = v.defining
        p = p.monic()
        if any(p == q for q in seen):
            continue
        seen.append(p)
        g = prod.gcd(p)
        prod = prod * p.exquo(g)
    return prod.primitive()


def is_psd(f: Poly) -> bool:
    """Exact nonnegativity test for a ternary quartic."""
    return psd_witness(f) is None


def psd_witness(f: Poly) -> Optional[tuple]:
    """``None`` when ``f >= 0`` everywhere, else a point where ``f < 0``."""
    if f.is_zero():
        return None
    if f.degree % 2:
        return (Fraction(-1), Fraction(0), Fraction(0)) if sign(f.evaluate((-1, 0, 0))) < 0 else (
            Fraction(1), Fraction(0), Fraction(0))
    w = find_negative_point(f)
    if w is not None:
        return w
    m = min_on_sphere(f)
    if sign(m.value) >= 0:
        return None
    return m.witness.coords


# ---------------------------------------------------------------------------
# Rational anchoring


def _binary_anchor_candidates(N: Poly, B: Poly, k: int, w0: Poly):
    """Rational points near the exact minimiser of ``N / (B * w0**k)``."""
    weight = B * w0 ** k
    val, (a, b) = min_binary_on_circle(N, weight, with_point=True)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        yield (a, b)
        return
    if sign(b) == 0:
        yield (Fraction(1), Fraction(0))
        return
    seen = set()
    for D in _DENOMINATORS:
        lo, hi = a.refine(Fraction(1, 4 * D * D)).enclosure()
        t = ((lo + hi) / 2).limit_denominator(D)
        if t in seen:
            continue
        seen.add(t)
        yield (t, Fraction(1))


def _solve_binary_anchor(N: Poly, B: Poly, k: int, w0: Poly, P) -> Optional[Tuple[object, Poly]]:
    """Bend ``w0`` by a quadratic ``delta`` of least norm so that ``P`` is a
    critical point of ``N / (B w^k)``; return ``(c, w)`` with
    ``c = N(P) / (B(P) w(P)^k)``."""
    a, b = P
    yv, zv = Poly.gens(YZ)
    Nv, Bv, w0v = N.evaluate(P), B.evaluate(P), w0.evaluate(P)
    gN = [g.evaluate(P) for g in N.gradient()]
    gB = [g.evaluate(P) for g in B.gradient()]
    gw0 = [g.evaluate(P) for g in w0.gradient()]
    T = (-b, a)
    alpha = (Bv * gN[0] - Nv * gB[0]) * T[0] + (Bv * gN[1] - Nv * gB[1]) * T[1]
    beta = Nv * Bv
    row = [
        alpha * a * a - k * beta * (-2 * a * b),
        alpha * a * b - k * beta * (a * a - b * b),
        alpha * b * b - k * beta * (2 * a * b),
    ]
    rhs = -(w0v * alpha - k * beta * (gw0[0] * T[0] + gw0[1] * T[1]))
    if all(r == 0 for r in row):
        if rhs != 0:
            return None
        delta = [Fraction(0)] * 3
    else:
        delta = min_norm_solution([row], [rhs])
        if delta is None:
            return None
    w = w0 + (yv * yv).scale(delta[0]) + (yv * zv).scale(delta[1]) + (zv * zv).scale(delta[2])
    wv = w.evaluate(P)
    if sign(wv) <= 0 or sign(Bv) <= 0:
        return None
    return Nv / (Bv * wv ** k), w


def _binary_reduce(N: Poly, B: Poly, k: int, w0: Poly, mode: str) -> Tuple[object, Poly]:
    """Find ``(c, w)`` with ``N - c B w^k >= 0`` having a real root."""
    if mode == EXACT:
        lam = min_binary_on_circle(N, B * w0 ** k)
        return lam, w0
    for P in _binary_anchor_candidates(N, B, k, w0):
        sol = _solve_binary_anchor(N, B, k, w0, P)
        if sol is None:
            continue
        c, w = sol
        if k == 1 and _binary_negative(w) is not None:
            continue
        R = N - B * (w ** k).scale(c)
        if _binary_negative(R) is None:
            return c, w
    raise _AnchorFailed("no rational anchor gave a nonnegative binary residual")


class _AnchorFailed(QuarticSOSError):
    pass


def _ternary_anchor(f: Poly) -> Tuple[object, Poly, tuple, object]:
    """Rational point ``P`` and quadratic ``Q`` near ``x^2+y^2+z^2`` with
    ``P`` minimising ``f / Q^2``; returns ``(c, Q, P, analysis)``."""
    s = sphere()
    gens = Poly.gens(XYZ)
    monos = monomials(3, 2)
    mono_polys = [Poly({e: 1}, XYZ) for e in monos]
    minima = numeric_sphere_minima(f)
    tried = set()
    for _, v in minima[:3]:
        for D in _DENOMINATORS:
            P = _rationalise(v, D)
            if P in tried:
                continue
            tried.add(P)
            F = f.evaluate(P)
            if sign(F) <= 0:
                continue
            g = [d.evaluate(P) for d in f.gradient()]
            sP = s.evaluate(P)
            gs = [2 * c for c in P]
            rows, rhs = [], []
            for i in range(3):
                rows.append([g[i] * m.evaluate(P) - 2 * F * m.derivative(i).evaluate(P) for m in mono_polys])
                rhs.append(-(sP * g[i] - 2 * F * gs[i]))
            delta = min_norm_solution(rows, rhs)
            if delta is None:
                continue
            Q = s
            for c, m in zip(delta, mono_polys):
                if c != 0:
                    Q = Q + m.scale(c)
            QP = Q.evaluate(P)
            if sign(QP) == 0:
                continue
            c = F / (QP * QP)
            R = f - (Q * Q).scale(c)
            ana = analyse_with_known_zero(R, P)
            if ana.psd:
                return c, Q, P, ana
    raise _AnchorFailed("no rational anchor on the sphere gave a PSD residual")


# ---------------------------------------------------------------------------
# The lemmas


def lemma1_step(f: Poly, mode: str = EXACT) -> LadderStep:
    """Subtract a multiple of a square of a sphere-like quadratic so that a
    zero appears."""
    s = sphere()
    ratio = _constant_ratio(f, s)
    if ratio is not None:
        return LadderStep("L1", "constant", [(ratio, s)], Poly.zero(XYZ), 0, ZeroSet(INFINITE), "residual zero")
    if mode == HYBRID:
        try:
            c, Q, P, ana = _ternary_anchor(f)
            R = f - (Q * Q).scale(c)
            return LadderStep("L1", "anchored", [(c, Q)], R, 0, ana.zeros, f"anchor {_fmt_pt(P)}")
        except _AnchorFailed as exc:
            log.info("sphere-step anchoring failed (%s); using the exact minimum", exc)
    m = min_on_sphere(f)
    lam = m.value
    if sign(lam) < 0:
        raise NotPSDError("form is negative somewhere on the sphere", witness=m.witness.coords, value=lam)
    R = f - (s * s).scale(lam)
    try:
        Z = _zeros_with_hint(R, m.witness)
    except BudgetExceeded as exc:
        # the step is still exact; classifying its zeros is left to the caller
        return LadderStep("L1", "exact", [(lam, s)], R, 0, None, f"zeros not classified: {exc}")
    return LadderStep("L1", "exact", [(lam, s)], R, 0, Z, "exact sphere minimum")


def _fmt_pt(P) -> str:
    return "(" + ", ".join(str(c) for c in P) + ")"


def _zeros_with_hint(R: Poly, P: ProjectiveZero) -> ZeroSet:
    if R.is_zero():
        return ZeroSet(INFINITE)
    if P.is_rational():
        ana = analyse_with_known_zero(R, P.coords)
        if not ana.psd:
            raise InternalError("residual lost nonnegativity")
        return ana.zeros
    return projective_real_zeros(R)


def _rank1_factor(p: Poly):
    """``p = t * l**2`` for a rank-one binary quadratic in ``y, z``."""
    a, b, c = p.coefficient((2, 0)), p.coefficient((1, 1)), p.coefficient((0, 2))
    yv, zv = Poly.gens(YZ)
    if sign(a) != 0:
        return a, yv + zv.scale(b / (2 * a))
    return c, zv


def _binary_rank(p: Poly) -> int:
    if p.is_zero():
        return 0
    a, b, c = p.coefficient((2, 0)), p.coefficient((1, 1)), p.coefficient((0, 2))
    return 1 if sign(4 * a * c - b * b) == 0 else 2


def lemma2_step(f: Poly, zero: ProjectiveZero, mode: str = EXACT) -> LadderStep:
    """One known zero: move it to ``(1,0,0)`` and split on the rank of the
    ``x^2`` coefficient."""
    P = zero.coords if isinstance(zero, ProjectiveZero) else tuple(zero)
    A = completion_matrix(P)
    Ainv = A.inverse()
    F = f.substitute_linear(A)
    try:
        p, q, r = x_decomposition(F, LEMMA2)
    except ShapeError:
        raise NotPSDError("form is not PSD around its zero", witness=None) from None
    x = Poly.gens(XYZ)[0]
    yv, zv = Poly.gens(YZ)
    w0 = yv * yv + zv * zv
    rank = _binary_rank(p)
    terms: List[Term] = []
    if rank == 0:
        if not q.is_zero():
            raise NotPSDError("odd x-linear part with vanishing x^2 part")
        c, w = _binary_reduce(r, Poly.const(1, YZ), 2, w0, mode)
        terms = [(c, _embed(w))]
        case = "i"
    elif rank == 1:
        t, ell = _rank1_factor(p)
        if sign(t) < 0:
            raise NotPSDError("x^2 coefficient is negative definite")
        try:
            q1 = q.exquo(ell)
        except ArithmeticError:
            raise NotPSDError("x-linear part does not vanish with the x^2 part") from None
        terms = [(t, x * _embed(ell) + _embed(q1).scale(1 / t))]
        b = r - (q1 * q1).scale(1 / t)
        case = "ii(a)"
        if not b.is_zero() and _binary_negative(b) is None and not binary_projective_roots(b):
            c, w = _binary_reduce(b, Poly.const(1, YZ), 2, w0, mode)
            terms.append((c, _embed(w)))
            case = "ii(b)"
    else:
        if sign(p.coefficient((2, 0))) < 0:
            raise NotPSDError("x^2 coefficient is negative definite")
        D = p * r - q * q
        c, w = _binary_reduce(D, p, 2, p, mode)
        terms = [(c, _embed(w))]
        case = "iii"
    terms = _pull_back(terms, Ainv)
    R = _subtract(f, terms)
    Z = _zeros_after(R, [P])
    return LadderStep("L2", case, terms, R, 1, Z)


def _zeros_after(R: Poly, known: Sequence[tuple]) -> ZeroSet:
    if R.is_zero():
        return ZeroSet(INFINITE)
    for P in known:
        if all(isinstance(c, Fraction) for c in P):
            ana = analyse_with_known_zero(R, P)
            if not ana.psd:
                raise InternalError("ladder residual is not PSD")
            return ana.zeros
    return projective_real_zeros(R)


def _two_zero_matrix(P1, P2) -> Matrix3:
    for k in range(3):
        e = [Fraction(int(i == k)) for i in range(3)]
        A = Matrix3.from_columns([P1, P2, e])
        if sign(A.det()) != 0:
            return A
    raise InternalError("two zeros are proportional")


def lemma3_step(f: Poly, zeros: Sequence[ProjectiveZero], mode: str = EXACT) -> LadderStep:
    """Two known zeros: move them to ``(1,0,0)`` and ``(0,1,0)``."""
    P1, P2 = [z.coords if isinstance(z, ProjectiveZero) else tuple(z) for z in zeros[:2]]
    A = _two_zero_matrix(P1, P2)
    F = f.substitute_linear(A)
    try:
        p, q, r = x_decomposition(F, LEMMA3)
    except ShapeError:
        raise NotPSDError("form is not PSD around its zeros") from None
    x, _, z = Poly.gens(XYZ)
    yv, zv = Poly.gens(YZ)
    case = None
    terms: List[Term] = []
    rp, rr = _binary_rank(p), _binary_rank(r)
    S = Matrix3.identity()
    if rr == 2 and rp == 2:
        D = p * r - q * q
        roots = binary_projective_roots(D) if not D.is_zero() else [((Fraction(1), Fraction(0)), 1)]
        at_inf = [ab for ab, _ in roots if sign(ab[1]) == 0]
        if roots and at_inf:
            # shear x -> x + lam*z sends the root at (1, 0) into r
            lam = -q.coefficient((2, 0)) / p.coefficient((2, 0))
            S = Matrix3([[1, 0, lam], [0, 1, 0], [0, 0, 1]])
            F = F.substitute_linear(S)
            p, q, r = x_decomposition(F, LEMMA3)
            rp, rr = _binary_rank(p), _binary_rank(r)
            case = "ii(a)"
        elif roots:
            raise InternalError("a third zero was missed by the classifier")
        else:
            c, w = _binary_reduce(D, p, 1, yv * yv + zv * zv, mode)
            for wt, ell in sos_from_quadratic(_embed(w)):
                terms.append((c * wt, z * ell))
            case = "ii(b)"
    if case != "ii(b)":
        if rr <= 1:
            if rr == 0:
                raise InternalError("zero x-free part with only two zeros")
            t, ell = _rank1_factor(r)
            q1 = q.exquo(ell)
            terms = [(t, z * _embed(ell) + x * _embed(q1).scale(1 / t))]
            case = (case + "+i") if case else "i"
        elif rp <= 1:
            t, ell = _rank1_factor(p)
            q1 = q.exquo(ell)
            terms = [(t, x * _embed(ell) + z * _embed(q1).scale(1 / t))]
            case = (case + "+i") if case else "i"
        else:
            raise InternalError("two-zero case analysis fell through")
    M = A @ S
    terms = _pull_back(terms, M.inverse())
    R = _subtract(f, terms)
    Z = _zeros_after(R, [P1, P2])
    return LadderStep("L3", case, terms, R, 2, Z)


def _non_collinear_triple(points: Sequence[ProjectiveZero]):
    pts = sorted(points, key=lambda p: not p.is_rational())
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                M = Matrix3.from_columns([pts[i].coords, pts[j].coords, pts[k].coords])
                if sign(M.det()) != 0:
                    return M
    return None


_LEMMA4_SUPPORT = {(2, 2, 0), (0, 2, 2), (2, 0, 2), (2, 1, 1), (1, 2, 1), (1, 1, 2)}


def lemma4_decompose(f: Poly, zeros: ZeroSet) -> List[Term]:
    """Finish: three non-collinear zeros, or an infinite zero set."""
    if f.is_zero():
        return []
    if zeros.kind == INFINITE:
        return _infinite_case(f, zeros)
    A = _non_collinear_triple(zeros.points)
    if A is None:
        raise InternalError("all zeros are collinear; impossible for a PSD quartic")
    F = f.substitute_linear(A)
    extra = [e for e in F.terms if e not in _LEMMA4_SUPPORT]
    if extra:
        raise InternalError(f"transformed form has unexpected monomials {extra}")
    a, b, c = F.coefficient((2, 2, 0)), F.coefficient((0, 2, 2)), F.coefficient((2, 0, 2))
    a1, b1, c1 = F.coefficient((2, 1, 1)), F.coefficient((1, 2, 1)), F.coefficient((1, 1, 2))
    # basis (xy, yz, zx): xy*yz = xy^2z, xy*zx = x^2yz, yz*zx = xyz^2
    G = [[a, b1 / 2, a1 / 2], [b1 / 2, b, c1 / 2], [a1 / 2, c1 / 2, c]]
    res = ldlt_psd(G)
    if isinstance(res, NotPSD):
        raise InternalError("Gram matrix in xy, yz, zx is not PSD")
    x, y, z = Poly.gens(XYZ)
    terms = squares_from_ldlt(res, [x * y, y * z, z * x])
    return _pull_back(terms, A.inverse())


def _infinite_case(f: Poly, zeros: ZeroSet) -> List[Term]:
    parts = [(p, m) for p, m in squarefree_decompose(f)]
    unit = Fraction(1)
    factors = []
    for p, m in parts:
        if p.degree == 0:
            unit = unit * p.coefficient((0, 0, 0))
        else:
            factors.append((p, m))
    lin = [p for p, m in factors if p.degree == 1 and m >= 2]
    if lin:
        ell = lin[0]
        h2 = f.exquo(ell * ell)
        if h2.is_zero():
            return []
        try:
            return [(w, ell * g) for w, g in sos_from_quadratic(h2)]
        except NotPSDError as exc:
            raise NotPSDError("cofactor of a squared line is not PSD", witness=exc.witness) from None
    quad = [p for p, m in factors if p.degree == 2 and m == 2]
    if quad:
        q = quad[0]
        c = f.exquo(q * q)
        cv = c.coefficient((0, 0, 0))
        if sign(cv) < 0:
            raise NotPSDError("negative multiple of a square")
        return [(cv, q)]
    for ell in zeros.lines:
        try:
            h2 = f.exquo(ell * ell)
        except ArithmeticError:
            continue
        return [(w, ell * g) for w, g in sos_from_quadratic(h2)]
    raise InternalError("infinite zero set without a squared factor")


# ---------------------------------------------------------------------------
# Gram matrix on the quadratics vanishing at the zero orbits


def _poly_at(f: Poly, reps: Sequence[UniPoly], modulus: UniPoly) -> UniPoly:
    powers = []
    for r in reps:
        tab = [UniPoly((1,))]
        for _ in range(max(f.degree, 0)):
            tab.append((tab[-1] * r) % modulus)
        powers.append(tab)
    acc = UniPoly()
    for e, c in f.terms.items():
        t = UniPoly((c,))
        for i, k in enumerate(e):
            if k:
                t = (t * powers[i][k]) % modulus
        acc = acc + t
    return acc % modulus


def vanishing_quadratics(f: Poly, zeros: Sequence[ProjectiveZero]) -> List[Poly]:
    """Rational quadratic forms vanishing at every zero and at all of its
    conjugates that are also zeros of ``f``."""
    monos = [Poly({e: 1}, XYZ) for e in monomials(3, 2)]
    rows = []
    for P in zeros:
        gen, reps = common_gen(P.coords)
        if gen is None:
            rows.append([m.evaluate(P.coords) for m in monos])
            continue
        d = gen.poly
        N = _poly_at(f, reps, d)
        e = d if N.is_zero() else d.gcd(N)
        if e.degree < 1:
            return []
        cols = [_poly_at(m, reps, e) for m in monos]
        for j in range(e.degree):
            rows.append([c[j] for c in cols])
    basis = nullspace(rows, 6) if rows else nullspace([], 6)
    out = []
    for v in basis:
        g = Poly.zero(XYZ)
        for c, m in zip(v, monos):
            if c != 0:
                g = g + m.scale(c)
        out.append(g)
    return out


def orbit_gram(f: Poly, zeros: Sequence[ProjectiveZero]) -> Optional[List[Term]]:
    """Try ``f = sum G_ab g_a g_b`` over the vanishing quadratics with a PSD
    Gram matrix; ``None`` when that is not determined uniquely or fails."""
    if not f.is_rational() or not zeros:
        return None
    basis = vanishing_quadratics(f, zeros)
    k = len(basis)
    if k == 0 or k * (k + 1) // 2 > 15:
        return None
    pairs = [(a, b) for a in range(k) for b in range(a, k)]
    prods = [basis[a] * basis[b] for a, b in pairs]
    monos4 = monomials(3, 4)
    Amat = [[(pr.coefficient(e) * (1 if a == b else 2)) for pr, (a, b) in zip(prods, pairs)] for e in monos4]
    rhs = [f.coefficient(e) for e in monos4]
    sol = solve(Amat, rhs)
    if sol is None:
        return None
    x0, null = sol
    if null:
        return None
    G = [[Fraction(0)] * k for _ in range(k)]
    for v, (a, b) in zip(x0, pairs):
        G[a][b] = G[b][a] = v
    res = ldlt_psd(G)
    if isinstance(res, NotPSD):
        return None
    return squares_from_ldlt(res, basis)


# ---------------------------------------------------------------------------
# Driver


@dataclass
class LadderResult:
    terms: List[Term]
    trace: List[dict]


def run_ladder(f: Poly, mode: str = HYBRID, max_steps: int = 8) -> LadderResult:
    """Drive the ladder on a form assumed PSD; raises on failure."""
    terms: List[Term] = []
    trace: List[dict] = []
    residual = f
    known: Optional[ZeroSet] = None
    try:
        for _ in range(max_steps):
            if residual.is_zero():
                return LadderResult(terms, trace)
            Z = known if known is not None else projective_real_zeros(residual)
            known = None
            if Z.kind == INFINITE:
                fin = lemma4_decompose(residual, Z)
                terms += fin
                trace.append({"lemma": "L4", "case": "ii", "terms": len(fin), "zeros_before": "inf"})
                residual = Poly.zero(XYZ)
                continue
            pts = Z.points
            n = len(pts)
            if n >= 3:
                rational = [p for p in pts if p.is_rational()]
                A = _non_collinear_triple(rational) if len(rational) >= 3 else None
                if A is not None:
                    fin = lemma4_decompose(residual, ZeroSet(FINITE, rational))
                    terms += fin
                    trace.append({"lemma": "L4", "case": "i", "terms": len(fin), "zeros_before": n})
                    residual = Poly.zero(XYZ)
                    continue
            if n and any(not p.is_rational() for p in pts):
                fin = orbit_gram(residual, pts)
                if fin is not None:
                    terms += fin
                    trace.append({"lemma": "L4", "case": "orbit-gram", "terms": len(fin), "zeros_before": n})
                    residual = Poly.zero(XYZ)
                    continue
            if n >= 3:
                fin = lemma4_decompose(residual, Z)
                terms += fin
                trace.append({"lemma": "L4", "case": "i", "terms": len(fin), "zeros_before": n})
                residual = Poly.zero(XYZ)
                continue
            if n == 0:
                step = lemma1_step(residual, mode)
            elif n == 1:
                step = _with_fallback(lemma2_step, residual, pts[0], mode)
            else:
                step = _with_fallback(lemma3_step, residual, pts[:2], mode)
            if not step.check(residual):
                raise InternalError(f"{step.lemma} step broke the identity")
            terms += step.terms
            trace.append(step.summary())
            residual = step.residual
            known = step.zeros_after
    except BudgetExceeded as exc:
        exc.partial = {"terms": terms, "trace": trace, "residual": residual}
        raise
    if not residual.is_zero():
        raise BudgetExceeded("ladder did not terminate within the step budget",
                             partial={"terms": terms, "trace": trace, "residual": residual})
    return LadderResult(terms, trace)


def _with_fallback(step_fn, f, zeros, mode):
    try:
        return step_fn(f, zeros, mode)
    except _AnchorFailed as exc:
        if mode == EXACT:
            raise
        log.info("anchoring failed (%s); retrying in exact mode", exc)
        return step_fn(f, zeros, EXACT)


def decompose_terms(f: Poly, mode: str = HYBRID) -> LadderResult:
    """Validate, gate on nonnegativity, and run the ladder."""
    if f.is_zero():
        return LadderResult([], [])
    if f.nvars != 3 or not f.is_homogeneous(4):
        raise ValueError("decompose expects a homogeneous ternary quartic")
    w = find_negative_point(f)
    if w is not None:
        raise NotPSDError("form takes a negative value", witness=w, value=f.evaluate(w))
    try:
        return run_ladder(f, mode)
    except (InternalError, NotPSDError, _AnchorFailed):
        w = psd_witness(f)
        if w is not None:
            raise NotPSDError("form takes a negative value", witness=w, value=f.evaluate(w)) from None
        if mode == HYBRID:
            return run_ladder(f, EXACT)
        raise


def decompose(f: Poly, mode: str = HYBRID) -> Certificate:
    """A verified certificate ``f = sum w_i g_i^2`` with quadratic ``g_i``."""
    res = decompose_terms(f, mode)
    cert = Certificate(f, res.terms, res.trace)
    report = verify(cert)
    if not report.passed:
        raise InternalError(f"certificate failed verification: {report.message}")
    return cert
