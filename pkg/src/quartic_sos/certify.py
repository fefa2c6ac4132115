"""Sum-of-squares certificates: expansion, exact verification and a stable
JSON encoding."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .forms import XYZ, Poly, UniPoly, format_rational
from .realalg import RealAlgebraic, Root, common_gen, root_of, sign

RATIONAL = "QQ"


@dataclass
class FieldInfo:
    """Where the coefficients live: ``QQ`` or ``QQ(theta)`` with ``theta``
    the root of ``poly`` inside ``[lo, hi]``."""

    gen: Optional[Root] = None

    @property
    def is_rational(self) -> bool:
        return self.gen is None

    def describe(self):
        if self.gen is None:
            return RATIONAL
        return {
            "minpoly": [_enc_rat(c) for c in self.gen.poly.primitive().c],
            "interval": [_enc_rat(self.gen.lo), _enc_rat(self.gen.hi)],
        }


@dataclass
class Certificate:
    """``input == sum(w * g**2 for w, g in terms)`` once :func:`verify`
    has confirmed it."""

    input: Poly
    terms: List[Tuple[object, Poly]]
    trace: List[dict] = field(default_factory=list)
    verified: bool = False
    field: Optional[FieldInfo] = None

    def __post_init__(self):
        if self.field is None:
            self.field = field_of(self.input, self.terms)


@dataclass
class VerifyReport:
    passed: bool
    residual: Poly
    negative_weights: List[int]
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


def _values(f: Poly, terms) -> list:
    vals = list(f.terms.values())
    for w, g in terms:
        vals.append(w)
        vals.extend(g.terms.values())
    return vals


def field_of(f: Poly, terms) -> FieldInfo:
    gen, _ = common_gen([v for v in _values(f, terms) if isinstance(v, RealAlgebraic)])
    return FieldInfo(gen)


def normalise(cert: Certificate) -> Certificate:
    """Re-express every coefficient over the single generator of
    ``cert.field``."""
    gen = cert.field.gen
    if gen is None:
        return cert
    vals = _values(cert.input, cert.terms)
    g2, reps = common_gen(vals)
    it = iter(RealAlgebraic._lift(g2, r) for r in reps)

    def take(f: Poly) -> Poly:
        return Poly({e: next(it) for e in f.terms}, f.vars)

    f = take(cert.input)
    terms = []
    for w, g in cert.terms:
        w2 = next(it)
        terms.append((w2, take(g)))
    return Certificate(f, terms, cert.trace, cert.verified, FieldInfo(g2))


def expand(cert: Certificate) -> Poly:
    cert = normalise(cert)
    acc = Poly.zero(cert.input.vars)
    for w, g in cert.terms:
        acc = acc + (g * g).scale(w)
    return acc


def verify(cert: Certificate) -> VerifyReport:
    """Exact check of the identity and of the signs of the weights."""
    residual = expand(cert) - normalise(cert).input
    # Poly drops coefficients that are exactly zero; confirm the rest by sign
    nonzero = {e: c for e, c in residual.terms.items() if sign(c) != 0}
    residual = Poly(nonzero, cert.input.vars)
    bad = [i for i, (w, _) in enumerate(cert.terms) if sign(w) < 0]
    passed = residual.is_zero() and not bad
    if passed:
        msg = "identity holds exactly"
    elif bad:
        msg = f"negative weight at term(s) {bad}"
    else:
        msg = f"residual has {len(residual.terms)} nonzero coefficient(s)"
    cert.verified = passed
    return VerifyReport(passed, residual, bad, msg)


# ---------------------------------------------------------------------------
# JSON


def _enc_rat(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _dec_rat(s) -> Fraction:
    return Fraction(s)


def encode_number(v, gen: Optional[Root] = None):
    if isinstance(v, int):
        v = Fraction(v)
    if isinstance(v, Fraction):
        return _enc_rat(v)
    p = v.defining
    lo, hi = v.interval
    out = {"minpoly": [_enc_rat(c) for c in p.primitive().c], "interval": [_enc_rat(lo), _enc_rat(hi)]}
    if gen is not None and v.gen is gen:
        out["field_rep"] = [_enc_rat(c) for c in v._reduced().c]
    return out


def decode_number(obj, gen: Optional[Root] = None):
    if isinstance(obj, (str, int)):
        return _dec_rat(obj)
    if gen is not None and "field_rep" in obj:
        return RealAlgebraic._lift(gen, UniPoly([_dec_rat(c) for c in obj["field_rep"]]))
    p = UniPoly([_dec_rat(c) for c in obj["minpoly"]])
    lo, hi = (_dec_rat(c) for c in obj["interval"])
    return RealAlgebraic.from_root(p, lo, hi)


def _mono_key(e: Sequence[int], vars=XYZ) -> str:
    parts = []
    for name, k in zip(vars, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts) or "1"


_MONO = re.compile(r"^([a-z])(?:\^(\d+))?$")


def _parse_mono(key: str, vars=XYZ) -> Tuple[int, ...]:
    e = [0] * len(vars)
    if key == "1":
        return tuple(e)
    for part in key.split("*"):
        m = _MONO.match(part.strip())
        if not m or m.group(1) not in vars:
            raise ValueError(f"bad monomial {key!r}")
        e[vars.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(e)


def encode_form(f: Poly, gen=None) -> Dict[str, object]:
    return {_mono_key(e, f.vars): encode_number(c, gen) for e, c in f.sorted_terms()}


def decode_form(obj: Dict[str, object], gen=None, vars=XYZ) -> Poly:
    return Poly({_parse_mono(k, vars): decode_number(v, gen) for k, v in obj.items()}, vars)


def to_json(cert: Certificate) -> str:
    """Deterministic JSON text (same certificate, same bytes)."""
    gen = cert.field.gen
    doc = {
        "input": encode_form(cert.input, gen),
        "field": cert.field.describe(),
        "terms": [{"weight": encode_number(w, gen), "form": encode_form(g, gen)} for w, g in cert.terms],
        "verified": bool(cert.verified),
        "trace": cert.trace,
    }
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return _enc_rat(o)
    if isinstance(o, RealAlgebraic):
        return encode_number(o)
    if isinstance(o, float):
        return repr(o)
    raise TypeError(f"cannot encode {type(o).__name__}")


def from_json(text: str) -> Certificate:
    doc = json.loads(text)
    fdesc = doc.get("field", RATIONAL)
    gen = None
    if fdesc != RATIONAL:
        p = UniPoly([_dec_rat(c) for c in fdesc["minpoly"]])
        lo, hi = (_dec_rat(c) for c in fdesc["interval"])
        gen = root_of(p, lo, hi)
        if gen.is_rational:
            gen = None
    f = decode_form(doc["input"], gen)
    terms = [(decode_number(t["weight"], gen), decode_form(t["form"], gen)) for t in doc.get("terms", [])]
    cert = Certificate(f, terms, doc.get("trace", []), False)
    return cert


def render_text(cert: Certificate) -> str:
    """Human-readable listing: one ``weight * (form)^2`` per line."""
    lines = [f"input: {cert.input}"]
    if cert.field.gen is not None:
        g = cert.field.gen
        lines.append(f"field: QQ(theta), theta = root({g.poly.primitive().to_str('t')}, "
                     f"[{format_rational(g.lo)}, {format_rational(g.hi)}])")
    else:
        lines.append("field: QQ")
    if not cert.terms:
        lines.append("certificate: 0 (no squares)")
    for w, g in cert.terms:
        ws = format_rational(w) if isinstance(w, Fraction) else str(w)
        lines.append(f"  {ws} * ({g})^2")
    lines.append(f"verified: {'yes' if cert.verified else 'no'}")
    return "\n".join(lines)
