import json
import random
from fractions import Fraction

import pytest

from conftest import SCHEIDERER, random_sos
from quartic_sos.certify import (
    Certificate,
    decode_number,
    encode_number,
    expand,
    from_json,
    render_text,
    to_json,
    verify,
)
from quartic_sos.cli import parse_polynomial
from quartic_sos.forms import Poly, UniPoly
from quartic_sos.ladder import decompose
from quartic_sos.realalg import RealAlgebraic, real_roots, sign

P = parse_polynomial
HALF = Fraction(1, 2)


def reference_four_zero_terms():
    forms = ["-2*x^2+5*x*z+2*y^2-5*y*z", "-2*y^2+5*y*x+2*z^2-5*z*x", "-2*z^2+5*z*y+2*x^2-5*x*y"]
    return [(HALF, P(s, None)) for s in forms]


def negative_root(p: UniPoly, which: int = 0):
    negs = [v for v, _ in real_roots(p) if v < 0]
    return negs[which]


def scheiderer_terms(beta):
    x, y, z = Poly.gens()
    inv = 1 / beta
    a = (x * x).scale(2) + (y * y).scale(beta) - y * z + (z * z).scale(2 + inv)
    b = (x * y).scale(2) - (y * y).scale(inv) + (x * z).scale(2 * inv) + (y * z).scale(beta) - z * z
    return [(Fraction(1, 4), a), (-beta / 4, b)]


def test_empty_certificate_expands_to_zero():
    cert = Certificate(Poly.zero(), [])
    assert expand(cert).is_zero()
    assert verify(cert).passed


def test_reference_four_zero_certificate(four_zero_form):
    cert = Certificate(four_zero_form, reference_four_zero_terms())
    assert expand(cert) == four_zero_form
    report = verify(cert)
    assert report.passed and cert.verified
    assert report.residual.is_zero()


def test_perturbed_weight_fails(four_zero_form):
    terms = reference_four_zero_terms()
    terms[0] = (HALF + Fraction(1, 1000), terms[0][1])
    cert = Certificate(four_zero_form, terms)
    report = verify(cert)
    assert not report.passed and not cert.verified
    assert not report.residual.is_zero()


def test_negative_weight_fails():
    x, _, _ = Poly.gens()
    cert = Certificate((x * x * x * x).scale(-1), [(-1, x * x)])
    report = verify(cert)
    assert report.residual.is_zero()
    assert not report.passed and report.negative_weights == [0]


def test_reference_weight_polynomial_has_no_real_root():
    # t^4 - t + 1 has no real root, so the reference weight cannot be formed
    assert real_roots(UniPoly([1, -1, 0, 0, 1])) == []


@pytest.mark.parametrize("which", [0, 1])
def test_scheiderer_identity_with_cubic_root(which):
    # the reference squares sum to g - 2x^2y^2 + 2x^2z^2 for either negative
    # root of t^3 - 4t - 1
    beta = negative_root(UniPoly([-1, -4, 0, 1]), which)
    g2 = P(SCHEIDERER + "-2*x^2*y^2+2*x^2*z^2")
    cert = Certificate(g2, scheiderer_terms(beta))
    assert verify(cert).passed
    assert cert.field.gen is not None


def test_scheiderer_form_is_not_matched_by_reference_squares():
    beta = negative_root(UniPoly([-1, -4, 0, 1]))
    cert = Certificate(P(SCHEIDERER), scheiderer_terms(beta))
    report = verify(cert)
    assert not report.passed
    assert set(report.residual.terms) == {(2, 2, 0), (2, 0, 2)}


def test_spot_check_agrees_with_verify():
    rng = random.Random(99)
    for _ in range(5):
        f = random_sos(rng, 2)
        cert = decompose(f)
        assert verify(cert).passed
        for _ in range(20):
            pt = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3))
            acc = sum((w * g.evaluate(pt) ** 2 for w, g in cert.terms), Fraction(0))
            assert acc == f.evaluate(pt)


def test_json_round_trip_rational(four_zero_form):
    cert = decompose(four_zero_form)
    text = to_json(cert)
    doc = json.loads(text)
    assert set(doc) == {"input", "field", "terms", "verified", "trace"}
    assert doc["field"] == "QQ" and doc["verified"] is True
    assert all("/" in v for v in doc["input"].values())
    back = from_json(text)
    assert back.input == cert.input
    assert verify(back).passed
    assert to_json(back) == text


def test_json_is_deterministic(cyclic_form):
    a = to_json(decompose(cyclic_form))
    b = to_json(decompose(cyclic_form))
    assert a == b
    assert a.endswith("\n")


def test_json_round_trip_algebraic():
    beta = negative_root(UniPoly([-1, -4, 0, 1]))
    g2 = P(SCHEIDERER + "-2*x^2*y^2+2*x^2*z^2")
    cert = Certificate(g2, scheiderer_terms(beta))
    verify(cert)
    text = to_json(cert)
    doc = json.loads(text)
    assert doc["field"]["minpoly"] == ["-1/1", "-4/1", "0/1", "1/1"]
    back = from_json(text)
    assert verify(back).passed
    assert to_json(back) == text


def test_number_encoding():
    assert encode_number(Fraction(-3, 4)) == "-3/4"
    assert encode_number(5) == "5/1"
    r = real_roots(UniPoly([-2, 0, 1]))[1][0]
    enc = encode_number(r)
    assert enc["minpoly"] == ["-2/1", "0/1", "1/1"]
    back = decode_number(enc)
    assert isinstance(back, RealAlgebraic) and sign(back - r) == 0
    assert decode_number("7/3") == Fraction(7, 3)


def test_render_text(four_zero_form):
    cert = Certificate(four_zero_form, reference_four_zero_terms())
    verify(cert)
    text = render_text(cert)
    assert "field: QQ" in text
    assert "1/2 * (" in text
    assert text.endswith("verified: yes")
