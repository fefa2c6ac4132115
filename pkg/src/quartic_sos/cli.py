"""Command-line front end.

Subcommands: ``decompose``, ``zeros``, ``verify``, ``min-sphere`` and
``resultant``.  Exit codes: 0 success, 1 mathematical rejection (not PSD,
failed verification), 2 budget or timeout, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import signal
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import certify, ladder
from .elimination import resultant
from .errors import BudgetExceeded, DegenerateSystem, NotPSDError, QuarticSOSError
from .forms import XYZ, Poly, format_rational
from .realalg import RealAlgebraic, degree_budget
from .zerofinder import INFINITE, projective_real_zeros

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3

ENV_PREFIX = "QUARTIC_SOS_"


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class _Parser:
    """expr := term (('+'|'-') term)* ; term := unary ('*' unary)* ;
    unary := ('+'|'-') unary | power ; power := atom ('^' int)? ;
    atom := number ('/' number)? | var | '(' expr ')'"""

    def __init__(self, text: str, vars=XYZ):
        self.s = text
        self.i = 0
        self.vars = vars

    def peek(self) -> str:
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.i)
        self.i += 1

    def parse(self) -> Poly:
        if not self.peek():
            raise ParseError("empty input", self.i)
        p = self.expr()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.i)
        return p

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.s[self.i]
            self.i += 1
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.peek() == "*":
            self.i += 1
            acc = acc * self.unary()
        return acc

    def unary(self) -> Poly:
        c = self.peek()
        if c == "-":
            self.i += 1
            return -self.unary()
        if c == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.i += 1
            self.peek()
            start = self.i
            while self.i < len(self.s) and self.s[self.i].isdigit():
                self.i += 1
            if start == self.i:
                raise ParseError("expected a nonnegative integer exponent", start)
            base = base ** int(self.s[start:self.i])
        return base

    def number(self) -> int:
        self.peek()
        start = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if start == self.i:
            raise ParseError("expected a number", start)
        return int(self.s[start:self.i])

    def atom(self) -> Poly:
        c = self.peek()
        if c == "(":
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        if c.isdigit():
            num = self.number()
            if self.peek() == "/":
                self.i += 1
                den = self.number()
                if den == 0:
                    raise ParseError("division by zero", self.i)
                return Poly.const(Fraction(num, den), self.vars)
            return Poly.const(Fraction(num), self.vars)
        if c in self.vars:
            self.i += 1
            return Poly.gens(self.vars)[self.vars.index(c)]
        if not c:
            raise ParseError("unexpected end of input", self.i)
        raise ParseError(f"unexpected {c!r}", self.i)


def parse_polynomial(text: str, degree: Optional[int] = 4) -> Poly:
    """Parse and expand; ``degree`` (if given) is required homogeneity."""
    p = _Parser(text).parse()
    if p.is_zero():
        return p
    if not p.is_homogeneous():
        raise ValueError("polynomial is not homogeneous")
    if degree is not None and p.degree != degree:
        raise ValueError(f"expected a form of degree {degree}, got {p.degree}")
    return p


def render(f: Poly) -> str:
    """Canonical text (graded lex order); parsing it gives ``f`` back."""
    return str(f)


# ---------------------------------------------------------------------------
# Configuration


@dataclass
class Config:
    mode: str = ladder.HYBRID
    max_degree: int = 64
    precision: int = 128
    output: str = "text"
    timeout: Optional[float] = None

    def __post_init__(self):
        if self.mode not in (ladder.EXACT, ladder.HYBRID):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_degree <= 0 or self.precision <= 0:
            raise ValueError("budgets must be positive")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.output not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output!r}")


def _env(name: str, default, conv=str):
    raw = os.environ.get(ENV_PREFIX + name)
    return default if raw is None or raw == "" else conv(raw)


class _Parser3(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, help="polynomial in x, y, z")
    common.add_argument("--mode", choices=[ladder.EXACT, ladder.HYBRID], default=_env("MODE", ladder.HYBRID))
    common.add_argument("--max-degree", type=int, default=_env("MAX_DEGREE", 64, int),
                        help="largest algebraic degree allowed (default 64)")
    common.add_argument("--precision", type=int, default=_env("PRECISION", 128, int),
                        help="bits for printed enclosures (default 128)")
    common.add_argument("--format", dest="output", choices=["text", "json"], default=_env("FORMAT", "text"))
    common.add_argument("--timeout", type=float, default=_env("TIMEOUT", None, float), help="seconds")
    common.add_argument("--json", dest="json_path", help="also write JSON output to this file")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser3(prog="quartic-sos", description="Exact sum-of-squares certificates for nonnegative ternary quartics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser3)
    sub.add_parser("decompose", parents=[common], help="certificate f = sum w_i g_i^2")
    sub.add_parser("zeros", parents=[common], help="real projective zeros of a PSD form")
    v = sub.add_parser("verify", parents=[common], help="check a JSON certificate")
    v.add_argument("--cert", required=True, help="certificate JSON file")
    sub.add_parser("min-sphere", parents=[common], help="exact minimum on the unit sphere")
    r = sub.add_parser("resultant", parents=[common], help="res(f, df/dv, v)")
    r.add_argument("--var", choices=list(XYZ), default="x")
    return p


class _Timeout(Exception):
    pass


@contextmanager
def _deadline(seconds: Optional[float]):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def handler(signum, frame):
        raise _Timeout()

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


# ---------------------------------------------------------------------------
# Output helpers


def _dyadic_enclosure(v: RealAlgebraic, bits: int):
    """Enclosure with endpoints rounded outward to multiples of 2^-bits."""
    v.refine(Fraction(1, 2 ** (bits + 1)))
    lo, hi = v.enclosure()
    scale = 2**bits
    return Fraction(math.floor(lo * scale), scale), Fraction(math.ceil(hi * scale), scale)


def _num_text(v, bits: int) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    v.refine(Fraction(1, 2**bits))
    return f"{v}  ~ {v.approx(15)}"


def _num_json(v, bits: int):
    if isinstance(v, Fraction):
        return format_rational(v)
    v.refine(Fraction(1, 2**bits))
    return certify.encode_number(v)


def _point_json(P, bits):
    return [_num_json(c, bits) for c in P.coords]


def _emit(cfg: Config, text: str, doc: dict, json_path: Optional[str]):
    payload = json.dumps(doc, indent=2, default=certify._json_default) + "\n"
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    sys.stdout.write(payload if cfg.output == "json" else text + "\n")


# ---------------------------------------------------------------------------
# Commands


def _cmd_decompose(f: Poly, cfg: Config, args) -> int:
    cert = ladder.decompose(f, cfg.mode)
    if cfg.output == "json" or args.json_path:
        payload = certify.to_json(cert)
        if args.json_path:
            with open(args.json_path, "w", encoding="utf-8") as fh:
                fh.write(payload)
        if cfg.output == "json":
            sys.stdout.write(payload)
            return EXIT_OK
    sys.stdout.write(certify.render_text(cert) + "\n")
    return EXIT_OK


def _cmd_zeros(f: Poly, cfg: Config, args) -> int:
    Z = projective_real_zeros(f)
    bits = cfg.precision
    if Z.kind == INFINITE:
        lines = [str(l) for l in Z.lines]
        squares = [str(q) for q in Z.square_factors]
        text = "Z(f) is infinite"
        if lines:
            text += "; lines: " + ", ".join(lines)
        if squares:
            text += "; square factors: " + ", ".join(squares)
        doc = {"input": render(f), "kind": "infinite", "lines": lines, "square_factors": squares}
    elif not Z.points:
        text = "Z(f) is empty"
        doc = {"input": render(f), "kind": "empty", "points": []}
    else:
        rows = [f"Z(f) has {len(Z.points)} point(s):"]
        for P in Z.points:
            rows.append("  (" + ", ".join(_num_text(c, bits) for c in P.coords) + ")")
        text = "\n".join(rows)
        doc = {"input": render(f), "kind": "finite", "points": [_point_json(P, bits) for P in Z.points]}
    _emit(cfg, text, doc, args.json_path)
    return EXIT_OK


def _cmd_verify(f: Poly, cfg: Config, args) -> int:
    with open(args.cert, encoding="utf-8") as fh:
        cert = certify.from_json(fh.read())
    cert.input = f
    cert.field = certify.field_of(f, cert.terms)
    rep = certify.verify(cert)
    doc = {"input": render(f), "verified": rep.passed, "message": rep.message,
           "residual": certify.encode_form(rep.residual), "negative_weights": rep.negative_weights}
    text = f"verified: {'yes' if rep.passed else 'no'} ({rep.message})"
    if not rep.residual.is_zero():
        text += f"\nresidual: {rep.residual}"
    _emit(cfg, text, doc, args.json_path)
    return EXIT_OK if rep.passed else EXIT_REJECTED


def _cmd_min_sphere(f: Poly, cfg: Config, args) -> int:
    m = ladder.min_on_sphere(f)
    bits = cfg.precision
    v = m.value
    if isinstance(v, RealAlgebraic):
        lo, hi = _dyadic_enclosure(v, bits)
    else:
        lo = hi = v
    text = "\n".join([
        f"minimum: {_num_text(v, bits)}",
        f"enclosure: [{format_rational(lo)}, {format_rational(hi)}]",
        "witness: (" + ", ".join(_num_text(c, 53) for c in m.witness.coords) + ")",
        f"eliminant: {m.eliminant.to_str('t')}",
    ])
    doc = {
        "input": render(f),
        "minimum": _num_json(v, bits),
        "enclosure": [format_rational(lo), format_rational(hi)],
        "approx": float(v),
        "witness": _point_json(m.witness, bits),
        "eliminant": [format_rational(c) for c in m.eliminant.c],
    }
    _emit(cfg, text, doc, args.json_path)
    return EXIT_OK


def _cmd_resultant(f: Poly, cfg: Config, args) -> int:
    R = resultant(f, f.derivative(args.var), args.var)
    doc = {"input": render(f), "var": args.var, "resultant": render(R) if isinstance(R, Poly) else format_rational(R)}
    _emit(cfg, doc["resultant"], doc, args.json_path)
    return EXIT_OK


_COMMANDS = {
    "decompose": _cmd_decompose,
    "zeros": _cmd_zeros,
    "verify": _cmd_verify,
    "min-sphere": _cmd_min_sphere,
    "resultant": _cmd_resultant,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = Config(args.mode, args.max_degree, args.precision, args.output, args.timeout)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        f = parse_polynomial(args.input, degree=None if args.command == "resultant" else 4)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "resultant" and (f.is_zero() or not f.is_homogeneous()):
        print("error: resultant needs a nonzero form", file=sys.stderr)
        return EXIT_USAGE
    dtok = degree_budget.set(cfg.max_degree)
    try:
        with _deadline(cfg.timeout):
            return _COMMANDS[args.command](f, cfg, args)
    except _Timeout:
        print("error: timed out", file=sys.stderr)
        return EXIT_BUDGET
    except BudgetExceeded as exc:
        print(f"error: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NotPSDError as exc:
        w = exc.witness
        where = "" if w is None else " at (" + ", ".join(str(c) for c in w) + ")"
        print(f"not PSD: {exc}{where}", file=sys.stderr)
        return EXIT_REJECTED
    except (DegenerateSystem, QuarticSOSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        degree_budget.reset(dtok)


if __name__ == "__main__":
    sys.exit(main())
