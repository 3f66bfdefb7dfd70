"""Parser for the function-expression language.

Grammar (ASCII, whitespace-insensitive)::

    func     := term ('+' term)*
    term     := mono | 'Tr(' mono ')' | 'L{' hexlist '}(' mono ')' | hexconst
    mono     := [hexconst '*'] 'x^' uint | 'x'
    hexlist  := hexconst (',' hexconst)*
    hexconst := '0x' [0-9a-f]+

``L{c0,c1,...}(m)`` is the linearized polynomial sum c_i X^(2^i) applied to
the monomial m.  Parsing is field-independent; range checks against a field
happen in :func:`check_expr`.
"""

import re
from dataclasses import dataclass


class ExprError(ValueError):
    """Malformed expression; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


@dataclass(frozen=True)
class Monomial:
    coefficient: int
    exponent: int


@dataclass(frozen=True)
class TraceTerm:
    inner: Monomial


@dataclass(frozen=True)
class LinTerm:
    coeffs: tuple
    inner: Monomial


@dataclass(frozen=True)
class Constant:
    value: int


@dataclass(frozen=True)
class FuncExpr:
    terms: tuple

    def __str__(self):
        return format_expr(self)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<hex>0x[0-9a-fA-F]+)
  | (?P<uint>[0-9]+)
  | (?P<tr>Tr\s*\()
  | (?P<lin>L\s*\{)
  | (?P<x>x)
  | (?P<sym>[+*^(){},])
    """,
    re.VERBOSE,
)


def _tokenize(src):
    pos = 0
    out = []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprError(f"unknown symbol {src[pos]!r}", _byte_offset(src, pos))
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            out.append((kind if kind != "sym" else text, text, _byte_offset(src, pos)))
        pos = m.end()
    out.append(("end", "", _byte_offset(src, len(src))))
    return out


def _byte_offset(src, pos):
    return len(src[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind, what=None):
        tok = self.peek()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprError(f"expected {what or kind!r}, found {found}", tok[2])
        self.i += 1
        return tok

    def func(self):
        terms = [self.term()]
        while self.peek()[0] == "+":
            self.i += 1
            terms.append(self.term())
        self.take("end", "'+' or end of input")
        return FuncExpr(tuple(terms))

    def term(self):
        kind = self.peek()[0]
        if kind == "tr":
            self.i += 1
            inner = self.mono()
            self.take(")", ")")
            return TraceTerm(inner)
        if kind == "lin":
            self.i += 1
            coeffs = [self.hexconst()]
            while self.peek()[0] == ",":
                self.i += 1
                coeffs.append(self.hexconst())
            self.take("}", "}")
            self.take("(", "(")
            inner = self.mono()
            self.take(")", ")")
            return LinTerm(tuple(coeffs), inner)
        if kind == "hex" and self.peek(1)[0] != "*":
            return Constant(self.hexconst())
        return self.mono()

    def mono(self):
        coef = 1
        if self.peek()[0] == "hex":
            coef = self.hexconst()
            self.take("*", "*")
        self.take("x", "x")
        if self.peek()[0] == "^":
            self.i += 1
            return Monomial(coef, int(self.take("uint", "exponent")[1]))
        return Monomial(coef, 1)

    def hexconst(self):
        return int(self.take("hex", "hex constant")[1], 16)


def parse_expr(src):
    return _Parser(src).func()


def _format_mono(m):
    body = "x" if m.exponent == 1 else f"x^{m.exponent}"
    return body if m.coefficient == 1 else f"0x{m.coefficient:x}*{body}"


def format_expr(expr):
    parts = []
    for t in expr.terms:
        if isinstance(t, Monomial):
            parts.append(_format_mono(t))
        elif isinstance(t, TraceTerm):
            parts.append(f"Tr({_format_mono(t.inner)})")
        elif isinstance(t, LinTerm):
            coeffs = ",".join(f"0x{c:x}" for c in t.coeffs)
            parts.append(f"L{{{coeffs}}}({_format_mono(t.inner)})")
        else:
            parts.append(f"0x{t.value:x}")
    return " + ".join(parts)


def check_expr(expr, spec):
    """Range-check every exponent and constant of ``expr`` against ``spec``."""
    limit = spec.size - 1

    def mono(m):
        if m.exponent > limit:
            raise ExprError(f"exponent {m.exponent} overflows [0, {limit}] for n={spec.n}")
        if m.coefficient > limit:
            raise ExprError(f"coefficient 0x{m.coefficient:x} is not in GF(2^{spec.n})")

    for t in expr.terms:
        if isinstance(t, Monomial):
            mono(t)
        elif isinstance(t, TraceTerm):
            mono(t.inner)
        elif isinstance(t, LinTerm):
            mono(t.inner)
            if len(t.coeffs) > spec.n:
                raise ExprError(f"linearized polynomial has {len(t.coeffs)} coefficients, n={spec.n}")
            for c in t.coeffs:
                if c > limit:
                    raise ExprError(f"coefficient 0x{c:x} is not in GF(2^{spec.n})")
        elif t.value > limit:
            raise ExprError(f"constant 0x{t.value:x} is not in GF(2^{spec.n})")
