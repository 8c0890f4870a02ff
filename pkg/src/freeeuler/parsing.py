"""Text form of polynomials and vector fields.

Grammar (whitespace is insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' INT]
    atom   := NUMBER | 'i' | 's' INT | '(' expr ')'

``a/b`` is only allowed with a constant divisor.  Examples::

    (1/2)*s1^2 - i*s2*s1
    (1/2+1/3*i)*s1*s2 + 3

The formatter emits a subset of this grammar, so ``parse(format(P)) == P``.
Vector fields are written as a parenthesized, comma separated tuple:
``(s2, -s1)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import NcPoly, VectorField
from .errors import ParseError
from .scalars import I, GaussianRational, format_float

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<gen>s\d+)|(?P<imag>i)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int, exact: bool):
        self.text = text
        self.n = n
        self.exact = exact
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", self.text, pos)

    def error(self, message):
        raise ParseError(message, self.text, self.peek()[2])

    def parse(self) -> NcPoly:
        if self.peek()[0] == "end":
            self.error("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return result

    def expr(self) -> NcPoly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        result = self.term().scale(sign)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> NcPoly:
        result = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op, pos = self.take()[1], self.tokens[self.i - 1][2]
            f = self.factor()
            if op == "*":
                result = result * f
            else:
                if f.degree > 0 or f.is_zero():
                    raise ParseError("divisor must be a nonzero constant", self.text, pos)
                c = f.coefficient(())
                if self.exact:
                    inv = GaussianRational(c.real, c.imag).reciprocal() if isinstance(c, GaussianRational) else Fraction(1) / c
                else:
                    inv = 1 / c
                result = result.scale(inv)
        return result

    def factor(self) -> NcPoly:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be a nonnegative integer", self.text, pos)
            base = base ** int(val)
        return base

    def atom(self) -> NcPoly:
        kind, val, pos = self.take()
        if kind == "num":
            if self.exact:
                return NcPoly.constant(Fraction(val), self.n, True)
            return NcPoly.constant(float(val), self.n, False)
        if kind == "imag":
            return NcPoly.constant(I if self.exact else 1j, self.n, self.exact)
        if kind == "gen":
            j = int(val[1:])
            if not 1 <= j <= self.n:
                raise ParseError(f"generator index {j} out of range 1..{self.n}", self.text, pos)
            return NcPoly.gen(j, self.n, self.exact)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, pos)


def parse_poly(text: str, n: int, mode: str = "exact") -> NcPoly:
    """Parse a polynomial in ``n`` generators."""
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    return _Parser(text, n, mode == "exact").parse()


def _split_top_level(text: str):
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", text, k)
        elif ch == "," and depth == 0:
            parts.append((text[start:k], start))
            start = k + 1
    if depth:
        raise ParseError("unbalanced '('", text, len(text))
    parts.append((text[start:], start))
    return parts


def parse_field(text: str, n: int, mode: str = "exact") -> VectorField:
    """Parse ``(P_1, ..., P_n)``."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ParseError("a vector field is written as '(P_1, ..., P_n)'", text, 0)
    offset = text.index("(") + 1
    parts = _split_top_level(body[1:-1])
    if len(parts) != n:
        raise ParseError(f"expected {n} components, found {len(parts)}", text, offset)
    comps = []
    for part, start in parts:
        try:
            comps.append(parse_poly(part, n, mode))
        except ParseError as exc:
            pos = None if exc.pos is None else exc.pos + offset + start
            raise ParseError(str(exc).split(" at position")[0], text, pos) from None
    return VectorField(comps)


# ---------------------------------------------------------------------------
# formatting


def format_word(word) -> str:
    if not word:
        return "1"
    parts = []
    k = 0
    while k < len(word):
        run = 1
        while k + run < len(word) and word[k + run] == word[k]:
            run += 1
        parts.append(f"s{word[k]}" if run == 1 else f"s{word[k]}^{run}")
        k += run
    return "*".join(parts)


def _rational(q) -> str:
    q = Fraction(q)
    return str(q) if q.denominator == 1 else f"({q})"


def _coeff_exact(c):
    """Return ``(sign, text)``; ``text`` is empty for a unit coefficient."""
    if isinstance(c, GaussianRational) and c.imag != 0:
        if c.real == 0:
            im = Fraction(c.imag)
            sign = -1 if im < 0 else 1
            mag = abs(im)
            return sign, "i" if mag == 1 else f"{_rational(mag)}*i"
        im = Fraction(c.imag)
        op = "-" if im < 0 else "+"
        return 1, f"({Fraction(c.real)}{op}{abs(im)}*i)"
    q = Fraction(c)
    sign = -1 if q < 0 else 1
    q = abs(q)
    return sign, "" if q == 1 else _rational(q)


def _coeff_float(c):
    c = complex(c)
    if c.imag == 0:
        sign = -1 if c.real < 0 else 1
        mag = abs(c.real)
        return sign, "" if mag == 1 else format(mag, ".17g")
    if c.real == 0:
        sign = -1 if c.imag < 0 else 1
        mag = abs(c.imag)
        return sign, "i" if mag == 1 else f"{format(mag, '.17g')}*i"
    return 1, f"({format_float(c)})"


def format_poly(P: NcPoly) -> str:
    """Canonical text form: terms in (length, lex) order."""
    if P.is_zero():
        return "0"
    out = []
    for w, c in P.items():
        sign, coef = _coeff_exact(c) if P.exact else _coeff_float(c)
        mono = format_word(w) if w else ""
        if coef and mono:
            body = f"{coef}*{mono}"
        else:
            body = coef or mono or "1"
        if not out:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append((" - " if sign < 0 else " + ") + body)
    return "".join(out)


def format_field(a: VectorField) -> str:
    return "(" + ", ".join(format_poly(c) for c in a.components) + ")"
