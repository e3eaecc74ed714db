"""Element grammar: parser and canonical printer.

Grammar (nodes display 1-based)::

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' exponent]
    atom   := INT | 'q' | gen | '(' expr ')'
    gen    := ('f'|'F') '[' INT ',' INT ']'
    exponent := ['-'] INT | '(' ['-'] INT ['/' INT] ')'

Fractional exponents (halves) are only legal on the atom ``q``.  A
parenthesized exponent after an ``F`` atom denotes the divided power
``F[i,m]^(r)``; a bare integer exponent is an ordinary power.  Division
requires a scalar divisor.  ``parse`` normalizes as it builds, so the
result is always a normal-form Element; ``element_to_str`` emits text the
parser maps back to the same Element.
"""

from __future__ import annotations

import re
from fractions import Fraction

from qboson.scalar import Scalar, ScalarError, scalar_to_str


class ParseError(ValueError):
    """Syntax or validation error, carrying the offending position."""

    def __init__(self, message, pos):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([fFq])|([\[\],+\-*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError("unexpected character %r" % text[pos:].lstrip()[0], pos)
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, alg):
        self.tokens = _tokenize(text)
        self.k = 0
        self.alg = alg

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if kind == "end" or val != value:
            raise ParseError("expected %r" % value, pos)

    def parse(self):
        x = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return x

    def expr(self):
        negate = False
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            negate = True
        x = self.term()
        if negate:
            x = -x
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                y = self.term()
                x = x + y if val == "+" else x - y
            else:
                return x

    def term(self):
        x = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                y = self.factor()
                if val == "*":
                    x = x * y
                else:
                    s = _as_scalar(y)
                    if s is None:
                        raise ParseError("division requires a scalar divisor", pos)
                    if s.is_zero():
                        raise ParseError("division by zero", pos)
                    x = x * s.inv() if isinstance(x, Scalar) else x.scaled(s.inv())
            else:
                return x

    def factor(self):
        base, is_q, is_cap_f, gen_key = self.atom()
        kind, val, _ = self.peek()
        if not (kind == "op" and val == "^"):
            return base
        self.next()
        exp, half, parenthesized, pos = self.exponent()
        if half:
            if not is_q:
                raise ParseError("fractional exponents are only allowed on q", pos)
            return self.alg.scalar_elem(Scalar.v_power(exp))
        if is_q:
            return self.alg.scalar_elem(Scalar.q_power(exp))
        if is_cap_f and parenthesized:
            i, m = gen_key
            return self.alg.divided_power(i, m, exp)
        if exp < 0:
            s = _as_scalar(base)
            if s is None:
                raise ParseError("negative powers require a scalar base", pos)
            if s.is_zero():
                raise ParseError("division by zero", pos)
            return self.alg.scalar_elem(s ** exp)
        return base ** exp

    def exponent(self):
        """Returns (value, is_half, parenthesized, pos).

        For is_half the value is the numerator over 2 (a power of v).
        """
        kind, val, pos = self.next()
        if kind == "op" and val == "-":
            kind, val, pos2 = self.next()
            if kind != "int":
                raise ParseError("expected an integer exponent", pos2)
            return -val, False, False, pos
        if kind == "int":
            return val, False, False, pos
        if kind == "op" and val == "(":
            sign = 1
            kind, val, pos2 = self.next()
            if kind == "op" and val == "-":
                sign = -1
                kind, val, pos2 = self.next()
            if kind != "int":
                raise ParseError("expected an integer exponent", pos2)
            num = sign * val
            kind, val, pos3 = self.next()
            if kind == "op" and val == "/":
                kind, den, pos4 = self.next()
                if kind != "int" or den not in (1, 2):
                    raise ParseError("exponent denominator must be 1 or 2", pos4)
                self.expect(")")
                if den == 2:
                    return num, True, True, pos
                return num, False, True, pos
            if kind == "op" and val == ")":
                return num, False, True, pos
            raise ParseError("malformed exponent", pos3)
        raise ParseError("expected an exponent", pos)

    def atom(self):
        """Returns (element, is_q, is_cap_f, gen_key)."""
        kind, val, pos = self.next()
        if kind == "int":
            return self.alg.scalar_elem(Scalar.from_int(val)), False, False, None
        if kind == "name" and val == "q":
            return self.alg.scalar_elem(Scalar.q_power(1)), True, False, None
        if kind == "name":  # f or F
            cap = val == "F"
            self.expect("[")
            i = self._int("node index")
            self.expect(",")
            m = self._int("level")
            self.expect("]")
            if not 1 <= i <= self.alg.datum.n:
                raise ParseError("unknown node index %d (nodes are 1..%d)"
                                 % (i, self.alg.datum.n), pos)
            if cap:
                return self.alg.divided_power(i - 1, m, 1), False, True, (i - 1, m)
            return self.alg.gen(i - 1, m), False, False, (i - 1, m)
        if kind == "op" and val == "(":
            x = self.expr()
            self.expect(")")
            return x, False, False, None
        raise ParseError("expected a number, q, a generator, or '('", pos)

    def _int(self, what):
        sign = 1
        kind, val, pos = self.next()
        if kind == "op" and val == "-":
            sign = -1
            kind, val, pos = self.next()
        if kind != "int":
            raise ParseError("expected an integer %s" % what, pos)
        return sign * val


def _as_scalar(x):
    """The scalar of a scalar-only element, else None."""
    if isinstance(x, Scalar):
        return x
    if not x.terms:
        return Scalar.zero()
    if set(x.terms) == {()}:
        return x.terms[()]
    return None


def parse(text, alg):
    """Parse an expression into a normal-form Element of ``alg``."""
    return _Parser(text, alg).parse()


class _ScalarHost:
    """Minimal algebra stand-in so scalar-only text parses without a datum."""

    class _D:
        n = 0

    datum = _D()

    @staticmethod
    def scalar_elem(s):
        return s

    def gen(self, i, m):  # pragma: no cover - unreachable via grammar (n = 0)
        raise ScalarError("generators are not scalars")


def parse_scalar(text):
    """Parse scalar-only text (no generators) into a Scalar."""
    host = _ScalarHost()
    parser = _Parser(text, host)
    value = parser.parse()
    if isinstance(value, Scalar):
        return value
    raise ParseError("expected a scalar expression", 0)


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------

def monomial_to_str(word):
    if not word:
        return "1"
    parts = []
    for (i, m), group in _runs(word):
        base = "f[%d,%d]" % (i + 1, m)
        parts.append(base if group == 1 else "%s^%d" % (base, group))
    return "*".join(parts)


def _runs(word):
    out = []
    for g in word:
        if out and out[-1][0] == g:
            out[-1][1] += 1
        else:
            out.append([g, 1])
    return [(g, k) for g, k in out]


def element_to_str(x):
    """Canonical text: terms sorted by (length, word) descending."""
    if not x.terms:
        return "0"
    parts = []
    for w in sorted(x.terms, key=lambda w: (len(w), w), reverse=True):
        c = x.terms[w]
        mono = monomial_to_str(w)
        if not w:
            text = scalar_to_str(c, as_factor=True)
        elif c == Scalar.one():
            text = mono
        elif c == Scalar.from_int(-1):
            text = "-" + mono
        else:
            text = "%s*%s" % (scalar_to_str(c, as_factor=True), mono)
        if not parts:
            parts.append(text)
        elif text.startswith("-"):
            parts.append("- " + text[1:])
        else:
            parts.append("+ " + text)
    return " ".join(parts)
