"""Exact arithmetic in the field Q(q^(1/2)) and its q-combinatorics.

Everything is expressed through the variable v = q^(1/2), so q = v^2 and
half-integer powers of q are integer powers of v.  A :class:`LaurentPoly`
is a Laurent polynomial in v with rational coefficients; a
:class:`Scalar` is a quotient of two Laurent polynomials kept in a unique
canonical form, so equality and hashing are structural.

Canonical form of a scalar num/den:

* the fraction is fully reduced over Q[v],
* the denominator has lowest exponent 0, integer coefficients with
  content 1, and a positive lowest coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd


class ScalarError(ArithmeticError):
    """Raised on invalid scalar operations (division by zero, bad domain)."""


# ---------------------------------------------------------------------------
# dense helpers over Q[v]: a polynomial is a list of Fractions, index = degree
# ---------------------------------------------------------------------------

def _ptrim(c):
    while c and not c[-1]:
        c.pop()
    return c


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return _ptrim(out)


def _pdivmod(a, b):
    """Exact Euclidean division in Q[v]; ``b`` must be nonzero."""
    a = a[:]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        coef = a[-1] * inv
        q[k] = coef
        for j, bj in enumerate(b):
            a[k + j] -= coef * bj
        _ptrim(a)
    return _ptrim(q), a


def _pgcd(a, b):
    """Monic gcd in Q[v]."""
    a, b = a[:], b[:]
    while b:
        _, r = _pdivmod(a, b)
        if r:
            lead = r[-1]
            r = [c / lead for c in r]
        a, b = b, r
    if a:
        lead = a[-1]
        if lead != 1:
            a = [c / lead for c in a]
    return a


# ---------------------------------------------------------------------------
# Laurent polynomials in v
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Laurent polynomial in v with Fraction coefficients, no zero terms."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, x in coeffs.items():
                x = x if isinstance(x, Fraction) else Fraction(x)
                if x:
                    c[e] = x
        self.c = c

    @staticmethod
    def zero():
        return LaurentPoly()

    @staticmethod
    def one():
        return LaurentPoly({0: 1})

    @staticmethod
    def term(coeff, exp=0):
        return LaurentPoly({exp: coeff})

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def min_exp(self):
        return min(self.c)

    def max_exp(self):
        return max(self.c)

    def __add__(self, other):
        c = dict(self.c)
        for e, x in other.c.items():
            y = c.get(e)
            if y is None:
                c[e] = x
            else:
                y = y + x
                if y:
                    c[e] = y
                else:
                    del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = c
        return out

    def __neg__(self):
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = {e: -x for e, x in self.c.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = self.c, other.c
        if not a or not b:
            return LaurentPoly()
        if len(a) == 1:
            ((e, x),) = a.items()
            out = LaurentPoly.__new__(LaurentPoly)
            out.c = {e + f: x * y for f, y in b.items()}
            return out
        c = {}
        for e, x in a.items():
            for f, y in b.items():
                g = e + f
                z = c.get(g)
                if z is None:
                    c[g] = x * y
                else:
                    z = z + x * y
                    if z:
                        c[g] = z
                    else:
                        del c[g]
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = c
        return out

    def shift(self, k):
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = {e + k: x for e, x in self.c.items()}
        return out

    def bar(self):
        """Substitute v -> v^(-1)."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.c = {-e: x for e, x in self.c.items()}
        return out

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def dense(self):
        """Return (offset, coefficient list) with a nonzero constant term."""
        if not self.c:
            return 0, []
        lo = min(self.c)
        hi = max(self.c)
        out = [Fraction(0)] * (hi - lo + 1)
        for e, x in self.c.items():
            out[e - lo] = x
        return lo, out

    @staticmethod
    def from_dense(offset, coeffs):
        return LaurentPoly({offset + i: x for i, x in enumerate(coeffs) if x})

    def __repr__(self):
        return "LaurentPoly(%r)" % (self.c,)


_LP_ONE = LaurentPoly.one()
_LP_ZERO = LaurentPoly.zero()


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

class Scalar:
    """Element of Q(q^(1/2)) stored as a reduced fraction of Laurent polys."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num, den=None):
        if den is None:
            den = _LP_ONE
        if den.is_zero():
            raise ScalarError("division by zero")
        self.num, self.den = _normalize(num, den)
        self._h = None

    @staticmethod
    def _raw(num, den):
        """Build without normalizing; caller guarantees canonical form."""
        s = Scalar.__new__(Scalar)
        s.num, s.den, s._h = num, den, None
        return s

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero():
        return _ZERO

    @staticmethod
    def one():
        return _ONE

    @staticmethod
    def from_int(n):
        return Scalar._raw(LaurentPoly.term(n), _LP_ONE) if n else _ZERO

    @staticmethod
    def from_fraction(x):
        x = Fraction(x)
        return Scalar._raw(LaurentPoly.term(x), _LP_ONE) if x else _ZERO

    @staticmethod
    def v_power(n, coeff=1):
        """coeff * v^n, i.e. coeff * q^(n/2)."""
        coeff = Fraction(coeff)
        if not coeff:
            return _ZERO
        return Scalar._raw(LaurentPoly.term(coeff, n), _LP_ONE)

    @staticmethod
    def q_power(n, coeff=1):
        """coeff * q^n."""
        return Scalar.v_power(2 * n, coeff)

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def den_is_one(self):
        return self.den.c == _LP_ONE.c

    def __eq__(self, other):
        if isinstance(other, int):
            other = Scalar.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._h is None:
            self._h = hash((tuple(sorted(self.num.c.items())),
                            tuple(sorted(self.den.c.items()))))
        return self._h

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_fraction(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.den_is_one() and other.den_is_one():
            return Scalar._raw(self.num + other.num, _LP_ONE)
        return Scalar(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_fraction(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_fraction(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.den_is_one() and other.den_is_one():
            return Scalar._raw(self.num * other.num, _LP_ONE)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise ScalarError("division by zero")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_fraction(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ScalarError("scalar powers must be integers")
        if n < 0:
            return self.inv() ** (-n)
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def bar(self):
        """The involution q^(1/2) -> q^(-1/2)."""
        return Scalar(self.num.bar(), self.den.bar())

    # -- membership tests ----------------------------------------------------

    def is_laurent(self):
        """True iff the scalar is a Laurent polynomial in v."""
        return self.den_is_one()

    def is_in_qZq(self):
        """True iff the scalar lies in q Z[q]: integer polynomial, no constant."""
        if not self.den_is_one():
            return False
        for e, x in self.num.c.items():
            if e <= 0 or e % 2 or x.denominator != 1:
                return False
        return True

    def is_in_Zq_laurent(self):
        """True iff the scalar lies in Z[q, q^(-1)]."""
        if not self.den_is_one():
            return False
        for e, x in self.num.c.items():
            if e % 2 or x.denominator != 1:
                return False
        return True

    def q_coefficients(self):
        """Return {k: coeff} with the scalar equal to sum coeff * q^k.

        Requires the scalar to be a Laurent polynomial in q.
        """
        if not self.den_is_one():
            raise ScalarError("not a Laurent polynomial in q")
        out = {}
        for e, x in self.num.c.items():
            if e % 2:
                raise ScalarError("odd power of q^(1/2) present")
            out[e // 2] = x
        return out

    @staticmethod
    def from_q_coefficients(coeffs):
        return Scalar._raw(LaurentPoly({2 * k: x for k, x in coeffs.items() if x}),
                           _LP_ONE)

    def __repr__(self):
        return scalar_to_str(self)


def _normalize(num, den):
    """Reduce num/den to the canonical representation."""
    if num.is_zero():
        return _LP_ZERO, _LP_ONE
    a, ncoef = num.dense()
    b, dcoef = den.dense()
    if len(dcoef) > 1 and len(ncoef) > 1:
        g = _pgcd(ncoef, dcoef)
        if len(g) > 1:
            ncoef, _ = _pdivmod(ncoef, g)
            dcoef, _ = _pdivmod(dcoef, g)
    # scale: integer primitive denominator with positive lowest coefficient
    lcm = 1
    for x in dcoef:
        if x:
            lcm = lcm * x.denominator // _int_gcd(lcm, x.denominator)
    gnum = 0
    for x in dcoef:
        if x:
            gnum = _int_gcd(gnum, abs(x.numerator * (lcm // x.denominator)))
    scale = Fraction(lcm, gnum)
    if dcoef[0] < 0:
        scale = -scale
    return (LaurentPoly.from_dense(a - b, [x * scale for x in ncoef]),
            LaurentPoly.from_dense(0, [x * scale for x in dcoef]))


_ZERO = Scalar._raw(_LP_ZERO, _LP_ONE)
_ONE = Scalar._raw(_LP_ONE, _LP_ONE)


# ---------------------------------------------------------------------------
# q-combinatorics: everything relative to q_i = q^d
# ---------------------------------------------------------------------------

def q_int(n, d=1):
    """The balanced q-integer [n] in q_i = q^d: (q_i^n - q_i^-n)/(q_i - q_i^-1)."""
    if n == 0:
        return _ZERO
    sign = 1
    if n < 0:
        n, sign = -n, -1
    c = {}
    for t in range(n):
        c[2 * d * (n - 1 - 2 * t)] = sign
    return Scalar._raw(LaurentPoly(c), _LP_ONE)


def q_factorial(n, d=1):
    """[n]! in q_i = q^d; n must be nonnegative."""
    if n < 0:
        raise ScalarError("q-factorial of a negative integer")
    out = _ONE
    for s in range(1, n + 1):
        out = out * q_int(s, d)
    return out


def q_binom(m, n, d=1):
    """Gaussian binomial [m choose n] in q_i = q^d; requires m >= n >= 0."""
    if n < 0 or m < n:
        raise ScalarError("q-binomial requires m >= n >= 0")
    return q_factorial(m, d) / (q_factorial(n, d) * q_factorial(m - n, d))


def zeta(d):
    """1 - q_i^2 for q_i = q^d."""
    return Scalar._raw(LaurentPoly({0: 1, 4 * d: -1}), _LP_ONE)


def kappa_inv(d):
    """q_i^(1/2) * (1 - q_i^2)^(-1), the inverse of kappa_i = q_i^(-1/2)(1-q_i^2)."""
    return Scalar(LaurentPoly({d: 1}), LaurentPoly({0: 1, 4 * d: -1}))


# ---------------------------------------------------------------------------
# canonical text form (the grammar lives in qboson.parser)
# ---------------------------------------------------------------------------

def _vterm_str(exp, coeff):
    if exp == 0:
        return str(coeff)
    if exp == 2:
        base = "q"
    elif exp % 2 == 0:
        e = exp // 2
        base = "q^%d" % e if e > 0 else "q^(%d)" % e
    else:
        base = "q^(%d/2)" % exp
    if coeff == 1:
        return base
    if coeff == -1:
        return "-" + base
    return "%s*%s" % (coeff, base)


def _poly_str(p):
    parts = []
    for e in sorted(p.c):
        t = _vterm_str(e, p.c[e])
        if not parts:
            parts.append(t)
        elif t.startswith("-"):
            parts.append("- " + t[1:])
        else:
            parts.append("+ " + t)
    return " ".join(parts) if parts else "0"


def scalar_to_str(s, as_factor=False):
    """Canonical text of a scalar.

    With ``as_factor`` the result can be used verbatim as a factor in a
    product (sums get parenthesized).
    """
    num = _poly_str(s.num)
    if s.den_is_one():
        if as_factor and len(s.num.c) > 1:
            return "(%s)" % num
        return num
    if len(s.num.c) > 1:
        num = "(%s)" % num
    return "%s/(%s)" % (num, _poly_str(s.den))
