"""Cartan data, the root-lattice bilinear form, and braid-word utilities.

Nodes are indexed 0..n-1 internally; the CLI and the element grammar
display them 1-based.  Root-lattice vectors are plain integer tuples of
length n.  A braid word is a tuple of (node, sign) letters with sign in
{+1, -1}; subalgebra constructions accept positive words only.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction


class CartanError(ValueError):
    """Raised when Cartan data violates a defining invariant."""


class CartanDatum:
    """Symmetrizable generalized Cartan matrix with positive symmetrizers."""

    __slots__ = ("cartan", "sym", "n")

    def __init__(self, cartan, symmetrizers):
        cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        sym = tuple(int(x) for x in symmetrizers)
        n = len(cartan)
        if n == 0:
            raise CartanError("empty Cartan matrix")
        if any(len(row) != n for row in cartan):
            raise CartanError("Cartan matrix must be square")
        if len(sym) != n:
            raise CartanError("symmetrizer length must match the matrix size")
        if any(d <= 0 for d in sym):
            raise CartanError("symmetrizers must be positive integers")
        for i in range(n):
            if cartan[i][i] != 2:
                raise CartanError("diagonal entries must equal 2")
            for j in range(n):
                if i != j and cartan[i][j] > 0:
                    raise CartanError("off-diagonal entries must be <= 0")
                if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                    raise CartanError("c[i][j] = 0 must imply c[j][i] = 0")
                if sym[i] * cartan[i][j] != sym[j] * cartan[j][i]:
                    raise CartanError("matrix is not symmetrizable by the given symmetrizers")
        self.cartan = cartan
        self.sym = sym
        self.n = n

    def c(self, i, j):
        return self.cartan[i][j]

    def d(self, i):
        return self.sym[i]

    def b(self, i, j):
        """The q-Serre length 1 - c[i][j]."""
        return 1 - self.cartan[i][j]

    def simple_root(self, i):
        return tuple(1 if k == i else 0 for k in range(self.n))

    def zero_root(self):
        return (0,) * self.n

    def form(self, a, b):
        """Root-lattice pairing (a, b) = sum a_i b_j d_i c_ij; symmetric."""
        total = 0
        for i, ai in enumerate(a):
            if not ai:
                continue
            di = self.sym[i]
            row = self.cartan[i]
            for j, bj in enumerate(b):
                if bj:
                    total += ai * bj * di * row[j]
        return total

    def n_func(self, a):
        """(a, a)/2 as an exact number (integral on the root lattice)."""
        return Fraction(self.form(a, a), 2)

    def pairing_h(self, i, beta):
        """<h_i, beta> = sum_j beta_j c_ij."""
        row = self.cartan[i]
        return sum(bj * row[j] for j, bj in enumerate(beta) if bj)

    def reflect(self, i, beta):
        """Simple reflection s_i(beta) = beta - <h_i, beta> alpha_i."""
        k = self.pairing_h(i, beta)
        return tuple(bj - k if j == i else bj for j, bj in enumerate(beta))

    def m_ij(self, i, j):
        """Order of r_i r_j in the braid relations; math.inf when unbounded."""
        if i == j:
            raise CartanError("m_ij requires two distinct nodes")
        p = self.cartan[i][j] * self.cartan[j][i]
        if p <= 2:
            return p + 2
        if p == 3:
            return 6
        return math.inf

    def key(self):
        return (self.cartan, self.sym)

    def hash_hex(self):
        """Stable hash of the datum, used to key cache files."""
        blob = json.dumps([[list(r) for r in self.cartan], list(self.sym)])
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, CartanDatum) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "CartanDatum(%r, %r)" % ([list(r) for r in self.cartan], list(self.sym))


PRESETS = {
    "A1": ([[2]], [1]),
    "A2": ([[2, -1], [-1, 2]], [1, 1]),
    "B2": ([[2, -1], [-2, 2]], [2, 1]),
    "G2": ([[2, -1], [-3, 2]], [3, 1]),
    "A3": ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [1, 1, 1]),
}


def preset(name):
    try:
        cartan, sym = PRESETS[name]
    except KeyError:
        raise CartanError("unknown preset %r (have %s)" % (name, ", ".join(sorted(PRESETS))))
    return CartanDatum(cartan, sym)


def datum_from_config(obj):
    """Build a datum from a config mapping {"cartan": [...], "symmetrizers": [...]}."""
    if not isinstance(obj, dict):
        raise CartanError("config must be a JSON object")
    if "cartan" not in obj:
        raise CartanError("config is missing the 'cartan' matrix")
    if "symmetrizers" not in obj:
        raise CartanError("config is missing the 'symmetrizers' list")
    return CartanDatum(obj["cartan"], obj["symmetrizers"])


# ---------------------------------------------------------------------------
# braid words
# ---------------------------------------------------------------------------

def braid_word(letters):
    """Normalize an iterable of (node, sign) pairs or bare nodes to a word."""
    out = []
    for x in letters:
        if isinstance(x, int):
            out.append((x, 1))
        else:
            i, s = x
            if s not in (1, -1):
                raise CartanError("braid letter sign must be +1 or -1")
            out.append((int(i), s))
    return tuple(out)


def reverse_word(word):
    """Reverse the letter sequence, keeping signs."""
    return tuple(reversed(word))


def inverse_word(word):
    """The inverse braid element: reversed letters with flipped signs."""
    return tuple((i, -s) for i, s in reversed(word))


def word_is_positive(word):
    return all(s == 1 for _, s in word)


def seq_of_word(word):
    """The node sequence of a positive braid word."""
    if not word_is_positive(word):
        raise CartanError("subalgebra constructions require a positive braid word")
    return tuple(i for i, _ in word)


def word_of_seq(seq):
    return tuple((i, 1) for i in seq)
