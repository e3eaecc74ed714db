"""Normal-form engine for the level-indexed q-boson algebra.

The algebra is generated over Q(q^(1/2)) by letters f[i,m] (node i of a
Cartan datum, integer level m) subject to

* the q-Serre relations among the letters of any fixed level m, and
* the cross-level q-boson relation, for m < p:

      f[i,m] f[j,p] = q^((-1)^(p-m+1) (alpha_i, alpha_j)) f[j,p] f[i,m]
                      + delta[(j,p) = (i,m+1)] (1 - q_i^2).

A monomial is *normal* when its levels weakly decrease left to right and
every maximal constant-level block is a canonical word of the
per-multidegree echelon basis of the q-Serre ideal (pivots are the
lexicographically greatest words, so canonical words are the kept
non-pivots).  Elements are finite scalar combinations of normal
monomials; the zero element is the empty combination.
"""

from __future__ import annotations

import itertools
import sys
import threading

from qboson.scalar import Scalar, q_binom, q_factorial, kappa_inv, zeta

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))

_ZERO = Scalar.zero()
_ONE = Scalar.one()


class AlgebraError(Exception):
    """Errors from the rewriting engine."""


class MixedWeightError(AlgebraError):
    """An operation required a weight-homogeneous element."""


class ResourceBudgetError(AlgebraError):
    """A configured height budget was exceeded."""


class Element:
    """Finite scalar-weighted sum of normal monomials.

    Monomials are tuples of (node, level) letters.  Instances are
    immutable; all arithmetic goes through the owning algebra.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return self.terms.items()

    def scaled(self, s):
        if isinstance(s, int):
            s = Scalar.from_int(s)
        if s.is_zero():
            return self.alg.zero()
        return Element(self.alg, {w: s * c for w, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        terms = dict(self.terms)
        for w, c in other.terms.items():
            cur = terms.get(w)
            if cur is None:
                terms[w] = c
            else:
                cur = cur + c
                if cur:
                    terms[w] = cur
                else:
                    del terms[w]
        return Element(self.alg, terms)

    def __neg__(self):
        return Element(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.alg.multiply(self, other)
        if isinstance(other, (Scalar, int)):
            return self.scaled(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scaled(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise AlgebraError("element powers must be nonnegative integers")
        out = self.alg.one()
        for _ in range(n):
            out = self.alg.multiply(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if self.alg is not other.alg and self.alg.datum != other.alg.datum:
            return False
        return self.terms == other.terms

    def weight(self):
        return self.alg.weight(self)

    def __repr__(self):
        from qboson.parser import element_to_str
        return element_to_str(self)


class SerreTable:
    """Echelon data of the q-Serre ideal at one multidegree.

    ``pivots`` maps each pivot word (tuple of nodes) to its expansion as a
    list of (canonical word, Scalar) pairs; ``canonical`` is the sorted
    tuple of kept words.
    """

    __slots__ = ("mu", "pivots", "canonical")

    def __init__(self, mu, pivots, canonical):
        self.mu = mu
        self.pivots = pivots
        self.canonical = canonical


def words_of_multidegree(mu):
    """All words with letter multiset given by ``mu``, in ascending lex order."""
    letters = []
    for i, k in enumerate(mu):
        letters.extend([i] * k)
    if not letters:
        return [()]
    out = []
    seen = set()

    def rec(prefix, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        prev = None
        for idx in range(len(remaining)):
            x = remaining[idx]
            if x == prev:
                continue
            prev = x
            rec(prefix + [x], remaining[:idx] + remaining[idx + 1:])

    rec([], sorted(letters))
    return out


class QBosonAlgebra:
    """The rewriting engine attached to a Cartan datum.

    ``max_height`` bounds the letter count of any word the engine is asked
    to normalize; exceeding it raises ResourceBudgetError instead of
    exhausting memory on infinite-type data.
    """

    def __init__(self, datum, max_height=None):
        self.datum = datum
        self.max_height = max_height
        self._nf_cache = {}
        self._serre = {}
        self._serre_locks = {}
        self._master_lock = threading.Lock()
        self._gen_image_cache = {}
        self._boson_cache = {}

    # -- scalars tied to the datum ------------------------------------------

    def q_i(self, i, power=1):
        return Scalar.v_power(2 * self.datum.d(i) * power)

    def zeta_i(self, i):
        return zeta(self.datum.d(i))

    def _boson_scalar(self, i, j, m, p):
        """q^((-1)^(p-m+1)(alpha_i,alpha_j)) for a swap of f[i,m] f[j,p], m < p."""
        sign = 1 if (p - m + 1) % 2 == 0 else -1
        key = (i, j, sign)
        s = self._boson_cache.get(key)
        if s is None:
            pairing = self.datum.form(self.datum.simple_root(i), self.datum.simple_root(j))
            s = Scalar.v_power(2 * sign * pairing)
            self._boson_cache[key] = s
        return s

    # -- element constructors -------------------------------------------------

    def zero(self):
        return Element(self, {})

    def one(self):
        return Element(self, {(): _ONE})

    def scalar_elem(self, s):
        if isinstance(s, int):
            s = Scalar.from_int(s)
        if s.is_zero():
            return self.zero()
        return Element(self, {(): s})

    def gen(self, i, m):
        if not 0 <= i < self.datum.n:
            raise AlgebraError("node index %d out of range" % i)
        return Element(self, {((i, m),): _ONE})

    def monomial(self, word):
        """Normalize a raw word of (node, level) letters."""
        word = tuple((int(i), int(m)) for i, m in word)
        for i, _ in word:
            if not 0 <= i < self.datum.n:
                raise AlgebraError("node index %d out of range" % i)
        return self.normal_form([(word, _ONE)])

    def normal_form(self, pairs):
        """Normalize a finite list of (word, scalar) pairs into an Element."""
        acc = {}
        for word, coeff in pairs:
            if isinstance(coeff, int):
                coeff = Scalar.from_int(coeff)
            if coeff.is_zero():
                continue
            for w, c in self._nf_word(tuple(word)).items():
                cur = acc.get(w)
                if cur is None:
                    acc[w] = coeff * c
                else:
                    cur = cur + coeff * c
                    if cur:
                        acc[w] = cur
                    else:
                        del acc[w]
        return Element(self, acc)

    # -- the rewriting core ----------------------------------------------------

    def _nf_word(self, word):
        """Fully normalize one word; returns a read-only dict word -> Scalar."""
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        if self.max_height is not None and len(word) > self.max_height:
            raise ResourceBudgetError(
                "word of height %d exceeds the budget %d" % (len(word), self.max_height))
        # phase 1: move higher levels left via the q-boson relation
        for k in range(len(word) - 1):
            i, m = word[k]
            j, p = word[k + 1]
            if m < p:
                coef = self._boson_scalar(i, j, m, p)
                swapped = word[:k] + (word[k + 1], word[k]) + word[k + 2:]
                acc = {w: coef * c for w, c in self._nf_word(swapped).items()}
                if j == i and p == m + 1:
                    zi = self.zeta_i(i)
                    for w, c in self._nf_word(word[:k] + word[k + 2:]).items():
                        cur = acc.get(w)
                        if cur is None:
                            acc[w] = zi * c
                        else:
                            cur = cur + zi * c
                            if cur:
                                acc[w] = cur
                            else:
                                del acc[w]
                self._nf_cache[word] = acc
                return acc
        # phase 2: level-sorted; reduce each constant-level block by the
        # echelon table (expansions are canonical, levels are unchanged, so
        # the result needs no further boson pass)
        blocks = []
        factors = []
        changed = False
        for m, group in itertools.groupby(word, key=lambda g: g[1]):
            nodes = tuple(g[0] for g in group)
            blocks.append((m, nodes))
            table = self.serre_table(self._multidegree(nodes))
            expansion = table.pivots.get(nodes)
            if expansion is None:
                factors.append(((nodes, _ONE),))
            else:
                factors.append(tuple(expansion))
                changed = True
        if not changed:
            acc = {word: _ONE}
        else:
            acc = {}
            levels = [m for m, _ in blocks]
            for combo in itertools.product(*factors):
                w = []
                coeff = _ONE
                for (nodes, c), m in zip(combo, levels):
                    coeff = coeff * c
                    w.extend((node, m) for node in nodes)
                w = tuple(w)
                cur = acc.get(w)
                if cur is None:
                    acc[w] = coeff
                else:
                    cur = cur + coeff
                    if cur:
                        acc[w] = cur
                    else:
                        del acc[w]
        self._nf_cache[word] = acc
        return acc

    def _multidegree(self, nodes):
        mu = [0] * self.datum.n
        for i in nodes:
            mu[i] += 1
        return tuple(mu)

    # -- Serre echelon tables ---------------------------------------------------

    def serre_relation(self, i, j):
        """The q-Serre relation for i != j as (node word, Scalar) pairs."""
        b = self.datum.b(i, j)
        d = self.datum.d(i)
        out = []
        for k in range(b + 1):
            coeff = q_binom(b, k, d)
            if k % 2:
                coeff = -coeff
            out.append(((i,) * k + (j,) + (i,) * (b - k), coeff))
        return out

    def serre_table(self, mu):
        mu = tuple(mu)
        tab = self._serre.get(mu)
        if tab is not None:
            return tab
        with self._master_lock:
            lock = self._serre_locks.get(mu)
            if lock is None:
                lock = threading.Lock()
                self._serre_locks[mu] = lock
        with lock:
            tab = self._serre.get(mu)
            if tab is None:
                tab = self._compute_serre_table(mu)
                self._serre[mu] = tab
        return tab

    def _compute_serre_table(self, mu):
        n = self.datum.n
        rows = []
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                relmu = [0] * n
                relmu[i] = self.datum.b(i, j)
                relmu[j] += 1
                rest = tuple(a - b for a, b in zip(mu, relmu))
                if any(x < 0 for x in rest):
                    continue
                rel = self.serre_relation(i, j)
                for left in _submultidegrees(rest):
                    right = tuple(a - b for a, b in zip(rest, left))
                    for u in words_of_multidegree(left):
                        for w in words_of_multidegree(right):
                            rows.append({u + mid + w: c for mid, c in rel})
        pivots = _reduced_echelon(rows)
        expansions = {}
        for p, row in pivots.items():
            expansions[p] = tuple(sorted(
                ((w, -c) for w, c in row.items() if w != p)))
        canonical = tuple(w for w in words_of_multidegree(mu) if w not in pivots)
        return SerreTable(mu, expansions, canonical)

    def canonical_words(self, mu):
        """Canonical (kept) words at a multidegree, ascending lex."""
        return self.serre_table(mu).canonical

    # -- ring operations ---------------------------------------------------------

    def multiply(self, x, y):
        acc = {}
        for wx, cx in x.terms.items():
            for wy, cy in y.terms.items():
                c = cx * cy
                if not wx or not wy:
                    w = wx or wy
                    cur = acc.get(w)
                    if cur is None:
                        acc[w] = c
                    else:
                        cur = cur + c
                        if cur:
                            acc[w] = cur
                        else:
                            del acc[w]
                    continue
                for w, cw in self._nf_word(wx + wy).items():
                    val = c * cw
                    cur = acc.get(w)
                    if cur is None:
                        acc[w] = val
                    else:
                        cur = cur + val
                        if cur:
                            acc[w] = cur
                        else:
                            del acc[w]
        return Element(self, acc)

    # -- grading -------------------------------------------------------------------

    def weight_of_word(self, word):
        """Sum of -(-1)^m alpha_i over the letters (node i, level m)."""
        wt = [0] * self.datum.n
        for i, m in word:
            wt[i] += 1 if m % 2 else -1
        return tuple(wt)

    def weight(self, x):
        """The common weight of a weight-homogeneous element."""
        if not x.terms:
            raise MixedWeightError("the zero element has no well-defined weight")
        weights = {self.weight_of_word(w) for w in x.terms}
        if len(weights) > 1:
            raise MixedWeightError("element is not weight-homogeneous")
        return next(iter(weights))

    def homogeneous_components(self, x):
        """Split into weight-homogeneous parts, keyed by weight."""
        out = {}
        for w, c in x.terms.items():
            out.setdefault(self.weight_of_word(w), {})[w] = c
        return {wt: Element(self, terms) for wt, terms in sorted(out.items())}

    def fine_degree_of_word(self, word):
        """Per-level multidegrees, as ((level, mu), ...) with levels descending."""
        out = []
        for m, group in itertools.groupby(word, key=lambda g: g[1]):
            out.append((m, self._multidegree(tuple(g[0] for g in group))))
        return tuple(out)

    def fine_components(self, x):
        """Split into fine-degree-homogeneous parts."""
        out = {}
        for w, c in x.terms.items():
            out.setdefault(self.fine_degree_of_word(w), {})[w] = c
        return {d: Element(self, terms) for d, terms in sorted(out.items())}

    # -- q-commutators and friends ----------------------------------------------------

    def q_commutator(self, x, y):
        """[x, y]_q = xy - q^(-(wt x, wt y)) yx, bilinear over components."""
        out = self.zero()
        for wtx, xc in self.homogeneous_components(x).items():
            for wty, yc in self.homogeneous_components(y).items():
                tw = Scalar.v_power(-2 * self.datum.form(wtx, wty))
                out = out + self.multiply(xc, yc) - self.multiply(yc, xc).scaled(tw)
        return out

    def e_op(self, i, m, x):
        """[x, f[i,m+1]]_q; kills 1 and sends f[j,m] to delta_ij (1 - q_i^2)."""
        return self.q_commutator(x, self.gen(i, m + 1))

    def e_star_op(self, i, m, x):
        """[f[i,m-1], x]_q, the star-twisted partner of e_op."""
        return self.q_commutator(self.gen(i, m - 1), x)

    def divided_power(self, i, m, r):
        """(kappa_i^(-1) f[i,m])^r / [r]_i!; zero for negative r."""
        if r < 0:
            return self.zero()
        d = self.datum.d(i)
        coeff = (kappa_inv(d) ** r) / q_factorial(r, d)
        return Element(self, {((i, m),) * r: coeff})

    # -- level windows -------------------------------------------------------------------

    def level_window(self, x):
        """(min level, max level) over all letters; errors without letters."""
        levels = [m for w in x.terms for _, m in w]
        if not levels:
            raise AlgebraError("element has no generator letters")
        return min(levels), max(levels)

    def in_window(self, x, a, b):
        return all(a <= m <= b for w in x.terms for _, m in w)

    def in_nonneg(self, x):
        return all(m >= 0 for w in x.terms for _, m in w)

    def in_neg(self, x):
        return all(m < 0 for w in x.terms for _, m in w)

    def shift_levels(self, x, s):
        """Shift every letter level by s (an algebra automorphism)."""
        if s == 0:
            return x
        return Element(self, {tuple((i, m + s) for i, m in w): c
                              for w, c in x.terms.items()})

    # -- randomized rewriting (confluence witness) ------------------------------------------

    def normal_form_randomized(self, word, rng):
        """Normalize one word choosing rewrite sites at random; no caching.

        The result must agree with the deterministic engine for every seed;
        the test suite uses this as a confluence witness.
        """
        out = {}
        work = [(tuple(word), _ONE)]
        while work:
            idx = rng.randrange(len(work))
            w, c = work.pop(idx)
            sites = [k for k in range(len(w) - 1) if w[k][1] < w[k + 1][1]]
            if sites:
                k = rng.choice(sites)
                i, m = w[k]
                j, p = w[k + 1]
                coef = self._boson_scalar(i, j, m, p)
                work.append((w[:k] + (w[k + 1], w[k]) + w[k + 2:], c * coef))
                if i == j and p == m + 1:
                    work.append((w[:k] + w[k + 2:], c * self.zeta_i(i)))
                continue
            blocks = []
            for m, group in itertools.groupby(w, key=lambda g: g[1]):
                blocks.append((m, tuple(g[0] for g in group)))
            pivot_blocks = []
            for bi, (m, nodes) in enumerate(blocks):
                table = self.serre_table(self._multidegree(nodes))
                if nodes in table.pivots:
                    pivot_blocks.append((bi, table.pivots[nodes]))
            if pivot_blocks:
                bi, expansion = pivot_blocks[rng.randrange(len(pivot_blocks))]
                for nodes, coeff in expansion:
                    neww = []
                    for k, (m, old) in enumerate(blocks):
                        use = nodes if k == bi else old
                        neww.extend((node, m) for node in use)
                    work.append((tuple(neww), c * coeff))
                continue
            cur = out.get(w)
            if cur is None:
                out[w] = c
            else:
                cur = cur + c
                if cur:
                    out[w] = cur
                else:
                    del out[w]
        return Element(self, out)

    # -- Serre cache persistence ------------------------------------------------------------

    def export_serre_tables(self):
        """JSON-able snapshot of all computed echelon tables."""
        from qboson.scalar import scalar_to_str
        entries = []
        for mu in sorted(self._serre):
            tab = self._serre[mu]
            entries.append({
                "mu": list(mu),
                "pivots": [
                    {"word": list(p),
                     "terms": [[list(w), scalar_to_str(c)] for w, c in tab.pivots[p]]}
                    for p in sorted(tab.pivots)
                ],
                "canonical": [list(w) for w in tab.canonical],
            })
        return {"schema_version": 1, "datum": self.datum.hash_hex(), "entries": entries}

    def import_serre_tables(self, data):
        """Load a snapshot produced by export_serre_tables."""
        from qboson.parser import parse_scalar
        if data.get("schema_version") != 1:
            raise AlgebraError("unsupported cache schema version")
        if data.get("datum") != self.datum.hash_hex():
            raise AlgebraError("cache file belongs to a different Cartan datum")
        for entry in data["entries"]:
            mu = tuple(entry["mu"])
            pivots = {}
            for piv in entry["pivots"]:
                word = tuple(piv["word"])
                pivots[word] = tuple((tuple(w), parse_scalar(text))
                                     for w, text in piv["terms"])
            canonical = tuple(tuple(w) for w in entry["canonical"])
            with self._master_lock:
                self._serre[mu] = SerreTable(mu, pivots, canonical)


def _submultidegrees(mu):
    """All componentwise splittings nu <= mu, ascending."""
    ranges = [range(k + 1) for k in mu]
    return [tuple(v) for v in itertools.product(*ranges)]


def _reduced_echelon(rows):
    """Reduced echelon form of a span of word-indexed rows.

    Pivot of a row is its lexicographically greatest word.  Returns
    {pivot: row} where each row has pivot coefficient 1 and a tail free of
    pivot words; this is the unique reduced basis of the span, so the
    result does not depend on the generation order of ``rows``.
    """
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            p = max(row)
            prow = pivots.get(p)
            if prow is None:
                inv = row[p].inv()
                pivots[p] = {w: c * inv for w, c in row.items()}
                break
            coef = row[p]
            for w, c in prow.items():
                cur = row.get(w)
                if cur is None:
                    row[w] = -coef * c
                else:
                    cur = cur - coef * c
                    if cur:
                        row[w] = cur
                    else:
                        del row[w]
    # back-substitute, smallest pivots first
    for p in sorted(pivots):
        prow = pivots[p]
        for p2, row2 in pivots.items():
            if p2 == p:
                continue
            coef = row2.get(p)
            if coef is None:
                continue
            for w, c in prow.items():
                cur = row2.get(w)
                if cur is None:
                    row2[w] = -coef * c
                else:
                    cur = cur - coef * c
                    if cur:
                        row2[w] = cur
                    else:
                        del row2[w]
    return pivots
