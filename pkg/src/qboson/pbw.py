"""PBW bases of the braid-word subalgebras and the triangular invariant basis.

For a positive braid word with node sequence i_1..i_r, the k-th cuspidal
element is the image of q_{i_k}^(1/2) f[i_k, 0] under t_{i_1} .. t_{i_{k-1}}.
PBW elements are ordered products of scaled cuspidal powers with larger k
on the left; they are orthogonal for the small bilinear form and their
span is closed under multiplication.  The invariant basis is the unique
unitriangular correction of the PBW basis fixed by the twisted bar map c,
with correction coefficients in q Z[q].
"""

from __future__ import annotations

from qboson.algebra import AlgebraError, Element
from qboson.cartan import word_is_positive, word_of_seq
from qboson.forms import pair, phi_gen
from qboson.parser import parse_scalar
from qboson.scalar import Scalar, scalar_to_str
from qboson.symmetry import apply_braid, c_map, dbar, star, t_i, t_i_star

_ONE = Scalar.one()


class ConsistencyError(AlgebraError):
    """An identity the construction guarantees failed to hold (engine bug)."""


class UnsupportedSequenceError(AlgebraError):
    """The sequence produced cuspidal data outside the supported shape."""


def bilex_less(u, v):
    """Strict bi-lexicographic order: smaller at the first and the last difference."""
    if len(u) != len(v):
        raise ValueError("exponent vectors must have equal length")
    diffs = [k for k in range(len(u)) if u[k] != v[k]]
    if not diffs:
        return False
    return u[diffs[0]] < v[diffs[0]] and u[diffs[-1]] < v[diffs[-1]]


def _flat_degree(fine):
    """Flatten ((level, mu), ...) into a {(level, node): count} dict."""
    out = {}
    for m, mu in fine:
        for i, k in enumerate(mu):
            if k:
                out[(m, i)] = out.get((m, i), 0) + k
    return out


class _OrthogonalFamily:
    """Ordered products of scaled powers of pairwise-orthogonal generators.

    Shared machinery for the PBW basis of a subalgebra and for its image
    under the inverse braid action: indexed elements, norms, fine-degree
    bookkeeping, and coordinate expansion against the small form.
    """

    def __init__(self, alg, seq, elements, what):
        self.alg = alg
        self.seq = seq
        self.r = len(seq)
        self.elements = elements
        self.fine_degrees = []
        for k, p in enumerate(elements):
            degs = {alg.fine_degree_of_word(w) for w in p.terms}
            if len(degs) != 1:
                raise UnsupportedSequenceError(
                    "%s element %d is not fine-degree homogeneous" % (what, k + 1))
            self.fine_degrees.append(_flat_degree(next(iter(degs))))
        self.heights = [sum(d.values()) for d in self.fine_degrees]
        self._power_cache = {}
        self._product_cache = {}
        self._norm_cache = {}

    def power(self, k, n):
        """q_{i_k}^(n(n-1)/2) times the n-th power of the k-th generator."""
        if n < 0:
            raise AlgebraError("powers need n >= 0")
        if n == 0:
            return self.alg.one()
        key = (k, n)
        out = self._power_cache.get(key)
        if out is None:
            d = self.alg.datum.d(self.seq[k - 1])
            out = (self.elements[k - 1] ** n).scaled(Scalar.v_power(d * n * (n - 1)))
            self._power_cache[key] = out
        return out

    def element(self, u):
        """Ordered product of scaled powers, larger k on the left."""
        u = tuple(u)
        if len(u) != self.r:
            raise AlgebraError("exponent vector length must be %d" % self.r)
        out = self._product_cache.get(u)
        if out is None:
            out = self.alg.one()
            for k in range(self.r, 0, -1):
                if u[k - 1]:
                    out = out * self.power(k, u[k - 1])
            self._product_cache[u] = out
        return out

    def norm(self, u):
        """pair of the u-indexed element with itself, cached."""
        u = tuple(u)
        s = self._norm_cache.get(u)
        if s is None:
            p = self.element(u)
            s = pair(p, p)
            if s.is_zero():
                raise ConsistencyError("basis element has vanishing norm")
            self._norm_cache[u] = s
        return s

    def degree_of(self, u):
        out = {}
        for k, uk in enumerate(u):
            if uk:
                for key, c in self.fine_degrees[k].items():
                    out[key] = out.get(key, 0) + uk * c
        return out

    def solve_degree(self, target):
        """All u >= 0 with sum u_k * D_k equal to the flat degree ``target``."""
        sols = []
        r = self.r

        def rec(k, rest, acc):
            if k == r:
                if not rest:
                    sols.append(tuple(acc))
                return
            d = self.fine_degrees[k]
            cap = min((rest.get(key, 0) // c for key, c in d.items()), default=0)
            for uk in range(cap + 1):
                nxt = dict(rest)
                ok = True
                for key, c in d.items():
                    v = nxt.get(key, 0) - uk * c
                    if v < 0:
                        ok = False
                        break
                    if v:
                        nxt[key] = v
                    else:
                        nxt.pop(key, None)
                if not ok:
                    continue
                acc.append(uk)
                rec(k + 1, nxt, acc)
                acc.pop()

        rec(0, dict(target), [])
        sols.sort(key=lambda u: (sum(u), u))
        return sols

    def candidate_indices(self, x):
        """All u whose fine degree matches a component of x, graded-lex."""
        cands = set()
        for w in x.terms:
            flat = _flat_degree(self.alg.fine_degree_of_word(w))
            cands.update(self.solve_degree(flat))
        return sorted(cands, key=lambda u: (sum(u), u))

    def expand(self, x):
        """Coordinates coords[u] = pair(x, E(u)) / pair(E(u), E(u)) plus residual."""
        coords = {}
        residual = x
        for u in self.candidate_indices(x):
            g = pair(x, self.element(u))
            if g.is_zero():
                continue
            coeff = g / self.norm(u)
            coords[u] = coeff
            residual = residual - self.element(u).scaled(coeff)
        return coords, residual


class CuspidalSet:
    """Cuspidal elements and PBW machinery for one node sequence."""

    def __init__(self, alg, seq):
        self.alg = alg
        self.seq = tuple(int(i) for i in seq)
        self.r = len(self.seq)
        for i in self.seq:
            if not 0 <= i < alg.datum.n:
                raise AlgebraError("node index %d out of range" % i)
        elements = []
        for k, i in enumerate(self.seq):
            p = phi_gen(alg, 0, i)
            for j in reversed(self.seq[:k]):
                p = t_i(j, p)
            if not alg.in_nonneg(p) or not alg.in_window(p, 0, max(k - 1, 0)):
                raise ConsistencyError("cuspidal element %d escaped its level window" % (k + 1))
            elements.append(p)
        self._pbw = _OrthogonalFamily(alg, self.seq, elements, "cuspidal")
        self._inv = None
        self._kl_cache = {}

    @property
    def elements(self):
        return self._pbw.elements

    @property
    def heights(self):
        return self._pbw.heights

    @property
    def fine_degrees(self):
        return self._pbw.fine_degrees

    # -- basic elements -----------------------------------------------------

    def cuspidal(self, k):
        """The k-th cuspidal element, 1-based."""
        if not 1 <= k <= self.r:
            raise AlgebraError("cuspidal index %d out of range 1..%d" % (k, self.r))
        return self._pbw.elements[k - 1]

    def cuspidal_power(self, k, n):
        """q_{i_k}^(n(n-1)/2) times the n-th power of the k-th cuspidal element."""
        if not 1 <= k <= self.r:
            raise AlgebraError("cuspidal index %d out of range 1..%d" % (k, self.r))
        return self._pbw.power(k, n)

    def pbw_element(self, u):
        """Ordered product of cuspidal powers, larger k on the left."""
        return self._pbw.element(u)

    def pbw_norm(self, u):
        """pair(P(u), P(u)), cached."""
        return self._pbw.norm(u)

    def pbw_norm_formula(self, u):
        """The closed form prod_k prod_{s=1..u_k} (1 - q_{i_k}^(2s))."""
        out = _ONE
        for k, uk in enumerate(u):
            d = self.alg.datum.d(self.seq[k])
            for s in range(1, uk + 1):
                out = out * (_ONE - Scalar.q_power(2 * d * s))
        return out

    # -- coordinates ----------------------------------------------------------

    def candidate_indices(self, x):
        return self._pbw.candidate_indices(x)

    def pbw_expand(self, x):
        """Coordinates of x in the PBW basis plus the residual.

        coords[u] = pair(x, P(u)) / pair(P(u), P(u)); the residual is zero
        exactly when x lies in the span of the PBW basis.
        """
        return self._pbw.expand(x)

    def ls_commutator(self, k, t):
        """PBW coordinates of [P_k, P_t]_q for k < t.

        The expansion is exact; a nonzero residual is an engine bug.
        """
        if not 1 <= k < t <= self.r:
            raise AlgebraError("need 1 <= k < t <= r")
        x = self.alg.q_commutator(self.cuspidal(k), self.cuspidal(t))
        coords, residual = self.pbw_expand(x)
        if residual:
            raise ConsistencyError("q-commutator of cuspidal elements left the PBW span")
        return coords

    # -- membership ----------------------------------------------------------------

    def membership_tb_neg(self, x):
        """True iff the inverse braid action lands in strictly negative levels."""
        word = tuple((i, -1) for i in reversed(self.seq))
        return self.alg.in_neg(apply_braid(word, x))

    # -- the inverse-image basis -------------------------------------------------------

    def inverse_family(self):
        """The image of the PBW basis under the inverse braid action.

        Its k-th generator is t_{i_r}^-1 .. t_{i_k}^-1 of q_{i_k}^(1/2)
        f[i_k,0]; all of them live in strictly negative levels, and the
        family inherits orthogonality from the form invariance.
        """
        if self._inv is None:
            elements = []
            for k in range(1, self.r + 1):
                q = phi_gen(self.alg, 0, self.seq[k - 1])
                for j in self.seq[k - 1:]:
                    q = t_i_star(j, q)
                if not self.alg.in_neg(q):
                    raise ConsistencyError(
                        "inverse image of cuspidal element %d is not negative" % k)
                elements.append(q)
            self._inv = _OrthogonalFamily(self.alg, self.seq, elements, "inverse cuspidal")
        return self._inv

    # -- the c-invariant triangular basis --------------------------------------------

    def kl_basis(self, u):
        """The c-invariant correction G(u) = P(u) + sum of q Z[q] lower terms.

        Returns (element, coords) where coords maps u' to the coefficient
        of P(u') in G(u) (including u itself with coefficient 1).
        """
        u = tuple(u)
        if len(u) != self.r:
            raise AlgebraError("exponent vector length must be %d" % self.r)
        fiber = tuple(self._pbw.solve_degree(self._pbw.degree_of(u)))
        table = self._kl_fiber(fiber)
        return table[u]

    def _kl_fiber(self, fiber):
        got = self._kl_cache.get(fiber)
        if got is not None:
            return got
        us = list(fiber)
        fiber_set = set(us)
        # expansion of c(P(u')) in the PBW basis; unitriangular by the
        # commutation formula for cuspidal elements
        amat = {}
        for up in us:
            img = c_map(self.pbw_element(up))
            coords, residual = self.pbw_expand(img)
            if residual:
                raise ConsistencyError("c image of a PBW element left the PBW span")
            if any(v not in fiber_set for v in coords):
                raise ConsistencyError("c image escaped its fine-degree fiber")
            diag = coords.get(up)
            if diag != _ONE:
                raise ConsistencyError("c expansion is not unipotent on the diagonal")
            for v, cc in coords.items():
                if v != up and not bilex_less(v, up):
                    raise ConsistencyError("c expansion is not triangular for the bi-lex order")
                if not cc.is_in_Zq_laurent():
                    raise ConsistencyError("c expansion coefficient escaped Z[q, q^-1]")
            amat[up] = coords
        order = _topo_descending(us)
        table = {}
        for u in us:
            t = {u: _ONE}
            for v in order:
                if v == u:
                    continue
                r = Scalar.zero()
                for up, tv in t.items():
                    if up == v:
                        continue
                    a = amat[up].get(v)
                    if a is not None:
                        r = r + tv.bar() * a
                if r.is_zero():
                    continue
                tv = _positive_q_part(r)
                if not tv.is_in_qZq():
                    raise ConsistencyError("triangular correction escaped q Z[q]")
                t[v] = tv
            g = self.alg.zero()
            for v, tv in t.items():
                g = g + self.pbw_element(v).scaled(tv)
            if c_map(g) != g:
                raise ConsistencyError("constructed basis element is not c-invariant")
            table[u] = (g, t)
        self._kl_cache[fiber] = table
        return table

    def pbw_in_kl(self, u):
        """Coordinates of P(u) in the invariant basis (the inverse transition).

        For simply-laced data these are the coefficients whose positivity
        the acceptance harness reports.
        """
        u = tuple(u)
        table = self._kl_fiber(tuple(self._pbw.solve_degree(self._pbw.degree_of(u))))
        memo = {}

        def expand(v):
            got = memo.get(v)
            if got is not None:
                return got
            out = {v: _ONE}
            for vp, tv in table[v][1].items():
                if vp == v:
                    continue
                for vq, c in expand(vp).items():
                    cur = out.get(vq, Scalar.zero()) - tv * c
                    if cur:
                        out[vq] = cur
                    else:
                        out.pop(vq, None)
            memo[v] = out
            return out

        return expand(u)


def _topo_descending(us):
    """Linear extension of the bi-lex order, largest first.

    Ties (incomparable elements) break by descending (total degree, lex);
    the plain (total degree, lex) order alone need not extend the bi-lex
    order, so the sort follows the actual comparabilities.
    """
    remaining = list(us)
    order = []
    while remaining:
        maxes = [u for u in remaining
                 if not any(bilex_less(u, v) for v in remaining if v != u)]
        if not maxes:
            raise ConsistencyError("bi-lex order has a cycle")
        maxes.sort(key=lambda u: (sum(u), u), reverse=True)
        order.extend(maxes)
        dropped = set(maxes)
        remaining = [u for u in remaining if u not in dropped]
    return order


def _positive_q_part(r):
    """Solve t - bar(t) = r with t in q Z[q]; r must be bar-antisymmetric."""
    if not r.is_in_Zq_laurent():
        raise ConsistencyError("rigidity right-hand side escaped Z[q, q^-1]")
    coeffs = r.q_coefficients()
    for k, c in coeffs.items():
        if coeffs.get(-k, 0) != -c:
            raise ConsistencyError("rigidity right-hand side is not bar-antisymmetric")
    return Scalar.from_q_coefficients({k: c for k, c in coeffs.items() if k > 0})


# ---------------------------------------------------------------------------
# quantum twist map
# ---------------------------------------------------------------------------

def twist(word, x):
    """The anti-automorphism T_b . star . dbar for a positive braid word."""
    if not word_is_positive(word):
        raise AlgebraError("the twist map is defined for positive braid words")
    return apply_braid(word, star(dbar(x)))


def twist_seq(seq, x):
    return twist(word_of_seq(seq), x)


# ---------------------------------------------------------------------------
# tensor decomposition check
# ---------------------------------------------------------------------------

def canonical_monomials(alg, lo, hi, height):
    """All normal monomials with levels in [lo, hi] and at most ``height`` letters."""
    per_height = {}
    for ht in range(height + 1):
        entries = []
        for mu in _multidegrees_of_height(alg.datum.n, ht):
            entries.append((mu, alg.canonical_words(mu)))
        per_height[ht] = entries
    out = [()]
    for m in range(hi, lo - 1, -1):
        new = []
        for w in out:
            budget = height - len(w)
            for ht in range(budget + 1):
                if ht == 0:
                    new.append(w)
                    continue
                for mu, words in per_height[ht]:
                    for nodes in words:
                        new.append(w + tuple((i, m) for i in nodes))
        out = new
    return sorted(set(out), key=lambda w: (len(w), w))


def _multidegrees_of_height(n, ht):
    if n == 1:
        return [(ht,)]
    out = []
    for first in range(ht + 1):
        for rest in _multidegrees_of_height(n - 1, ht - first):
            out.append((first,) + rest)
    return out


def _split_nonneg(word):
    """Split a normal word at the level-0 boundary: (levels >= 0, levels < 0)."""
    for k, (_, m) in enumerate(word):
        if m < 0:
            return word[:k], word[k:]
    return word, ()


def tensor_check(alg, seq, level_hi, height):
    """Verify the product decomposition of the nonnegative-level subalgebra.

    Independence: products of braid images of canonical monomials with PBW
    elements, enumerated within the height budget, must have full rank.
    Spanning: every canonical monomial within the window decomposes
    constructively; its inverse braid image splits at the level-0 boundary
    and every negative tail must expand exactly in the inverse-image basis.
    Returns a report dict with one entry per fine degree.
    """
    seq = tuple(seq)
    word = word_of_seq(seq)
    inv_word = tuple((i, -1) for i in reversed(seq))
    zs = canonical_monomials(alg, 0, level_hi, height)
    cus = CuspidalSet(alg, seq) if seq else None
    inv = cus.inverse_family() if cus else None
    # independence of the forward products
    rows = []
    if cus:
        us = _bounded_indices(cus, height)
    else:
        us = [()]
    for z in zs:
        z_elem = Element(alg, {z: _ONE})
        tz = apply_braid(word, z_elem)
        for u in us:
            ht = len(z) + (sum(uk * cus.heights[k] for k, uk in enumerate(u)) if cus else 0)
            if ht > height:
                continue
            prod = tz * cus.pbw_element(u) if cus else tz
            rows.append(dict(prod.terms))
    echelon = _echelon_rows(rows)
    independent = len(echelon) == len(rows)
    # constructive spanning through the inverse braid action
    targets = {}
    for w in zs:
        targets.setdefault(alg.fine_degree_of_word(w), []).append(w)
    degree_reports = []
    for deg in sorted(targets):
        words = targets[deg]
        spanned = True
        for w in words:
            v = apply_braid(inv_word, Element(alg, {w: _ONE}))
            tails = {}
            for mon, c in v.terms.items():
                head, tail = _split_nonneg(mon)
                tails.setdefault(head, {})[tail] = c
            for head, tailterms in tails.items():
                y = Element(alg, tailterms)
                if inv is None:
                    if set(tailterms) != {()}:
                        spanned = False
                        break
                    continue
                _, residual = inv.expand(y)
                if residual:
                    spanned = False
                    break
            if not spanned:
                break
        degree_reports.append({
            "degree": [[m, list(mu)] for m, mu in deg],
            "dim": len(words),
            "spanned": spanned,
        })
    return {
        "products": len(rows),
        "rank": len(echelon),
        "independent": independent,
        "fine_degrees": degree_reports,
        "passed": independent and all(d["spanned"] for d in degree_reports),
    }


def _bounded_indices(cus, height):
    out = []

    def rec(k, acc, ht):
        if k == cus.r:
            out.append(tuple(acc))
            return
        step = cus.heights[k]
        uk = 0
        while ht + uk * step <= height:
            acc.append(uk)
            rec(k + 1, acc, ht + uk * step)
            acc.pop()
            uk += 1

    rec(0, [], 0)
    return sorted(out, key=lambda u: (sum(u), u))


def _echelon_rows(rows):
    """Sparse echelon basis {pivot word: row dict} of the span of ``rows``."""
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
    return pivots


def _in_span(vec, echelon):
    row = dict(vec)
    while row:
        p = max(row)
        prow = echelon.get(p)
        if prow is None:
            return False
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
    return True


# ---------------------------------------------------------------------------
# golden-file format for PBW coordinates
# ---------------------------------------------------------------------------

def coords_to_json(coords):
    return [{"u": list(u), "coeff": scalar_to_str(coords[u])} for u in sorted(coords)]


def coords_from_json(data):
    return {tuple(entry["u"]): parse_scalar(entry["coeff"]) for entry in data}
