"""Positive roots and Kostant partition counts for finite-type data.

This is the independent dimension oracle: the number of canonical words
the rewriting engine keeps at a multidegree must match the number of
ways of writing that multidegree as a multiset of positive roots.
"""

from __future__ import annotations

from qboson.cartan import CartanError


def positive_roots(datum, max_roots=2000):
    """All positive roots, found by closing the simple roots under reflections.

    Raises CartanError if the closure exceeds ``max_roots`` (infinite type).
    """
    roots = {datum.simple_root(i) for i in range(datum.n)}
    frontier = set(roots)
    while frontier:
        new = set()
        for r in frontier:
            for i in range(datum.n):
                s = datum.reflect(i, r)
                if s not in roots:
                    new.add(s)
        roots |= new
        frontier = new
        if len(roots) > max_roots:
            raise CartanError("root system is not finite within the budget")
    pos = [r for r in roots if any(r) and all(x >= 0 for x in r)]
    pos.sort()
    return pos


def kostant_count(datum, mu):
    """Number of multisets of positive roots summing to ``mu``."""
    mu = tuple(mu)
    if any(x < 0 for x in mu):
        return 0
    roots = positive_roots(datum)
    memo = {}

    def count(idx, rest):
        if not any(rest):
            return 1
        if idx == len(roots):
            return 0
        key = (idx, rest)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = count(idx + 1, rest)
        r = roots[idx]
        cur = rest
        while True:
            cur = tuple(a - b for a, b in zip(cur, r))
            if any(x < 0 for x in cur):
                break
            total += count(idx + 1, cur)
        memo[key] = total
        return total

    return count(0, mu)
