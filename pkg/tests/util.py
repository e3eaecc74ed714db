"""Seeded random generators shared by the test modules."""

from fractions import Fraction

from qboson.scalar import LaurentPoly, Scalar


def random_laurent(rng, max_terms=4, span=4):
    c = {}
    for _ in range(rng.randint(1, max_terms)):
        c[rng.randint(-span, span)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return LaurentPoly(c)


def random_scalar(rng, nonzero=False):
    num = random_laurent(rng)
    den = random_laurent(rng)
    while den.is_zero():
        den = random_laurent(rng)
    s = Scalar(num, den)
    if nonzero and s.is_zero():
        return Scalar.one() + s
    return s


def random_word(rng, n_nodes, max_len=4, lo=-2, hi=2):
    return tuple((rng.randrange(n_nodes), rng.randint(lo, hi))
                 for _ in range(rng.randint(0, max_len)))


def random_element(alg, rng, max_len=3, lo=-1, hi=1, terms=3):
    pairs = []
    for _ in range(rng.randint(1, terms)):
        word = random_word(rng, alg.datum.n, max_len, lo, hi)
        coeff = Scalar.q_power(rng.randint(-2, 2), rng.randint(-3, 3))
        pairs.append((word, coeff))
    return alg.normal_form(pairs)


def random_homogeneous(alg, rng, max_len=3, lo=-1, hi=1):
    """A random weight-homogeneous element (single normalized word's class)."""
    word = random_word(rng, alg.datum.n, max_len, lo, hi)
    x = alg.normal_form([(word, Scalar.q_power(rng.randint(-1, 1)))])
    if x.is_zero():
        return alg.one()
    comps = alg.homogeneous_components(x)
    return next(iter(comps.values()))
