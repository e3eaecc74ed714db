"""The empty-word projection and the two bilinear forms.

``m_project`` reads off the coefficient of the empty monomial.  The big
form is hform(x, y) = m_project(x * dbar(y)); the small form rescales it
by q^(-N(wt x)) per weight component and factors over level
decompositions with no twist.  Both vanish across distinct weights, which
the implementations use to skip work.
"""

from __future__ import annotations

from qboson.scalar import Scalar
from qboson.symmetry import dbar


def m_project(x):
    """Coefficient of the empty monomial (the weight-zero, level-free part)."""
    return x.terms.get((), Scalar.zero())


def hform(x, y):
    """The bilinear form m_project(x * dbar(y))."""
    alg = x.alg
    out = Scalar.zero()
    ycomps = alg.homogeneous_components(y)
    for wt, xc in alg.homogeneous_components(x).items():
        yc = ycomps.get(wt)
        if yc is None:
            continue
        out = out + m_project(alg.multiply(xc, dbar(yc)))
    return out


def pair(x, y):
    """The rescaled form q^(-N(wt)) * hform on matching weight components."""
    alg = x.alg
    out = Scalar.zero()
    ycomps = alg.homogeneous_components(y)
    for wt, xc in alg.homogeneous_components(x).items():
        yc = ycomps.get(wt)
        if yc is None:
            continue
        twist = Scalar.v_power(-alg.datum.form(wt, wt))  # q^(-N(wt))
        out = out + twist * m_project(alg.multiply(xc, dbar(yc)))
    return out


def phi_gen(alg, m, i):
    """q_i^(1/2) f[i,m], the level-m image of the dual generator."""
    return alg.gen(i, m).scaled(Scalar.v_power(alg.datum.d(i)))


def phi_power(alg, m, i, n):
    """q_i^(n^2/2) f[i,m]^n, the level-m image of the divided dual power."""
    word = ((i, m),) * n
    return alg.normal_form([(word, Scalar.v_power(alg.datum.d(i) * n * n))])


def phi(alg, m, factors):
    """phi_m of a product of dual powers, given as (node, exponent) pairs."""
    out = alg.one()
    for i, n in factors:
        out = out * phi_power(alg, m, i, n)
    return out


def phi_bracket_pair(alg, m, i, j):
    """phi_m of the quantum minor pairing element for adjacent nodes i, j.

    Defined when (alpha_i, alpha_j) < 0 as
    (phi<i> phi<j> - q^(-(ai,aj)) phi<j> phi<i>) / (1 - q^(-2(ai,aj))).
    """
    a = alg.datum.form(alg.datum.simple_root(i), alg.datum.simple_root(j))
    if a >= 0:
        raise ValueError("the pairing element needs (alpha_i, alpha_j) < 0")
    fi = phi_gen(alg, m, i)
    fj = phi_gen(alg, m, j)
    num = fi * fj - (fj * fi).scaled(Scalar.q_power(-a))
    den = Scalar.one() - Scalar.q_power(-2 * a)
    return num.scaled(den.inv())
