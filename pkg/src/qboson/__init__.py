"""Exact computation kernel for level-indexed q-boson algebras."""

from qboson.scalar import LaurentPoly, Scalar, ScalarError, q_binom, q_factorial, q_int
from qboson.cartan import CartanDatum, CartanError, preset

__all__ = [
    "LaurentPoly",
    "Scalar",
    "ScalarError",
    "q_int",
    "q_factorial",
    "q_binom",
    "CartanDatum",
    "CartanError",
    "preset",
]
