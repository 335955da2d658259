"""Scalar backends: exact quadratic-field numbers and dual numbers."""

from .backend import (
    EXACT,
    FLOAT,
    HAVE_EXTENSION,
    Backend,
    FloatDual,
    isclose,
    parse_scalar,
    to_float,
)
from .dual import Dual, directional, seed_variables, value_of
from .quad import QuadNum, as_fraction, metallic_sigma, quad_conjugate

__all__ = [
    "Backend",
    "Dual",
    "EXACT",
    "FLOAT",
    "FloatDual",
    "HAVE_EXTENSION",
    "QuadNum",
    "as_fraction",
    "directional",
    "isclose",
    "metallic_sigma",
    "parse_scalar",
    "quad_conjugate",
    "seed_variables",
    "to_float",
    "value_of",
]
