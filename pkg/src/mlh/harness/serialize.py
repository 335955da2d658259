"""JSON encoding of exact and floating scalars."""

from __future__ import annotations

from fractions import Fraction

from ..errors import SchemaError
from ..scalar import QuadNum, value_of

__all__ = ["scalar_json", "rational_json", "parse_rational"]


def rational_json(x) -> list:
    f = Fraction(x)
    return [f.numerator, f.denominator]


def parse_rational(data) -> Fraction:
    if not (isinstance(data, list) and len(data) == 2 and all(isinstance(v, int) for v in data) and data[1] != 0):
        raise SchemaError(f"expected [num, den], got {data!r}")
    return Fraction(data[0], data[1])


def scalar_json(x):
    """QuadNum -> {"a": [n,d], "b": [n,d]}; Fraction/int -> [n,d]; float -> float."""
    x = value_of(x)
    if isinstance(x, QuadNum):
        return x.to_json()
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return rational_json(x)
    return float(x)
