"""Exact arithmetic in Q(sqrt(D)) with D = p^2 + 4q.

Rationals are :class:`fractions.Fraction` (arbitrary precision, always in
lowest terms).  A :class:`QuadNum` is ``a + b*sqrt(D)``; the discriminant is
carried unreduced so the metallic number is always ``p/2 + (1/2)sqrt(D)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from ..errors import DomainError

__all__ = ["QuadNum", "metallic_sigma", "quad_conjugate", "as_fraction"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@lru_cache(maxsize=None)
def _is_square(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


_ZERO = Fraction(0)


def _new(a: Fraction, b: Fraction, disc: int) -> "QuadNum":
    """Internal constructor for already-validated Fraction parts."""
    if b and _is_square(disc) is not None:
        a, b = a + b * _is_square(disc), _ZERO
    obj = object.__new__(QuadNum)
    _set(obj, "a", a)
    _set(obj, "b", b)
    _set(obj, "disc", disc)
    return obj


_set = object.__setattr__


class QuadNum:
    """Immutable element ``a + b*sqrt(disc)`` of a real quadratic field.

    When ``disc`` is a perfect square the irrational part is folded into
    ``a`` so that equality stays componentwise.
    """

    __slots__ = ("a", "b", "disc")

    def __init__(self, a=0, b=0, disc: int = 5):
        if not isinstance(disc, int) or disc <= 0:
            raise DomainError(f"discriminant must be a positive integer, got {disc!r}")
        a = as_fraction(a)
        b = as_fraction(b)
        root = _is_square(disc)
        if root is not None and b:
            a, b = a + b * root, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "disc", disc)

    def __setattr__(self, name, value):
        raise AttributeError("QuadNum is immutable")

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> QuadNum | None:
        if isinstance(other, QuadNum):
            if other.disc != self.disc:
                raise DomainError(f"discriminant mismatch: {self.disc} vs {other.disc}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return _new(Fraction(other), _ZERO, self.disc)
        if isinstance(other, Fraction):
            return _new(other, _ZERO, self.disc)
        return None

    # -- field operations ----------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not (o.a or o.b):
            return self
        if not (self.a or self.b):
            return o
        return _new(self.a + o.a, self.b + o.b, self.disc)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not (o.a or o.b):
            return self
        return _new(self.a - o.a, self.b - o.b, self.disc)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _new(o.a - self.a, o.b - self.b, self.disc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other or not (self.a or self.b):
                return _new(_ZERO, _ZERO, self.disc)
            return _new(self.a * other, self.b * other, self.disc)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, o.a, o.b
        if not (a1 or b1) or not (a2 or b2):
            return _new(_ZERO, _ZERO, self.disc)
        if not b1 and not b2:
            return _new(a1 * a2, _ZERO, self.disc)
        return _new(a1 * a2 + self.disc * b1 * b2, a1 * b2 + b1 * a2, self.disc)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.disc * self.b * self.b

    def conjugate(self) -> QuadNum:
        return QuadNum(self.a, -self.b, self.disc)

    def inverse(self) -> QuadNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadNum division by zero")
        return QuadNum(self.a / n, -self.b / n, self.disc)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QuadNum division by zero")
            return QuadNum(self.a / other, self.b / other, self.disc)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return _new(-self.a, -self.b, self.disc)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadNum(1, 0, self.disc)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / conversion ----------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadNum):
            return self.disc == other.disc and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.disc))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.disc)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QuadNum({self.a} + {self.b}*sqrt({self.disc}))"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.disc})"

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {
            "a": [self.a.numerator, self.a.denominator],
            "b": [self.b.numerator, self.b.denominator],
        }

    @classmethod
    def from_json(cls, data: dict, disc: int) -> QuadNum:
        a = Fraction(*data["a"]) if isinstance(data["a"], list) else Fraction(data["a"])
        b = Fraction(*data.get("b", [0, 1])) if isinstance(data.get("b", 0), list) else Fraction(data.get("b", 0))
        return cls(a, b, disc)


def metallic_sigma(p: int, q: int) -> QuadNum:
    """Positive root of x^2 - p x - q = 0 as an exact quadratic number."""
    if not (isinstance(p, int) and isinstance(q, int)) or p < 1 or q < 1:
        raise DomainError(f"metallic numbers need positive integers p, q; got p={p!r}, q={q!r}")
    return QuadNum(Fraction(p, 2), Fraction(1, 2), p * p + 4 * q)


def quad_conjugate(x: QuadNum) -> QuadNum:
    return x.conjugate()
