"""Forward-mode dual numbers, pure Python.

``Dual`` is generic over its coefficient type: values and partials may be
floats, Fractions or :class:`~mlh.scalar.quad.QuadNum`.  It is also the
fallback for the float-specialised Cython kernel ``_cdual.CDual``.
"""

from __future__ import annotations

__all__ = ["Dual", "seed_variables", "directional", "value_of"]


class Dual:
    __slots__ = ("value", "partials")

    def __init__(self, value, partials=()):
        self.value = value
        self.partials = tuple(partials)

    def _lift(self, other):
        if isinstance(other, Dual):
            return other
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            try:
                return Dual(self.value + other, self.partials)
            except TypeError:
                return NotImplemented
        return Dual(self.value + o.value, _zip_add(self.partials, o.partials))

    def __radd__(self, other):
        try:
            return Dual(other + self.value, self.partials)
        except TypeError:
            return NotImplemented

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            try:
                return Dual(self.value - other, self.partials)
            except TypeError:
                return NotImplemented
        return Dual(self.value - o.value, _zip_sub(self.partials, o.partials))

    def __rsub__(self, other):
        try:
            return Dual(other - self.value, tuple(-d for d in self.partials))
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            try:
                return Dual(self.value * other, tuple(d * other for d in self.partials))
            except TypeError:
                return NotImplemented
        a, b = self.value, o.value
        return Dual(a * b, _zip_lin(b, self.partials, a, o.partials))

    def __rmul__(self, other):
        try:
            return Dual(other * self.value, tuple(other * d for d in self.partials))
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            inv = 1 / other
            return Dual(self.value * inv, tuple(d * inv for d in self.partials))
        inv = 1 / o.value
        v = self.value * inv
        return Dual(v, tuple(d * inv for d in _zip_lin(1, self.partials, -v, o.partials)))

    def __rtruediv__(self, other):
        inv = 1 / self.value
        v = other * inv
        return Dual(v, tuple(-v * inv * d for d in self.partials))

    def __neg__(self):
        return Dual(-self.value, tuple(-d for d in self.partials))

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return Dual(self.value ** 0, tuple(0 * d for d in self.partials))
        if k < 0:
            return 1 / (self ** (-k))
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def __float__(self):
        return float(self.value)

    def directional(self, coeffs):
        total = 0
        for c, d in zip(coeffs, self.partials):
            total = total + c * d
        return total

    def __repr__(self):
        return f"Dual({self.value!r}, {self.partials!r})"


def _zip_add(a, b):
    if len(a) == len(b):
        return tuple(x + y for x, y in zip(a, b))
    if not a:
        return b
    if not b:
        return a
    raise ValueError("partials length mismatch")


def _zip_sub(a, b):
    if len(a) == len(b):
        return tuple(x - y for x, y in zip(a, b))
    if not b:
        return a
    if not a:
        return tuple(-y for y in b)
    raise ValueError("partials length mismatch")


def _zip_lin(ca, a, cb, b):
    """ca*a + cb*b elementwise, treating an empty tuple as zero."""
    if len(a) == len(b):
        return tuple(ca * x + cb * y for x, y in zip(a, b))
    if not a:
        return tuple(cb * y for y in b)
    if not b:
        return tuple(ca * x for x in a)
    raise ValueError("partials length mismatch")


def seed_variables(values, cls=Dual, zero=0, one=1):
    """Independent variables: the i-th carries the i-th unit partial."""
    n = len(values)
    out = []
    for i, v in enumerate(values):
        partials = [zero] * n
        partials[i] = one
        out.append(cls(v, tuple(partials)))
    return out


def directional(x, coeffs):
    """Derivative of ``x`` along the chart direction ``coeffs`` (0 for constants)."""
    if hasattr(x, "directional"):
        return x.directional(coeffs)
    return 0


def value_of(x):
    return x.value if hasattr(x, "partials") else x
