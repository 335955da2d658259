# cython: language_level=3
"""Float dual numbers with a fixed-capacity partials array.

Same public surface as :class:`mlh.scalar.dual.Dual` restricted to
float coefficients; operands may be ``CDual``, ``int`` or ``float``.
"""

cdef enum:
    MAXP = 8


cdef class CDual:
    cdef double _v
    cdef double _d[MAXP]
    cdef int _n

    def __init__(self, value, partials=()):
        cdef int i
        cdef int n = len(partials)
        if n > MAXP:
            raise ValueError("CDual supports at most 8 partials")
        self._v = value
        self._n = n
        for i in range(n):
            self._d[i] = partials[i]

    @property
    def value(self):
        return self._v

    @property
    def partials(self):
        return tuple([self._d[i] for i in range(self._n)])

    def directional(self, coeffs):
        cdef double total = 0.0
        cdef int i = 0
        for c in coeffs:
            if i >= self._n:
                break
            total += <double>c * self._d[i]
            i += 1
        return total

    def __float__(self):
        return self._v

    def __repr__(self):
        return f"CDual({self._v!r}, {self.partials!r})"

    def __add__(self, other):
        cdef CDual r, o
        cdef int i
        if isinstance(other, CDual):
            o = <CDual>other
            r = _like(self, o)
            r._v = self._v + o._v
            for i in range(r._n):
                r._d[i] = _d(self, i) + _d(o, i)
            return r
        if isinstance(other, (int, float)):
            r = _copy(self)
            r._v = self._v + <double>other
            return r
        return NotImplemented

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        cdef CDual r, o
        cdef int i
        if isinstance(other, CDual):
            o = <CDual>other
            r = _like(self, o)
            r._v = self._v - o._v
            for i in range(r._n):
                r._d[i] = _d(self, i) - _d(o, i)
            return r
        if isinstance(other, (int, float)):
            r = _copy(self)
            r._v = self._v - <double>other
            return r
        return NotImplemented

    def __rsub__(self, other):
        cdef CDual r
        cdef int i
        if isinstance(other, (int, float)):
            r = _empty(self._n)
            r._v = <double>other - self._v
            for i in range(self._n):
                r._d[i] = -self._d[i]
            return r
        return NotImplemented

    def __mul__(self, other):
        cdef CDual r, o
        cdef int i
        cdef double c
        if isinstance(other, CDual):
            o = <CDual>other
            r = _like(self, o)
            r._v = self._v * o._v
            for i in range(r._n):
                r._d[i] = _d(self, i) * o._v + self._v * _d(o, i)
            return r
        if isinstance(other, (int, float)):
            c = <double>other
            r = _empty(self._n)
            r._v = self._v * c
            for i in range(self._n):
                r._d[i] = self._d[i] * c
            return r
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        cdef CDual r, o
        cdef int i
        cdef double inv, v
        if isinstance(other, CDual):
            o = <CDual>other
            if o._v == 0.0:
                raise ZeroDivisionError("CDual division by zero")
            inv = 1.0 / o._v
            v = self._v * inv
            r = _like(self, o)
            r._v = v
            for i in range(r._n):
                r._d[i] = (_d(self, i) - v * _d(o, i)) * inv
            return r
        if isinstance(other, (int, float)):
            if other == 0:
                raise ZeroDivisionError("CDual division by zero")
            inv = 1.0 / <double>other
            r = _empty(self._n)
            r._v = self._v * inv
            for i in range(self._n):
                r._d[i] = self._d[i] * inv
            return r
        return NotImplemented

    def __rtruediv__(self, other):
        cdef CDual r
        cdef int i
        cdef double inv, v
        if isinstance(other, (int, float)):
            if self._v == 0.0:
                raise ZeroDivisionError("CDual division by zero")
            inv = 1.0 / self._v
            v = <double>other * inv
            r = _empty(self._n)
            r._v = v
            for i in range(self._n):
                r._d[i] = -v * inv * self._d[i]
            return r
        return NotImplemented

    def __neg__(self):
        cdef CDual r = _empty(self._n)
        cdef int i
        r._v = -self._v
        for i in range(self._n):
            r._d[i] = -self._d[i]
        return r

    def __pos__(self):
        return self

    def __pow__(self, k, mod):
        cdef CDual r
        cdef int i
        cdef double c
        if not isinstance(k, int) or mod is not None:
            return NotImplemented
        if k == 0:
            r = _empty(self._n)
            r._v = 1.0
            return r
        if k < 0:
            return 1.0 / self.__pow__(-k, None)
        c = k * self._v ** (k - 1)
        r = _empty(self._n)
        r._v = self._v ** k
        for i in range(self._n):
            r._d[i] = c * self._d[i]
        return r


cdef inline double _d(CDual x, int i):
    return x._d[i] if i < x._n else 0.0


cdef inline CDual _empty(int n):
    cdef CDual r = CDual.__new__(CDual)
    r._n = n
    return r


cdef inline CDual _copy(CDual x):
    cdef CDual r = _empty(x._n)
    cdef int i
    for i in range(x._n):
        r._d[i] = x._d[i]
    r._v = x._v
    return r


cdef inline CDual _like(CDual a, CDual b):
    if a._n >= b._n:
        return _empty(a._n)
    return _empty(b._n)
