"""Small dense linear algebra, generic over the scalar backend.

Matrices are lists of rows; vectors are lists.  Entries may be ints,
Fractions, QuadNums, floats or dual numbers.  Exact backends pivot on the
first nonzero entry; float backends use partial pivoting and treat pivots
below ``rank_rtol * max|entry|`` as zero.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import Backend

__all__ = [
    "dot",
    "vadd",
    "vsub",
    "vscale",
    "lincomb",
    "matvec",
    "matmul",
    "transpose",
    "identity",
    "rref",
    "nullspace",
    "rank",
    "solve",
    "inverse",
    "det",
    "max_abs",
]


def dot(a, b):
    total = 0
    for x, y in zip(a, b):
        total = total + x * y
    return total


def vadd(a, b):
    return [x + y for x, y in zip(a, b)]


def vsub(a, b):
    return [x - y for x, y in zip(a, b)]


def vscale(c, a):
    return [c * x for x in a]


def lincomb(coeffs, vectors, length=None):
    if length is None:
        length = len(vectors[0])
    out = [0] * length
    for c, v in zip(coeffs, vectors):
        for i in range(length):
            out[i] = out[i] + c * v[i]
    return out


def matvec(A, v):
    return [dot(row, v) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def identity(n, one=1, zero=0):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def max_abs(values, backend: Backend) -> float:
    return max((backend.magnitude(v) for v in values), default=0.0)


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _pivot_row(M, col, start, backend: Backend, threshold: float):
    if backend.exact:
        for r in range(start, len(M)):
            if not backend.is_zero(M[r][col]):
                return r
        return None
    best, best_mag = None, threshold
    for r in range(start, len(M)):
        mag = backend.magnitude(M[r][col])
        if mag > best_mag:
            best, best_mag = r, mag
    return best


def rref(A, backend: Backend):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    M = [list(row) for row in A]
    if not M:
        return M, []
    nrows, ncols = len(M), len(M[0])
    scale = max((backend.magnitude(x) for row in M for x in row), default=0.0)
    threshold = backend.rank_rtol * scale if not backend.exact else 0.0
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pr = _pivot_row(M, c, r, backend, threshold)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = _inv(M[r][c])
        M[r] = [x * inv for x in M[r]]
        for i in range(nrows):
            if i != r:
                f = M[i][c]
                if backend.exact and backend.is_zero(f):
                    continue
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def nullspace(A, backend: Backend):
    """Basis of {x : A x = 0}; each vector has a 1 in its free column."""
    R, pivots = rref(A, backend)
    ncols = len(A[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def rank(A, backend: Backend) -> int:
    return len(rref(A, backend)[1])


def solve(A, b, backend: Backend):
    """Solve the square system A x = b."""
    n = len(A)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug, backend)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [R[i][n] for i in range(n)]


def inverse(A, backend: Backend):
    """Inverse of a square matrix (ZeroDivisionError if singular)."""
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug, backend)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [R[i][n:] for i in range(n)]


def det(A, backend: Backend):
    """Determinant by elimination (row swaps tracked)."""
    M = [list(row) for row in A]
    n = len(M)
    scale = max((backend.magnitude(x) for row in M for x in row), default=0.0)
    threshold = backend.rank_rtol * scale if not backend.exact else 0.0
    result = 1
    for c in range(n):
        pr = _pivot_row(M, c, c, backend, threshold)
        if pr is None:
            return 0 * M[0][0] if n else 1
        if pr != c:
            M[c], M[pr] = M[pr], M[c]
            result = -result
        piv = M[c][c]
        result = result * piv
        inv = _inv(piv)
        for i in range(c + 1, n):
            f = M[i][c] * inv
            M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return result
