"""Flat semi-Euclidean ambient spaces and constant metallic structures."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import DomainError, InvariantViolation
from .scalar import EXACT, QuadNum, metallic_sigma

__all__ = [
    "SemiEuclideanSpace",
    "MetallicStructure",
    "ProductStructure",
    "CompatReport",
    "metric_eval",
    "metallic_from_product",
    "product_from_metallic",
    "check_metallic_compat",
    "diagonal_structure",
]


@dataclass(frozen=True)
class SemiEuclideanSpace:
    """R^{dim} with the diagonal metric diag(signature)."""

    signature: tuple

    def __post_init__(self):
        sig = tuple(int(s) for s in self.signature)
        if any(s not in (-1, 1) for s in sig):
            raise DomainError(f"signature entries must be +-1, got {self.signature!r}")
        object.__setattr__(self, "signature", sig)
        if not 0 < self.index < self.dim:
            raise DomainError(f"index must satisfy 0 < index < dim, got signature {sig}")

    @property
    def dim(self) -> int:
        return len(self.signature)

    @property
    def index(self) -> int:
        return sum(1 for s in self.signature if s < 0)

    def g(self, U, V):
        total = 0
        for s, u, v in zip(self.signature, U, V):
            if s > 0:
                total = total + u * v
            else:
                total = total - u * v
        return total

    def flat(self, V):
        """Metric dual (index lowering)."""
        return [v if s > 0 else -v for s, v in zip(self.signature, V)]

    def __str__(self):
        return f"R^{self.dim}_{self.index}"


def metric_eval(space: SemiEuclideanSpace, U, V):
    if len(U) != space.dim or len(V) != space.dim:
        raise DomainError(f"vectors must have length {space.dim}")
    return space.g(U, V)


def _qmatrix(rows, disc):
    return [[x if isinstance(x, QuadNum) else QuadNum(x, 0, disc) for x in row] for row in rows]


@dataclass(frozen=True)
class ProductStructure:
    F: tuple

    def __post_init__(self):
        object.__setattr__(self, "F", tuple(tuple(r) for r in self.F))

    @property
    def matrix(self):
        return [list(r) for r in self.F]

    def is_involutive(self) -> bool:
        n = len(self.F)
        return linalg.matmul(self.matrix, self.matrix) == linalg.identity(n)


@dataclass(frozen=True)
class MetallicStructure:
    """Constant (1,1)-tensor J with J^2 = pJ + qI, exact entries."""

    p: int
    q: int
    J: tuple
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        sigma = metallic_sigma(self.p, self.q)
        rows = _qmatrix(self.J, sigma.disc)
        object.__setattr__(self, "J", tuple(tuple(r) for r in rows))
        if self.validate:
            J = self.matrix
            n = len(J)
            lhs = linalg.matmul(J, J)
            rhs = [[self.p * J[i][j] + (self.q if i == j else 0) for j in range(n)] for i in range(n)]
            if lhs != rhs:
                raise InvariantViolation("J^2 != pJ + qI")

    @property
    def sigma(self) -> QuadNum:
        return metallic_sigma(self.p, self.q)

    @property
    def matrix(self):
        return [list(r) for r in self.J]

    @property
    def dim(self) -> int:
        return len(self.J)

    def apply(self, V):
        return [linalg.dot(row, V) for row in self.J]

    def float_matrix(self):
        return [[float(x) for x in row] for row in self.J]

    def projections(self):
        """Exact projectors onto the sigma and (p - sigma) eigenspaces."""
        s = self.sigma
        lam_plus, lam_minus = s, self.p - s
        gap = lam_plus - lam_minus
        n = self.dim
        J = self.matrix
        P_plus = [[(J[i][j] - (lam_minus if i == j else 0)) / gap for j in range(n)] for i in range(n)]
        P_minus = [[((lam_plus if i == j else 0) - J[i][j]) / gap for j in range(n)] for i in range(n)]
        return P_plus, P_minus

    def eigenspaces(self):
        """Bases (exact) of the sigma- and (p - sigma)-eigenspaces."""
        P_plus, P_minus = self.projections()
        return _column_basis(P_plus), _column_basis(P_minus)


def _column_basis(P):
    cols = linalg.transpose(P)
    R, pivots = linalg.rref(linalg.transpose(cols), EXACT)
    return [cols[c] for c in pivots]


def diagonal_structure(p: int, q: int, entries) -> MetallicStructure:
    n = len(entries)
    sigma = metallic_sigma(p, q)
    J = [[entries[i] if i == j else QuadNum(0, 0, sigma.disc) for j in range(n)] for i in range(n)]
    return MetallicStructure(p, q, J)


def metallic_from_product(F: ProductStructure, p: int, q: int, branch: str = "+") -> MetallicStructure:
    if not F.is_involutive():
        raise InvariantViolation("F is not involutive (F^2 != I)")
    sigma = metallic_sigma(p, q)
    sign = _sign(branch)
    half_p = Fraction(p, 2)
    c = sign * (2 * sigma - p) / 2
    n = len(F.F)
    J = [[(half_p if i == j else 0) + c * F.F[i][j] for j in range(n)] for i in range(n)]
    return MetallicStructure(p, q, J)


def product_from_metallic(J: MetallicStructure, branch: str = "+") -> ProductStructure:
    sigma = J.sigma
    sign = _sign(branch)
    gap = 2 * sigma - J.p
    n = J.dim
    F = [[sign * ((2 * J.J[i][j] - (J.p if i == j else 0)) / gap) for j in range(n)] for i in range(n)]
    F = [[_rationalize(x) for x in row] for row in F]
    return ProductStructure(F)


def _rationalize(x):
    if isinstance(x, QuadNum) and x.is_rational():
        a = x.a
        return int(a) if a.denominator == 1 else a
    return x


def _sign(branch: str) -> int:
    if branch in ("+", 1, "plus"):
        return 1
    if branch in ("-", -1, "minus"):
        return -1
    raise DomainError(f"branch must be '+' or '-', got {branch!r}")


@dataclass
class CompatReport:
    eq3: bool
    eq4: bool
    eq5: bool
    pairs_checked: int
    failures: list

    @property
    def passed(self) -> bool:
        return self.eq3 and self.eq4 and self.eq5

    def to_json(self) -> dict:
        return {
            "EQ3": self.eq3,
            "EQ4": self.eq4,
            "EQ5": self.eq5,
            "pairs_checked": self.pairs_checked,
            "passed": self.passed,
            "failures": self.failures,
        }


def check_metallic_compat(space: SemiEuclideanSpace, J, p: int | None = None, q: int | None = None,
                          pairs: int = 200, seed: int = 0) -> CompatReport:
    """Exact check of J^2 = pJ + qI, g(JU,V) = g(U,JV) and g(JU,JV) = p g(U,JV) + q g(U,V).

    ``J`` is a :class:`MetallicStructure` or a raw exact matrix (then ``p`` and
    ``q`` are required).  The last identity is sampled on ``pairs`` random
    rational vector pairs.
    """
    if isinstance(J, MetallicStructure):
        p, q, M = J.p, J.q, J.matrix
    else:
        if p is None or q is None:
            raise DomainError("raw matrices need p and q")
        M = _qmatrix(J, metallic_sigma(p, q).disc)
    n = space.dim
    if len(M) != n:
        raise DomainError("structure/space dimension mismatch")
    failures = []
    JJ = linalg.matmul(M, M)
    eq3 = all(JJ[i][j] == p * M[i][j] + (q if i == j else 0) for i in range(n) for j in range(n))
    if not eq3:
        failures.append("EQ3: J^2 != pJ + qI")
    # (GJ) symmetric <=> g(J e_i, e_j) = g(e_i, J e_j)
    sig = space.signature
    eq4 = all(sig[i] * M[i][j] == sig[j] * M[j][i] for i, j in itertools.combinations(range(n), 2))
    if not eq4:
        failures.append("EQ4: GJ is not symmetric")
    rng = random.Random(seed)
    eq5 = True
    for k in range(pairs):
        U = [Fraction(rng.randint(-16, 16), rng.randint(1, 16)) for _ in range(n)]
        V = [Fraction(rng.randint(-16, 16), rng.randint(1, 16)) for _ in range(n)]
        JU, JV = linalg.matvec(M, U), linalg.matvec(M, V)
        res = space.g(JU, JV) - p * space.g(U, JV) - q * space.g(U, V)
        if res != 0:
            eq5 = False
            failures.append(f"EQ5 residual {res} at pair {k}")
            break
    return CompatReport(eq3, eq4, eq5, pairs, failures)
