from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from mlh import linalg
from mlh.ambient import (
    MetallicStructure,
    ProductStructure,
    SemiEuclideanSpace,
    check_metallic_compat,
    diagonal_structure,
    metallic_from_product,
    product_from_metallic,
)
from mlh.errors import DomainError, InvariantViolation
from mlh.scalar import EXACT, FLOAT, metallic_sigma

small_frac = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def square_matrices(draw, lo=1, hi=5):
    n = draw(st.integers(min_value=lo, max_value=hi))
    return [[draw(small_frac) for _ in range(n)] for _ in range(n)]


def _sym(A):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in A])


# -- linalg against sympy --------------------------------------------------------


@given(square_matrices())
def test_det_and_rank_match_sympy(A):
    M = _sym(A)
    assert linalg.det(A, EXACT) == M.det()
    assert linalg.rank(A, EXACT) == M.rank()


@given(square_matrices())
def test_nullspace_is_exact_and_complete(A):
    null = linalg.nullspace(A, EXACT)
    assert len(null) == len(A) - _sym(A).rank()
    for v in null:
        assert all(x == 0 for x in linalg.matvec(A, v))


@given(square_matrices(), st.data())
def test_solve_and_inverse(A, data):
    if _sym(A).det() == 0:
        with pytest.raises(ZeroDivisionError):
            linalg.inverse(A, EXACT)
        return
    b = [data.draw(small_frac) for _ in A]
    x = linalg.solve(A, b, EXACT)
    assert linalg.matvec(A, x) == b
    inv = linalg.inverse(A, EXACT)
    assert linalg.matmul(A, inv) == linalg.identity(len(A))


def test_float_rank_tolerance():
    A = [[1.0, 2.0], [2.0, 4.0 + 1e-14]]
    assert linalg.rank(A, FLOAT) == 1


# -- spaces ---------------------------------------------------------------------------


def test_space_metric_and_flat():
    sp = SemiEuclideanSpace((-1, 1, -1, 1, 1))
    assert sp.dim == 5 and sp.index == 2
    s = metallic_sigma(1, 1)
    E = [s, -s, 1, 0, 1]
    N = [-s / 2, s / 2, Fraction(-1, 2), 0, Fraction(1, 2)]
    assert sp.g(E, E) == 0  # -s^2 + s^2 - 1 + 1
    assert sp.g(N, E) == 1  # (s^2 - s^2 + 1 + 1) / 2
    assert sp.flat([1, 2, 3, 4, 5]) == [-1, 2, -3, 4, 5]


@pytest.mark.parametrize("sig", [(1, 1), (-1, -1), (1, 2), ()])
def test_space_rejects(sig):
    with pytest.raises(DomainError):
        SemiEuclideanSpace(sig)


# -- structures ---------------------------------------------------------------------


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (3, 2), (1, 5)])
def test_product_conversion_known_values(p, q):
    s = metallic_sigma(p, q)
    n = 4
    I = ProductStructure([[1 if i == j else 0 for j in range(n)] for i in range(n)])
    J = metallic_from_product(I, p, q, "+")
    assert J.matrix == [[s if i == j else 0 for j in range(n)] for i in range(n)]
    assert product_from_metallic(J, "+") == I
    F = ProductStructure([[(-1 if i == 0 else 1) if i == j else 0 for j in range(n)] for i in range(n)])
    J = metallic_from_product(F, p, q, "+")
    assert J.matrix[0][0] == p - s and J.matrix[1][1] == s
    J2 = diagonal_structure(p, q, [p - s, s])
    assert product_from_metallic(J2, "+").matrix == [[-1, 0], [0, 1]]


@given(st.lists(st.sampled_from([1, -1]), min_size=2, max_size=7), st.sampled_from(["+", "-"]),
       st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6))
def test_product_round_trip(diag, branch, p, q):
    n = len(diag)
    F = ProductStructure([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])
    J = metallic_from_product(F, p, q, branch)
    assert product_from_metallic(J, branch) == F


def test_product_rejects_non_involutive():
    with pytest.raises(InvariantViolation):
        metallic_from_product(ProductStructure([[1, 1], [0, 1]]), 1, 1)
    with pytest.raises(DomainError):
        metallic_from_product(ProductStructure([[1, 0], [0, 1]]), 1, 1, "x")


def test_structure_validation():
    s = metallic_sigma(1, 1)
    with pytest.raises(InvariantViolation):
        MetallicStructure(1, 1, [[s, 1], [0, s]])
    with pytest.raises(InvariantViolation):
        diagonal_structure(1, 1, [s, 2])


def test_eigenspaces_and_projections():
    p, q = 2, 1
    s = metallic_sigma(p, q)
    J = diagonal_structure(p, q, [s, p - s, s])
    plus, minus = J.eigenspaces()
    assert len(plus) == 2 and len(minus) == 1
    for v in plus:
        assert J.apply(v) == [s * x for x in v]
    for v in minus:
        assert J.apply(v) == [(p - s) * x for x in v]
    Pp, Pm = J.projections()
    n = 3
    assert linalg.matmul(Pp, Pp) == Pp
    assert [[Pp[i][j] + Pm[i][j] for j in range(n)] for i in range(n)] == linalg.identity(n)


# -- compatibility -----------------------------------------------------------------------


def test_compat_sigma_identity_any_space():
    for sig in [(-1, 1), (-1, 1, 1, 1), (-1, -1, 1, 1, 1)]:
        sp = SemiEuclideanSpace(sig)
        for p, q in [(1, 1), (3, 2)]:
            s = metallic_sigma(p, q)
            J = diagonal_structure(p, q, [s] * len(sig))
            assert check_metallic_compat(sp, J, pairs=20).passed


def test_compat_detects_non_symmetric():
    sp = SemiEuclideanSpace((-1, 1, 1))
    rng = random.Random(3)
    M = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
    M[0][1], M[1][0] = 1, 2
    rep = check_metallic_compat(sp, M, p=1, q=1, pairs=10)
    assert not rep.eq4 and not rep.passed
    assert any(f.startswith("EQ4") for f in rep.failures)


def test_compat_detects_metric_incompatible_metallic():
    # a J-swap of a negative and a positive direction is metallic but not g-symmetric
    p, q = 1, 1
    s = metallic_sigma(p, q)
    F = ProductStructure([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    J = metallic_from_product(F, p, q)
    rep = check_metallic_compat(SemiEuclideanSpace((-1, 1, 1)), J, pairs=10)
    assert rep.eq3 and not rep.eq4 and not rep.eq5
    assert check_metallic_compat(SemiEuclideanSpace((1, 1, -1)), J, pairs=10).passed
    assert J.matrix[2][2] == s


def test_compat_raw_matrix_needs_pq():
    with pytest.raises(DomainError):
        check_metallic_compat(SemiEuclideanSpace((-1, 1)), [[1, 0], [0, 1]])
    with pytest.raises(DomainError):
        check_metallic_compat(SemiEuclideanSpace((-1, 1, 1)), diagonal_structure(1, 1, [metallic_sigma(1, 1)] * 2))
