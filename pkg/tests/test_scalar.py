from __future__ import annotations

import math
import os
import subprocess
import sys
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from mlh.errors import DomainError
from mlh.scalar import (
    EXACT,
    FLOAT,
    HAVE_EXTENSION,
    Backend,
    Dual,
    FloatDual,
    QuadNum,
    directional,
    metallic_sigma,
    parse_scalar,
    quad_conjugate,
    seed_variables,
    value_of,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
DISCS = [5, 8, 13, 2, 17]


@st.composite
def quads(draw, disc=None):
    d = disc if disc is not None else draw(st.sampled_from(DISCS))
    return QuadNum(draw(fractions), draw(fractions), d)


@st.composite
def quad_triples(draw):
    d = draw(st.sampled_from(DISCS))
    return draw(quads(d)), draw(quads(d)), draw(quads(d))


# -- QuadNum --------------------------------------------------------------------


@given(quad_triples())
def test_field_axioms(t):
    x, y, z = t
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    assert x + 0 == x and x * 1 == x


@given(quads())
def test_inverse_and_norm(x):
    assume(x != 0)
    assert x * x.inverse() == 1
    assert x / x == 1
    assert x * quad_conjugate(x) == x.norm()


@given(quads())
def test_float_matches(x):
    assert math.isclose(float(x), float(x.a) + float(x.b) * math.sqrt(x.disc), rel_tol=1e-12, abs_tol=1e-12)


@given(quads(), st.integers(min_value=-4, max_value=6))
def test_integer_powers(x, k):
    assume(x != 0 or k >= 0)
    expected = QuadNum(1, 0, x.disc)
    for _ in range(abs(k)):
        expected = expected * x
    if k < 0:
        expected = expected.inverse()
    assert x ** k == expected


@given(st.integers(min_value=1, max_value=20), st.integers(min_value=1, max_value=20))
def test_sigma_root_relations(p, q):
    s = metallic_sigma(p, q)
    assert s * s == p * s + q
    assert s * (p - s) == -q
    assert s + (p - s) == p
    assert float(s) > 0 > float(p - s)


def test_golden_inverse():
    s = metallic_sigma(1, 1)
    assert s.inverse() == s - 1


def test_silver_square_derived():
    # (1 + sqrt 2)^2 = 3 + 2 sqrt 2, expanded by hand
    s = metallic_sigma(2, 1)
    assert abs(float(s * s) - (3 + 2 * math.sqrt(2))) < 1e-14
    assert (s * s - 3) * (s * s - 3) == 8


def test_perfect_square_disc_folds():
    # p = 3, q = 4: disc 25, sigma = 4 is rational
    s = metallic_sigma(3, 4)
    assert s.is_rational() and s == 4
    assert QuadNum(1, 2, 9) == 7


@pytest.mark.parametrize("p,q", [(0, 1), (1, 0), (-1, 2), (1.5, 1)])
def test_sigma_domain_errors(p, q):
    with pytest.raises(DomainError):
        metallic_sigma(p, q)


def test_disc_mismatch_and_zero_division():
    with pytest.raises(DomainError):
        QuadNum(1, 1, 5) + QuadNum(1, 1, 8)
    with pytest.raises(ZeroDivisionError):
        QuadNum(1, 1, 5) / QuadNum(0, 0, 5)
    with pytest.raises(ZeroDivisionError):
        QuadNum(1, 1, 5) / 0
    with pytest.raises(DomainError):
        QuadNum(1, 1, 0)
    with pytest.raises(AttributeError):
        QuadNum(1, 1, 5).a = 2


@given(quads())
def test_json_round_trip(x):
    assert QuadNum.from_json(x.to_json(), x.disc) == x


@given(quads())
def test_hash_consistent_with_rational_equality(x):
    if x.is_rational():
        assert hash(x) == hash(x.a)
        assert x == x.a


# -- parse_scalar -------------------------------------------------------------------


def test_parse_scalar_forms():
    s = metallic_sigma(1, 1)
    assert parse_scalar(3, 1, 1) == 3
    assert parse_scalar([1, 2], 1, 1) == Fraction(1, 2)
    assert parse_scalar("p-sigma", 1, 1) == 1 - s
    assert parse_scalar("-sigma**2", 1, 1) == -(s * s)
    assert parse_scalar("1/(2*sigma)", 1, 1) == 1 / (2 * s)
    assert parse_scalar({"a": [1, 2], "b": [1, 2]}, 1, 1) == s
    assert parse_scalar("D", 2, 1) == 8


@pytest.mark.parametrize("bad", ["sigma +", "import os", "__import__('os')", "x", 1.5, True, [1, 0], None])
def test_parse_scalar_rejects(bad):
    with pytest.raises(DomainError):
        parse_scalar(bad, 1, 1)


# -- dual numbers -------------------------------------------------------------------

DUAL_CLASSES = [Dual] + ([FloatDual] if HAVE_EXTENSION else [])
small = st.floats(min_value=-3, max_value=3, allow_nan=False)


def _poly(x, y, z):
    return 3 * x * x * y - x / (2 + y * y) + z ** 3 - 1.5 * x * z + 2.0 / (3 + x * x)


_SX, _SY, _SZ = sympy.symbols("x y z")
_SPOLY = 3 * _SX ** 2 * _SY - _SX / (2 + _SY ** 2) + _SZ ** 3 - sympy.Rational(3, 2) * _SX * _SZ + 2 / (3 + _SX ** 2)
_GRAD = [sympy.lambdify((_SX, _SY, _SZ), sympy.diff(_SPOLY, v)) for v in (_SX, _SY, _SZ)]


@pytest.mark.parametrize("cls", DUAL_CLASSES)
@given(small, small, small)
def test_dual_gradient_matches_symbolic(cls, x, y, z):
    xs = seed_variables([x, y, z], cls, 0.0, 1.0)
    out = _poly(*xs)
    assert math.isclose(value_of(out), _poly(x, y, z), rel_tol=1e-12, abs_tol=1e-12)
    for i, g in enumerate(_GRAD):
        assert math.isclose(out.partials[i], g(x, y, z), rel_tol=1e-10, abs_tol=1e-10)


@pytest.mark.skipif(not HAVE_EXTENSION, reason="compiled extension not built")
@given(small, small, small, st.lists(small, min_size=3, max_size=3))
def test_cdual_matches_pure_python(x, y, z, coeffs):
    a = _poly(*seed_variables([x, y, z], Dual, 0.0, 1.0))
    b = _poly(*seed_variables([x, y, z], FloatDual, 0.0, 1.0))
    assert math.isclose(a.value, b.value, rel_tol=1e-13, abs_tol=1e-13)
    for u, v in zip(a.partials, b.partials):
        assert math.isclose(u, v, rel_tol=1e-12, abs_tol=1e-12)
    assert math.isclose(a.directional(coeffs), b.directional(coeffs), rel_tol=1e-12, abs_tol=1e-12)


def test_exact_dual_over_quadnum():
    s = metallic_sigma(1, 1)
    x, y = seed_variables([s, QuadNum(2, 0, 5)], Dual, 0, 1)
    f = x * x * y - s * y / x
    # d/dx = 2xy + s y / x^2, d/dy = x^2 - s/x
    assert f.partials[0] == 2 * s * 2 + s * 2 / (s * s)
    assert f.partials[1] == s * s - 1
    assert directional(f, [1, 0]) == f.partials[0]
    assert directional(7, [1, 0]) == 0


def test_backend_seed_modes():
    vals = [0.5, -1.0]
    assert EXACT.seed([1, 2])[0].partials == (1, 0)
    assert isinstance(FLOAT.seed(vals)[0], FloatDual)
    assert Backend(derivative="fd").seed(vals) == vals
    assert FLOAT.is_zero(1e-12) and not FLOAT.is_zero(1e-6)
    assert EXACT.is_zero(QuadNum(0, 0, 5)) and not EXACT.is_zero(QuadNum(0, 1, 5))


@pytest.mark.skipif(not HAVE_EXTENSION, reason="compiled extension not built")
def test_cdual_capacity_limit():
    with pytest.raises(ValueError):
        FloatDual(0.0, [0.0] * 9)


def test_pure_python_fallback_env():
    env = dict(os.environ, MLH_PURE_PYTHON="1")
    code = ("import mlh.scalar as s; from mlh.scalar.dual import Dual; "
            "assert not s.HAVE_EXTENSION and s.FloatDual is Dual; print('ok')")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"
