"""Scalar backend contract: exact (QuadNum) or floating point (float / dual)."""

from __future__ import annotations

import ast
import math
import os
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError
from .dual import Dual, seed_variables, value_of
from .quad import QuadNum, metallic_sigma

try:
    if os.environ.get("MLH_PURE_PYTHON"):
        raise ImportError("pure-Python backend forced")
    from ._cdual import CDual as FloatDual

    HAVE_EXTENSION = True
except ImportError:
    FloatDual = Dual
    HAVE_EXTENSION = False

DEFAULT_TOL = 1e-9
RANK_RTOL = 1e-9


@dataclass(frozen=True)
class Backend:
    """How scalars are represented and compared.

    ``exact`` runs everything in Q(sqrt(D)); otherwise floats, with
    derivatives taken by dual numbers (``derivative="dual"``) or by central
    differences (``derivative="fd"``).
    """

    exact: bool = False
    tol: float = DEFAULT_TOL
    derivative: str = "dual"
    fd_step: float = 1e-6
    rank_rtol: float = RANK_RTOL
    dual_cls: type | None = None

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    def convert(self, x):
        if self.exact:
            return x
        if isinstance(x, (QuadNum, Fraction)):
            return float(x)
        return x

    def is_zero(self, x, scale: float = 1.0) -> bool:
        v = value_of(x)
        if self.exact:
            return v == 0
        return abs(float(v)) <= self.tol * scale

    def magnitude(self, x) -> float:
        return abs(float(value_of(x)))

    def seed(self, values):
        """Chart parameters as independent dual variables (plain values in fd mode)."""
        if self.exact:
            return seed_variables(values, Dual, 0, 1)
        if self.derivative == "fd":
            return [float(v) for v in values]
        cls = self.dual_cls or FloatDual
        return seed_variables([float(v) for v in values], cls, 0.0, 1.0)


EXACT = Backend(exact=True)
FLOAT = Backend(exact=False)


# -- scalar expressions --------------------------------------------------

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_scalar(spec, p: int, q: int) -> QuadNum:
    """Exact scalar from a manifest value.

    Accepts integers, ``[num, den]`` pairs, ``{"a": [..], "b": [..]}`` QuadNum
    records and arithmetic strings over ``sigma``, ``p``, ``q`` and ``D``
    (e.g. ``"p-sigma"``, ``"1/2"``, ``"-sigma**2"``).
    """
    sigma = metallic_sigma(p, q)
    disc = sigma.disc
    if isinstance(spec, bool):
        raise DomainError(f"invalid scalar {spec!r}")
    if isinstance(spec, int):
        return QuadNum(spec, 0, disc)
    if isinstance(spec, float):
        if not spec.is_integer():
            raise DomainError(f"exact scalars cannot be non-integral floats: {spec!r}")
        return QuadNum(int(spec), 0, disc)
    if isinstance(spec, list) and len(spec) == 2 and all(isinstance(v, int) for v in spec):
        if spec[1] == 0:
            raise DomainError("zero denominator")
        return QuadNum(Fraction(spec[0], spec[1]), 0, disc)
    if isinstance(spec, dict) and "a" in spec:
        return QuadNum.from_json(spec, disc)
    if isinstance(spec, str):
        env = {"sigma": sigma, "p": QuadNum(p, 0, disc), "q": QuadNum(q, 0, disc), "D": QuadNum(disc, 0, disc)}
        try:
            tree = ast.parse(spec, mode="eval")
        except SyntaxError as exc:
            raise DomainError(f"cannot parse scalar {spec!r}") from exc
        return _eval(tree.body, env, disc)
    raise DomainError(f"invalid scalar {spec!r}")


def _eval(node, env, disc):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return QuadNum(node.value, 0, disc)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise DomainError(f"unknown symbol {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env, disc)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        # only sqrt(D) is representable
        if len(node.args) == 1 and isinstance(node.args[0], ast.Name) and node.args[0].id == "D":
            return QuadNum(0, 1, disc)
        raise DomainError("only sqrt(D) is supported")
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        left = _eval(node.left, env, disc)
        if isinstance(node.op, ast.Pow):
            right = node.right
            if isinstance(right, ast.UnaryOp) and isinstance(right.op, ast.USub) and isinstance(right.operand, ast.Constant):
                return left ** (-int(right.operand.value))
            if not (isinstance(right, ast.Constant) and isinstance(right.value, int)):
                raise DomainError("exponents must be integer literals")
            return left ** right.value
        right = _eval(node.right, env, disc)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        return left / right
    raise DomainError(f"unsupported expression element {ast.dump(node)}")


def to_float(x) -> float:
    return float(value_of(x))


def isclose(a, b, tol: float = DEFAULT_TOL) -> bool:
    return math.isclose(to_float(a), to_float(b), rel_tol=0.0, abs_tol=tol)
