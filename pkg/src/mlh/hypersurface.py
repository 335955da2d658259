"""Hypersurfaces, tangent frames and lightlike frames (radical, screen, transversal).

A :class:`LightlikeGeometry` ties a hypersurface to its ambient space, an
optional metallic structure and a scalar backend.  Calling
:meth:`LightlikeGeometry.frame` at chart parameters builds a
:class:`PointFrame`: the frame vectors are evaluated with dual-number
parameters, so every quantity derived from them (E, N, the screen, and any
field built on top) carries its chart derivatives along.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import linalg
from .ambient import MetallicStructure, SemiEuclideanSpace
from .errors import (
    DegenerateChart,
    DomainError,
    NotHypersurfaceRank,
    NotLightlike,
    ScreenConstruction,
)
from .scalar import FLOAT, Backend, directional, value_of

__all__ = [
    "AffineHypersurface",
    "ChartHypersurface",
    "TangentFrame",
    "LightlikeFrame",
    "LightlikeGeometry",
    "PointFrame",
    "tangent_frame",
    "radical",
    "canonical_screen",
    "transversal",
    "transversal_in_subspace",
    "validate_screen",
]


def _values(vec):
    return [value_of(x) for x in vec]


def _argmax(mags):
    best, best_i = -1.0, None
    for i, m in enumerate(mags):
        if m > best:
            best, best_i = m, i
    return best_i


# -- hypersurface representations --------------------------------------------


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


class AffineHypersurface:
    """The level set ``{x : c . x = offset}`` with exact data."""

    kind = "affine"

    def __init__(self, c, offset=0):
        self.c = list(c)
        self.offset = offset
        nz = [i for i, ci in enumerate(self.c) if ci != 0]
        if not nz:
            raise DomainError("covector must be nonzero")
        # solve for the last coordinate with a nonzero coefficient
        self.pivot = nz[-1]
        self.dim = len(self.c)
        self.n_params = self.dim - 1
        self._basis = self._kernel_basis()
        self._origin = [0] * self.dim
        self._origin[self.pivot] = _exact_div(self.offset, self.c[self.pivot]) if self.offset != 0 else 0

    def _kernel_basis(self):
        k = self.pivot
        ck = self.c[k]
        basis = []
        for j in range(self.dim):
            if j == k:
                continue
            v = [0] * self.dim
            v[j] = 1
            if self.c[j] != 0:
                v[k] = -_exact_div(self.c[j], ck)
            basis.append(v)
        return basis

    def kernel_basis(self):
        return [list(v) for v in self._basis]

    def contains(self, x, backend: Backend) -> bool:
        lhs = linalg.dot([backend.convert(ci) for ci in self.c], x) - backend.convert(self.offset)
        scale = max(1.0, linalg.max_abs(x, backend))
        return backend.is_zero(lhs, scale)

    def params_of(self, x, backend: Backend):
        if len(x) != self.dim:
            raise DomainError(f"point must have {self.dim} coordinates")
        if not self.contains(x, backend):
            raise DomainError("point is not on the hypersurface")
        return [x[j] for j in range(self.dim) if j != self.pivot]

    def position(self, u, backend: Backend):
        origin = [backend.convert(o) for o in self._origin]
        basis = [[backend.convert(x) for x in v] for v in self._basis]
        return linalg.vadd(origin, linalg.lincomb(u, basis, self.dim))

    def jacobian(self, u, backend: Backend):
        return [[backend.convert(x) for x in v] for v in self._basis]

    def sample_params(self, rng: random.Random, backend: Backend):
        if backend.exact:
            return [Fraction(rng.randint(-16, 16), rng.randint(1, 16)) for _ in range(self.n_params)]
        return [rng.uniform(-2.0, 2.0) for _ in range(self.n_params)]

    def to_json(self):
        from .harness.serialize import scalar_json

        return {"type": "affine", "c": [scalar_json(x) for x in self.c], "offset": scalar_json(self.offset)}


class ChartHypersurface:
    """Polynomial chart ``x(u1, ..., un)`` into the ambient space.

    Components are strings in ``u1..un`` that may also use ``sigma``, ``p``
    and ``q``.  Jacobian entries are differentiated symbolically once and then
    evaluated numerically; feeding dual numbers in yields second derivatives.
    """

    kind = "chart"

    def __init__(self, components, domain, p: int = 1, q: int = 1):
        self.components = list(components)
        self.domain = [(float(lo), float(hi)) for lo, hi in domain]
        self.n_params = len(self.domain)
        self.dim = len(self.components)
        if self.n_params != self.dim - 1:
            raise DomainError("a chart needs dim-1 parameters (one domain interval per parameter)")
        for lo, hi in self.domain:
            if not lo < hi:
                raise DomainError("domain intervals must satisfy lo < hi")
        self.p, self.q = p, q
        self.symbols = sympy.symbols(f"u1:{self.n_params + 1}")
        sigma_expr = (sympy.Integer(p) + sympy.sqrt(p * p + 4 * q)) / 2
        env = {f"u{i + 1}": s for i, s in enumerate(self.symbols)}
        env.update({"sigma": sigma_expr, "p": sympy.Integer(p), "q": sympy.Integer(q)})
        try:
            exprs = [sympy.sympify(c, locals=env) for c in self.components]
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise DomainError(f"cannot parse chart component: {exc}") from exc
        for e in exprs:
            if e.free_symbols - set(self.symbols):
                raise DomainError(f"unknown symbols in chart component {e}")
            if not e.is_polynomial(*self.symbols):
                raise DomainError(f"chart components must be polynomial, got {e}")
        self.exprs = exprs
        self._pos = [self._compile(e) for e in exprs]
        self._jac = [[self._compile(sympy.diff(e, s)) for e in exprs] for s in self.symbols]

    def _compile(self, expr):
        expr = sympy.nsimplify(expr) if expr.is_number else expr
        if expr.is_number:
            value = float(expr)
            return lambda *u, _v=value: _v
        return sympy.lambdify(self.symbols, expr, modules=["math"])

    def position(self, u, backend: Backend):
        return [f(*u) for f in self._pos]

    def jacobian(self, u, backend: Backend):
        return [[f(*u) for f in col] for col in self._jac]

    def params_of(self, x, backend: Backend):
        raise DomainError("chart hypersurfaces are sampled by parameters, not ambient points")

    def sample_params(self, rng: random.Random, backend: Backend):
        return [rng.uniform(lo, hi) for lo, hi in self.domain]

    def to_json(self):
        return {"type": "chart", "components": self.components, "domain": [list(d) for d in self.domain]}


# -- frame data -------------------------------------------------------------


@dataclass
class TangentFrame:
    point: list
    Phi: list


@dataclass
class LightlikeFrame:
    """Radical generator, transversal and screen basis at one point."""

    E: list
    N: list
    W: list
    screen_kind: str = "canonical"

    def check(self, space: SemiEuclideanSpace, backend: Backend, Phi=None) -> dict:
        """Residuals of the defining conditions (all should vanish)."""
        g = space.g
        out = {
            "g(E,E)": g(self.E, self.E),
            "g(N,N)": g(self.N, self.N),
            "g(N,E)-1": g(self.N, self.E) - 1,
        }
        for a, w in enumerate(self.W):
            out[f"g(N,W{a})"] = g(self.N, w)
            out[f"g(E,W{a})"] = g(self.E, w)
        if Phi is not None:
            for i, v in enumerate(Phi):
                out[f"g(E,Phi{i})"] = g(self.E, v)
        return out

    def basis_det(self, backend: Backend):
        """Determinant of [E, W..., N]; nonzero iff the decomposition is complete."""
        cols = [self.E] + list(self.W) + [self.N]
        return linalg.det(linalg.transpose(cols), backend)


def tangent_frame(H, point, backend: Backend = FLOAT) -> TangentFrame:
    """Tangent frame at an ambient point (affine) or chart parameters (chart)."""
    if H.kind == "affine":
        u = H.params_of(list(point), backend)
        return TangentFrame(list(point), H.jacobian(u, backend))
    u = list(point)
    Phi = H.jacobian(u, backend)
    _check_rank(Phi, backend)
    return TangentFrame(H.position(u, backend), Phi)


def _check_rank(Phi, backend: Backend):
    vals = [_values(v) for v in Phi]
    if linalg.rank(vals, backend) < len(Phi):
        raise DegenerateChart("chart Jacobian is rank deficient at this point")


def _gram(space, vectors):
    return [[space.g(a, b) for b in vectors] for a in vectors]


def radical(space: SemiEuclideanSpace, Phi, backend: Backend, hints: dict | None = None):
    """Coefficients ``a`` (in the frame basis) and vector of a radical generator.

    The free index ``f`` (with ``a[f] = 1``) is chosen on values: the free
    column of the eliminated Gram matrix in exact mode, the largest null
    coefficient in float mode.  The remaining coefficients come from the
    nonsingular principal subsystem that drops row and column ``f``, so the
    result is differentiable through dual-number entries.
    """
    hints = {} if hints is None else hints
    n = len(Phi)
    G = _gram(space, Phi)
    if "free" not in hints:
        Gv = [[value_of(x) for x in row] for row in G]
        null = linalg.nullspace(Gv, backend)
        if not null:
            raise NotLightlike("induced metric is non-degenerate (radical is trivial)")
        if len(null) > 1:
            raise NotHypersurfaceRank(f"radical has dimension {len(null)}; expected 1")
        vec = null[0]
        if backend.exact:
            # the column holding the basis vector's unit entry
            free = next(j for j in range(n) if vec[j] == 1 and _is_free(Gv, j, backend))
        else:
            free = _argmax([backend.magnitude(x) for x in vec])
        hints["free"] = free
    f = hints["free"]
    rest = [j for j in range(n) if j != f]
    a = [0] * n
    a[f] = 1
    if rest:
        sub = [[G[i][j] for j in rest] for i in rest]
        rhs = [-G[i][f] for i in rest]
        try:
            sol = linalg.solve(sub, rhs, backend)
        except ZeroDivisionError as exc:
            raise NotHypersurfaceRank("radical subsystem is singular") from exc
        for j, s in zip(rest, sol):
            a[j] = s
    E = linalg.lincomb(a, Phi, space.dim)
    return a, E


def _is_free(Gv, j, backend):
    return j not in linalg.rref(Gv, backend)[1]


def normalize_radical(E, backend: Backend, hints: dict | None = None):
    """Scale E so a chosen coordinate equals 1 (first nonzero exact, largest float)."""
    hints = {} if hints is None else hints
    if "enorm" not in hints:
        vals = _values(E)
        if backend.exact:
            hints["enorm"] = next(i for i, x in enumerate(vals) if x != 0)
        else:
            hints["enorm"] = _argmax([abs(float(x)) for x in vals])
    k = hints["enorm"]
    scale = E[k]
    return [x / scale for x in E]


def canonical_screen(Phi, free: int):
    """Frame vectors other than the pivot one; complementary to the radical."""
    return [v for j, v in enumerate(Phi) if j != free]


def validate_screen(space: SemiEuclideanSpace, E, W, backend: Backend):
    """Check a proposed screen basis: orthogonal to E, independent of E, non-degenerate."""
    Ev = _values(E)
    scale = max(1.0, linalg.max_abs(Ev, backend))
    for a, w in enumerate(W):
        gw = space.g(_values(w), Ev)
        if not backend.is_zero(gw, scale * max(1.0, linalg.max_abs(_values(w), backend))):
            raise ScreenConstruction(f"screen vector {a} is not orthogonal to the radical (g(W,E) = {gw})")
    vals = [_values(w) for w in W]
    if linalg.rank(vals + [Ev], backend) != len(W) + 1:
        raise ScreenConstruction("screen vectors and radical are not linearly independent")
    if W:
        Gw = [[value_of(x) for x in row] for row in _gram(space, vals)]
        if backend.is_zero(linalg.det(Gw, backend)) or linalg.rank(Gw, backend) < len(W):
            raise ScreenConstruction("screen Gram matrix is degenerate")


def transversal(space: SemiEuclideanSpace, E, W, backend: Backend, hints: dict | None = None, key: str = "trans"):
    """The unique null N with g(N,E) = 1 and g(N,W) = 0."""
    hints = {} if hints is None else hints
    dim = space.dim
    if key not in hints:
        Ev = _values(E)
        mags = [backend.magnitude(space.signature[i] * Ev[i]) for i in range(dim)]
        if max(mags) == 0:
            raise ScreenConstruction("radical vector is zero")
        hints[key] = _argmax(mags)
    i = hints[key]
    V = [0] * dim
    V[i] = 1
    return _transversal_from(space, E, W, V, backend)


def _transversal_from(space, E, W, V, backend):
    if W:
        Gw = _gram(space, W)
        rhs = [space.g(V, w) for w in W]
        try:
            c = linalg.solve(Gw, rhs, backend)
        except ZeroDivisionError as exc:
            raise ScreenConstruction("screen Gram matrix is singular") from exc
        V = linalg.vsub(V, linalg.lincomb(c, W, space.dim))
    gVE = space.g(V, E)
    if backend.is_zero(gVE):
        raise ScreenConstruction("reference vector is orthogonal to the radical")
    gVV = space.g(V, V)
    shifted = linalg.vsub(V, linalg.vscale(gVV / (2 * gVE), E))
    return linalg.vscale(1 / gVE, shifted)


def transversal_in_subspace(space: SemiEuclideanSpace, E_sub, P, backend: Backend,
                            hints: dict | None = None, key: str = "sub"):
    """Null N inside the range of the self-adjoint projector P with g(N, E_sub) = 1.

    ``E_sub`` must be a null vector in the range of ``P``.
    """
    hints = {} if hints is None else hints
    dim = space.dim
    if key not in hints:
        Ev = _values(E_sub)
        mags = [backend.magnitude(space.signature[i] * Ev[i]) for i in range(dim)]
        hints[key] = _argmax(mags)
    i = hints[key]
    R = [P[r][i] for r in range(dim)]
    gRE = space.g(R, E_sub)
    if backend.is_zero(gRE):
        raise ScreenConstruction("no reference vector pairs with the eigen-component of E")
    gRR = space.g(R, R)
    return linalg.vscale(1 / gRE, linalg.vsub(R, linalg.vscale(gRR / (2 * gRE), E_sub)))


# -- geometry context and per-point frames ---------------------------------


SCREEN_POLICIES = ("canonical", "adapted", "override")


class LightlikeGeometry:
    """A hypersurface in a semi-Euclidean space with an optional metallic structure.

    ``screen`` selects how the screen is chosen: ``"canonical"`` (frame
    vectors minus the pivot one), ``"adapted"`` (transversal placed in the
    J-eigenspaces when the radical allows it, falling back to canonical) or
    ``"override"`` (explicit constant basis, affine only).  ``e_scale`` is an
    optional expression in ``x1..x{dim}`` rescaling E (and N inversely).
    """

    def __init__(self, space: SemiEuclideanSpace, H, structure: MetallicStructure | None = None,
                 backend: Backend = FLOAT, screen: str = "canonical", override=None, e_scale: str | None = None):
        if H.dim != space.dim:
            raise DomainError("hypersurface and ambient dimensions differ")
        if screen not in SCREEN_POLICIES:
            raise DomainError(f"unknown screen policy {screen!r}")
        if backend.exact and H.kind != "affine":
            raise DomainError("exact backend requires an affine hypersurface")
        if screen == "override" and (override is None or H.kind != "affine"):
            raise DomainError("screen override needs an explicit basis on an affine hypersurface")
        if screen == "adapted" and structure is None:
            raise DomainError("adapted screen needs a metallic structure")
        if structure is not None and structure.dim != space.dim:
            raise DomainError("structure and ambient dimensions differ")
        self.space = space
        self.H = H
        self.structure = structure
        self.backend = backend
        self.screen = screen
        self.override = [[backend.convert(x) for x in w] for w in override] if override is not None else None
        self.e_scale_expr = e_scale
        self._e_scale = _compile_scale(e_scale, space.dim) if e_scale else None
        if structure is not None:
            self.J = [[backend.convert(x) for x in row] for row in structure.J]
            P_plus, P_minus = structure.projections()
            self.P_plus = [[backend.convert(x) for x in row] for row in P_plus]
            self.P_minus = [[backend.convert(x) for x in row] for row in P_minus]
            self.p, self.q = structure.p, structure.q
            self.sigma = backend.convert(structure.sigma)
        else:
            self.J = self.P_plus = self.P_minus = None

    @property
    def n(self) -> int:
        return self.H.n_params

    def frame(self, u, hints: dict | None = None) -> PointFrame:
        return PointFrame(self, list(u), {} if hints is None else hints)

    def frame_at(self, x) -> PointFrame:
        """Frame at an ambient point of an affine hypersurface."""
        return self.frame(self.H.params_of(list(x), self.backend))

    def sample(self, count: int, seed: int = 0):
        """Frames at ``count`` random parameter points; failing points are skipped.

        Returns ``(frames, skipped)`` where ``skipped`` lists error records.
        """
        rng = random.Random(seed)
        frames, skipped = [], []
        attempts = 0
        while len(frames) < count and attempts < 20 * count + 20:
            attempts += 1
            u = self.H.sample_params(rng, self.backend)
            try:
                frames.append(self.frame(u))
            except (DegenerateChart, NotLightlike, NotHypersurfaceRank, ScreenConstruction, ZeroDivisionError) as exc:
                rec = exc.record() if hasattr(exc, "record") else {"error": "arithmetic", "message": str(exc)}
                rec["params"] = [float(x) for x in u]
                skipped.append(rec)
        return frames, skipped

    def apply_J(self, V):
        return linalg.matvec(self.J, V)


def _compile_scale(expr: str, dim: int):
    syms = sympy.symbols(f"x1:{dim + 1}")
    env = {f"x{i + 1}": s for i, s in enumerate(syms)}
    e = sympy.sympify(expr, locals=env)
    if e.free_symbols - set(syms):
        raise DomainError(f"unknown symbols in e_scale {expr!r}")
    if not e.is_polynomial(*syms):
        raise DomainError("e_scale must be polynomial")
    if e.is_number:
        value = sympy.Rational(e) if e.is_rational else float(e)
        return lambda *x, _v=value: _v
    return sympy.lambdify(syms, e, modules=["math"])


class PointFrame:
    """Lightlike frame at one point, plus the derivative machinery.

    Vector fields are callables ``field(frame) -> vector`` (or scalar).  In
    dual mode they return dual-valued components and :meth:`d` reads off
    directional derivatives; in finite-difference mode :meth:`d` evaluates the
    field on frames at shifted parameters that share this frame's pivot
    choices.
    """

    def __init__(self, ctx: LightlikeGeometry, u, hints: dict):
        self.ctx = ctx
        self.space = ctx.space
        self.backend = backend = ctx.backend
        self.u = u
        self.hints = hints
        self._cache = {}
        self._shifted = {}
        self._gram_inv = None
        useq = backend.seed(u)
        H = ctx.H
        self.x = H.position(useq, backend)
        self.Phi = H.jacobian(useq, backend)
        if "rank_checked" not in hints:
            _check_rank(self.Phi, backend)
            hints["rank_checked"] = True
        self.a_E, E = radical(self.space, self.Phi, backend, hints)
        E = normalize_radical(E, backend, hints)
        if ctx._e_scale is not None:
            s = ctx._e_scale(*self.x)
            if backend.is_zero(s):
                raise ScreenConstruction("e_scale vanishes at this point")
            E = linalg.vscale(s, E)
        self.E = E
        self._build_screen()
        self.xv = _values(self.x)
        self.Phiv = [_values(v) for v in self.Phi]
        self.Ev = _values(self.E)
        self.Nv = _values(self.N)
        self.Wv = [_values(w) for w in self.W]

    # -- construction ---------------------------------------------------
    def _build_screen(self):
        ctx, space, backend, hints = self.ctx, self.space, self.backend, self.hints
        if ctx.screen == "override":
            W = ctx.override
            if "override_ok" not in hints:
                validate_screen(space, self.E, W, backend)
                hints["override_ok"] = True
            self.W = W
            self.N = transversal(space, self.E, W, backend, hints)
            self.screen_kind = "override"
            return
        W0 = canonical_screen(self.Phi, hints["free"])
        kind = "canonical"
        if ctx.screen == "adapted":
            kind = hints.get("policy") or self._adapted_kind()
            hints["policy"] = kind
        self.screen_kind = kind
        if kind == "canonical":
            self.W = W0
            self.N = transversal(space, self.E, W0, backend, hints)
            return
        if kind == "invariant+":
            N = transversal_in_subspace(space, self.E, ctx.P_plus, backend, hints, "sub+")
        elif kind == "invariant-":
            N = transversal_in_subspace(space, self.E, ctx.P_minus, backend, hints, "sub-")
        else:
            E_plus = linalg.matvec(ctx.P_plus, self.E)
            E_minus = linalg.matvec(ctx.P_minus, self.E)
            N_plus = transversal_in_subspace(space, E_plus, ctx.P_plus, backend, hints, "sub+")
            N_minus = transversal_in_subspace(space, E_minus, ctx.P_minus, backend, hints, "sub-")
            sigma, p = ctx.sigma, ctx.p
            gap = 2 * sigma - p
            N = linalg.vadd(linalg.vscale(sigma / gap, N_minus), linalg.vscale((sigma - p) / gap, N_plus))
        self.N = N
        self.W = [linalg.vsub(w, linalg.vscale(space.g(w, N), self.E)) for w in W0]

    def _adapted_kind(self) -> str:
        ctx, space, backend = self.ctx, self.space, self.backend
        Ev = _values(self.E)
        scale = max(1.0, linalg.max_abs(Ev, backend))
        E_plus = linalg.matvec(ctx.P_plus, Ev)
        E_minus = linalg.matvec(ctx.P_minus, Ev)
        if all(backend.is_zero(x, scale) for x in E_minus):
            return "invariant+"
        if all(backend.is_zero(x, scale) for x in E_plus):
            return "invariant-"
        if backend.is_zero(space.g(E_plus, E_plus), scale * scale):
            return "ssi"
        return "canonical"

    # -- values and inner products ---------------------------------------
    def g(self, U, V):
        return self.space.g(U, V)

    def value(self, field):
        """Value (no derivative data) of a field at this point."""
        out = self.eval(field)
        if isinstance(out, (list, tuple)):
            return _values(out)
        return value_of(out)

    def eval(self, field):
        key = field
        if key not in self._cache:
            self._cache[key] = field(self)
        return self._cache[key]

    def lightlike(self) -> LightlikeFrame:
        return LightlikeFrame(self.Ev, self.Nv, self.Wv, self.screen_kind)

    def tangent(self) -> TangentFrame:
        return TangentFrame(self.xv, self.Phiv)

    # -- chart coordinates -------------------------------------------------
    def chart_coords(self, U):
        """Coefficients a with sum a_i Phi_i = U (values only)."""
        if self._gram_inv is None:
            M = [[linalg.dot(a, b) for b in self.Phiv] for a in self.Phiv]
            self._gram_inv = linalg.inverse(M, self.backend)
        rhs = [linalg.dot(a, _values(U)) for a in self.Phiv]
        return linalg.matvec(self._gram_inv, rhs)

    def chart_coords_generic(self, U):
        """Same as :meth:`chart_coords` but keeps dual-number data."""
        return self._coords(self.Phi, U)

    def _coords(self, Phi, U):
        M = [[linalg.dot(a, b) for b in Phi] for a in Phi]
        rhs = [linalg.dot(a, U) for a in Phi]
        return linalg.solve(M, rhs, self.backend)

    # -- derivatives --------------------------------------------------------
    def shifted(self, delta) -> PointFrame:
        key = tuple(delta)
        if key not in self._shifted:
            u = [ui + di for ui, di in zip(self.u, delta)]
            self._shifted[key] = PointFrame(self.ctx, u, self.hints)
        return self._shifted[key]

    def d(self, field, U):
        """Directional derivative of ``field`` along the tangent vector ``U``."""
        a = self.chart_coords(U)
        backend = self.backend
        if not backend.exact and backend.derivative == "fd":
            h = backend.fd_step
            plus = self.shifted([h * ai for ai in a]).eval(field)
            minus = self.shifted([-h * ai for ai in a]).eval(field)
            if isinstance(plus, (list, tuple)):
                return [(x - y) / (2 * h) for x, y in zip(plus, minus)]
            return (plus - minus) / (2 * h)
        out = self.eval(field)
        if isinstance(out, (list, tuple)):
            return [directional(x, a) for x in out]
        return directional(out, a)

    def to_json(self):
        from .harness.serialize import scalar_json

        return {
            "params": [scalar_json(x) for x in self.u],
            "point": [scalar_json(x) for x in self.xv],
            "E": [scalar_json(x) for x in self.Ev],
            "N": [scalar_json(x) for x in self.Nv],
            "screen": [[scalar_json(x) for x in w] for w in self.Wv],
            "screen_kind": self.screen_kind,
        }
