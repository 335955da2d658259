"""Gauss-Weingarten calculus on a lightlike hypersurface of a flat ambient space.

Vector fields are callables ``field(frame) -> vector``; a tangent direction
``U`` is a plain (value) vector at the frame's point.  The flat ambient
connection is the componentwise directional derivative, available through
:meth:`PointFrame.d`.  Every object is extracted with a single inner product
against E or N; :func:`frame_expansion` provides the independent
linear-solve decomposition used as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import DomainError
from .hypersurface import PointFrame
from .scalar import value_of

__all__ = [
    "E_field",
    "N_field",
    "W_field",
    "Phi_field",
    "position_field",
    "combination",
    "ambient_derivative",
    "tangent_part",
    "gauss_split",
    "screen_split",
    "frame_expansion",
    "second_form_B",
    "weingarten_N",
    "screen_form_C",
    "weingarten_E",
    "induced_connection",
    "induced_metric_nonparallel",
    "theta",
    "InducedGeometry",
    "induced_geometry",
    "expansion_geometry",
]


# -- standard fields ----------------------------------------------------------


def E_field(fr):
    return fr.E


def N_field(fr):
    return fr.N


def position_field(fr):
    return fr.x


_W_FIELDS: dict = {}
_PHI_FIELDS: dict = {}


def W_field(a: int):
    """Screen basis field W_a (one shared callable per index)."""
    if a not in _W_FIELDS:
        _W_FIELDS[a] = lambda fr: fr.W[a]
    return _W_FIELDS[a]


def Phi_field(i: int):
    """Coordinate field d/du_i."""
    if i not in _PHI_FIELDS:
        _PHI_FIELDS[i] = lambda fr: fr.Phi[i]
    return _PHI_FIELDS[i]


def combination(coeffs, fields):
    """Constant-coefficient combination of fields."""
    coeffs = list(coeffs)
    fields = list(fields)

    def field(fr):
        out = None
        for c, f in zip(coeffs, fields):
            term = linalg.vscale(c, fr.eval(f))
            out = term if out is None else linalg.vadd(out, term)
        return out

    return field


# -- splitting ----------------------------------------------------------------


def _vals(v):
    return [value_of(x) for x in v]


def _check_tangent(fr: PointFrame, U, what: str = "vector"):
    Uv = _vals(U)
    scale = max(1.0, linalg.max_abs(Uv, fr.backend)) * max(1.0, linalg.max_abs(fr.Ev, fr.backend))
    if not fr.backend.is_zero(fr.g(Uv, fr.Ev), scale):
        raise DomainError(f"{what} is not tangent to the hypersurface")


def theta(fr: PointFrame, X):
    """The 1-form theta(X) = g(N, X)."""
    return fr.g(fr.Nv, _vals(X))


def tangent_part(fr: PointFrame, W):
    """W - g(W,E) N: the component of W in TN (values)."""
    W = _vals(W)
    return linalg.vsub(W, linalg.vscale(fr.g(W, fr.Ev), fr.Nv))


def gauss_split(fr: PointFrame, W):
    """W = T + beta N with T tangent; returns (T, beta)."""
    W = _vals(W)
    beta = fr.g(W, fr.Ev)
    return linalg.vsub(W, linalg.vscale(beta, fr.Nv)), beta


def screen_split(fr: PointFrame, T):
    """Tangent T = P(T) + c E with P(T) in the screen; returns (P(T), c)."""
    T = _vals(T)
    c = fr.g(T, fr.Nv)
    return linalg.vsub(T, linalg.vscale(c, fr.Ev)), c


def frame_expansion(fr: PointFrame, W):
    """Coefficients of W in the basis {E, W_1..W_{n-1}, N} by a linear solve.

    Returns ``(cE, [cW...], cN)``.
    """
    basis = [fr.Ev] + fr.Wv + [fr.Nv]
    A = linalg.transpose(basis)
    sol = linalg.solve(A, _vals(W), fr.backend)
    return sol[0], sol[1:-1], sol[-1]


# -- Gauss-Weingarten objects -------------------------------------------------


def ambient_derivative(fr: PointFrame, U, V_field):
    """Flat derivative of the field V along the tangent vector U."""
    return fr.d(V_field, _vals(U))


def second_form_B(fr: PointFrame, U, V_field, check: bool = True):
    """B(U,V) = g(D_U V, E)."""
    if check:
        _check_tangent(fr, U, "U")
        _check_tangent(fr, fr.value(V_field), "V")
    return fr.g(ambient_derivative(fr, U, V_field), fr.Ev)


def weingarten_N(fr: PointFrame, U):
    """(A_N U, tau(U)) from D_U N = -A_N U + tau(U) N."""
    DN = ambient_derivative(fr, U, N_field)
    tau = fr.g(DN, fr.Ev)
    return linalg.vscale(-1, linalg.vsub(DN, linalg.vscale(tau, fr.Nv))), tau


def screen_form_C(fr: PointFrame, U, PV_field, check: bool = True):
    """C(U, PV) = g(D_U PV, N) for a screen-valued field PV."""
    if check:
        PV = fr.value(PV_field)
        scale = max(1.0, linalg.max_abs(PV, fr.backend))
        if not fr.backend.is_zero(fr.g(PV, fr.Nv), scale):
            raise DomainError("PV is not screen-valued")
        _check_tangent(fr, PV, "PV")
    return fr.g(ambient_derivative(fr, U, PV_field), fr.Nv)


def weingarten_E(fr: PointFrame, U):
    """A*_E U = -(D_U E - g(D_U E, N) E), the screen part of -D_U E."""
    DE = ambient_derivative(fr, U, E_field)
    return linalg.vscale(-1, linalg.vsub(DE, linalg.vscale(fr.g(DE, fr.Nv), fr.Ev)))


def induced_connection(fr: PointFrame, U, V_field):
    """nabla_U V: the tangent part of D_U V."""
    return tangent_part(fr, ambient_derivative(fr, U, V_field))


def induced_metric_nonparallel(fr: PointFrame, U, V_field, Z_field):
    """(nabla_U g)(V,Z) - B(U,Z) theta(V) - B(U,V) theta(Z); vanishes identically."""
    Uv = _vals(U)

    def gVZ(f):
        return f.g(f.eval(V_field), f.eval(Z_field))

    dg = fr.d(gVZ, Uv)
    V, Z = fr.value(V_field), fr.value(Z_field)
    nabla_g = dg - fr.g(induced_connection(fr, Uv, V_field), Z) - fr.g(V, induced_connection(fr, Uv, Z_field))
    BUV = second_form_B(fr, Uv, V_field, check=False)
    BUZ = second_form_B(fr, Uv, Z_field, check=False)
    return nabla_g - BUZ * theta(fr, V) - BUV * theta(fr, Z)


# -- per-point summaries --------------------------------------------------------


@dataclass
class InducedGeometry:
    """B, C, A_N, A*_E, tau, theta in frame coordinates at one point.

    ``B[i][j] = B(Phi_i, Phi_j)``, ``C[i][a] = C(Phi_i, W_a)``, ``A_N[i]``
    and ``A_E_star[i]`` are ambient vectors for U = Phi_i, ``tau[i]`` and
    ``theta[i]`` are the 1-forms on Phi_i.
    """

    B: list
    C: list
    A_N: list
    A_E_star: list
    tau: list
    theta: list

    def to_json(self):
        from .harness.serialize import scalar_json

        def enc(obj):
            if isinstance(obj, list):
                return [enc(x) for x in obj]
            return scalar_json(obj)

        return {
            "B_matrix": enc(self.B),
            "C_matrix": enc(self.C),
            "A_N": enc(self.A_N),
            "A_E_star": enc(self.A_E_star),
            "tau_covector": enc(self.tau),
            "theta_covector": enc(self.theta),
        }


def induced_geometry(fr: PointFrame) -> InducedGeometry:
    """Inner-product route."""
    n = len(fr.Phiv)
    B = [[second_form_B(fr, fr.Phiv[i], Phi_field(j), check=False) for j in range(n)] for i in range(n)]
    C = [[screen_form_C(fr, fr.Phiv[i], W_field(a), check=False) for a in range(len(fr.Wv))] for i in range(n)]
    A_N, tau = [], []
    for i in range(n):
        a, t = weingarten_N(fr, fr.Phiv[i])
        A_N.append(a)
        tau.append(t)
    A_E = [weingarten_E(fr, fr.Phiv[i]) for i in range(n)]
    th = [theta(fr, fr.Phiv[i]) for i in range(n)]
    return InducedGeometry(B, C, A_N, A_E, tau, th)


def expansion_geometry(fr: PointFrame) -> InducedGeometry:
    """Frame-expansion route: every object read off the {E, W, N} coefficients."""
    n = len(fr.Phiv)
    Wv = fr.Wv
    B, C, A_N, A_E, tau, th = [], [], [], [], [], []
    for i in range(n):
        U = fr.Phiv[i]
        row = []
        for j in range(n):
            _, _, cN = frame_expansion(fr, ambient_derivative(fr, U, Phi_field(j)))
            row.append(cN)
        B.append(row)
        crow = []
        for a in range(len(Wv)):
            cE, _, _ = frame_expansion(fr, ambient_derivative(fr, U, W_field(a)))
            crow.append(cE)
        C.append(crow)
        cE, cW, cN = frame_expansion(fr, ambient_derivative(fr, U, N_field))
        tau.append(cN)
        A_N.append(linalg.vscale(-1, linalg.vadd(linalg.vscale(cE, fr.Ev), linalg.lincomb(cW, Wv, len(U)))))
        cE, cW, cN = frame_expansion(fr, ambient_derivative(fr, U, E_field))
        A_E.append(linalg.vscale(-1, linalg.lincomb(cW, Wv, len(U))))
        cE, cW, cN = frame_expansion(fr, U)
        th.append(cE)
    return InducedGeometry(B, C, A_N, A_E, tau, th)
