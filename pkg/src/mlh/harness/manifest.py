"""Manifest loading, validation and construction of the geometric objects."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from ..ambient import MetallicStructure, ProductStructure, SemiEuclideanSpace, metallic_from_product
from ..errors import DomainError, SchemaError
from ..hypersurface import AffineHypersurface, ChartHypersurface, LightlikeGeometry
from ..scalar import Backend, QuadNum, parse_scalar

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_SAMPLES",
    "Manifest",
    "Setup",
    "load_manifest",
    "validate_manifest",
    "build",
    "default_tolerance",
]

DEFAULT_TOL = 1e-9
DEFAULT_SAMPLES = 20


def default_tolerance() -> float:
    """MLH_TOL if set, else the built-in default."""
    raw = os.environ.get("MLH_TOL")
    if raw is None or raw == "":
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise SchemaError(f"MLH_TOL is not a number: {raw!r}") from exc
    if not tol > 0:
        raise SchemaError("MLH_TOL must be positive")
    return tol


@lru_cache(maxsize=1)
def _schema():
    text = resources.files("mlh.harness").joinpath("manifest.schema.json").read_text()
    return json.loads(text)


def validate_manifest(data) -> None:
    """Schema check plus cross-field consistency; raises SchemaError."""
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        err = errors[0]
        where = "/".join(str(x) for x in err.absolute_path) or "<root>"
        raise SchemaError(f"manifest invalid at {where}: {err.message}")
    dim = data["ambient"]["dim"]
    if len(data["ambient"]["signature"]) != dim:
        raise SchemaError("ambient.signature length must equal ambient.dim")
    st = data.get("structure")
    if st:
        rows = st.get("J") or st.get("F")
        if st["type"] == "diagonal" and len(st["entries"]) != dim:
            raise SchemaError("structure.entries length must equal ambient.dim")
        if rows is not None and (len(rows) != dim or any(len(r) != dim for r in rows)):
            raise SchemaError("structure matrix must be dim x dim")
    hs = data.get("hypersurface")
    if hs:
        if hs["type"] == "affine" and len(hs["c"]) != dim:
            raise SchemaError("hypersurface.c length must equal ambient.dim")
        if hs["type"] == "chart":
            if len(hs["components"]) != dim:
                raise SchemaError("chart needs one component per ambient coordinate")
            if len(hs["domain"]) != dim - 1:
                raise SchemaError("chart domain needs dim - 1 intervals")
    backend = data.get("backend", "float")
    if backend == "exact" and hs and hs["type"] != "affine":
        raise SchemaError("exact backend requires an affine hypersurface")
    screen = data.get("screen")
    if screen and screen["policy"] == "override":
        if "basis" not in screen:
            raise SchemaError("screen override needs a basis")
        if any(len(w) != dim for w in screen["basis"]):
            raise SchemaError("screen basis vectors must have ambient length")
        if not hs or hs["type"] != "affine":
            raise SchemaError("screen override is only supported on affine hypersurfaces")
    for pt in data.get("points", []):
        expected = dim if (hs and hs["type"] == "affine") else dim - 1
        if len(pt) != expected:
            raise SchemaError(f"points must have {expected} coordinates")
    if (screen and screen["policy"] == "adapted") and not st:
        raise SchemaError("adapted screen needs a structure")


@dataclass
class Manifest:
    """A validated manifest (the raw JSON plus typed accessors)."""

    data: dict

    @property
    def name(self) -> str:
        return self.data.get("name", "manifest")

    @property
    def p(self) -> int:
        return self.data["metallic"]["p"]

    @property
    def q(self) -> int:
        return self.data["metallic"]["q"]

    @property
    def backend_name(self) -> str:
        return self.data.get("backend", "float")

    @property
    def samples(self) -> int:
        return self.data.get("samples", DEFAULT_SAMPLES)

    @property
    def seed(self) -> int:
        return self.data.get("seed", 0)

    @property
    def tolerance(self) -> float:
        return self.data.get("tolerance", default_tolerance())

    @property
    def identities(self):
        return self.data.get("identities", "all")

    def with_overrides(self, **kw) -> "Manifest":
        data = json.loads(json.dumps(self.data))
        for key, value in kw.items():
            if value is not None:
                data[key] = value
        validate_manifest(data)
        return Manifest(data)


def load_manifest(source) -> Manifest:
    """Manifest from a dict, a JSON string or a path."""
    if isinstance(source, Manifest):
        return source
    if isinstance(source, dict):
        data = json.loads(json.dumps(source))
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read manifest {source}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"manifest is not valid JSON: {exc}") from exc
    validate_manifest(data)
    return Manifest(data)


@dataclass
class Setup:
    space: SemiEuclideanSpace
    structure: MetallicStructure | None
    hypersurface: object
    backend: Backend
    geometry: LightlikeGeometry | None


def _scalar(x, p, q):
    if isinstance(x, float) and not x.is_integer():
        raise DomainError(f"exact data cannot contain the float {x!r}")
    return parse_scalar(x, p, q)


def _plain(x: QuadNum):
    """Rational QuadNums become Fractions so that affine data stays simple."""
    if isinstance(x, QuadNum) and x.is_rational():
        return x.a
    return x


def build_structure(m: Manifest):
    st = m.data.get("structure")
    if not st:
        return None
    p, q = m.p, m.q
    if st["type"] == "diagonal":
        entries = [_scalar(x, p, q) for x in st["entries"]]
        n = len(entries)
        J = [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return MetallicStructure(p, q, J)
    if st["type"] == "matrix":
        return MetallicStructure(p, q, [[_scalar(x, p, q) for x in row] for row in st["J"]])
    F = [[_plain(_scalar(x, p, q)) for x in row] for row in st["F"]]
    return metallic_from_product(ProductStructure(F), p, q, st.get("branch", "+"))


def build_hypersurface(m: Manifest):
    hs = m.data.get("hypersurface")
    if not hs:
        return None
    p, q = m.p, m.q
    if hs["type"] == "affine":
        c = [_plain(_scalar(x, p, q)) for x in hs["c"]]
        return AffineHypersurface(c, _plain(_scalar(hs.get("offset", 0), p, q)))
    return ChartHypersurface(hs["components"], hs["domain"], p, q)


def build_backend(m: Manifest, tol: float | None = None) -> Backend:
    tol = m.tolerance if tol is None else tol
    if m.backend_name == "exact":
        return Backend(exact=True, tol=0.0)
    return Backend(exact=False, tol=tol, derivative=m.data.get("derivative", "dual"))


def build(m: Manifest, tol: float | None = None) -> Setup:
    d = m.data
    space = SemiEuclideanSpace(tuple(d["ambient"]["signature"]))
    structure = build_structure(m)
    H = build_hypersurface(m)
    backend = build_backend(m, tol)
    geo = None
    if H is not None:
        screen = d.get("screen", {"policy": "canonical"})
        override = None
        if screen["policy"] == "override":
            override = [[_plain(_scalar(x, m.p, m.q)) for x in w] for w in screen["basis"]]
        geo = LightlikeGeometry(space, H, structure, backend, screen["policy"], override, d.get("e_scale"))
    return Setup(space, structure, H, backend, geo)
