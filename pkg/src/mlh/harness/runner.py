"""Manifest-driven pipeline: frame, induced objects, metallic data, identity registry."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from ..ambient import check_metallic_compat
from ..errors import MLHError, PreconditionError
from ..induced import induced_geometry
from ..metallic import applicable_ids, classify, psi_field, verify, zeta_field
from ..scalar import parse_scalar, value_of
from .manifest import Manifest, build, load_manifest
from .serialize import scalar_json

__all__ = ["RunReport", "run", "check_structure", "report_json", "EXIT_OK", "EXIT_IDENTITY", "EXIT_PRECONDITION",
           "EXIT_SCHEMA"]

EXIT_OK = 0
EXIT_IDENTITY = 2
EXIT_PRECONDITION = 3
EXIT_SCHEMA = 4


@dataclass
class RunReport:
    manifest: str
    backend: str
    seed: int
    samples: int
    tolerance: float
    exit_code: int = EXIT_OK
    error: dict | None = None
    structure_check: dict | None = None
    classification: dict | None = None
    frame: dict | None = None
    skipped: list = field(default_factory=list)
    identities: list = field(default_factory=list)
    claims: list = field(default_factory=list)
    geometry: list | None = None
    timing: dict | None = None

    @property
    def discrepancies(self):
        return [c for c in self.claims if not c["match"]]

    @property
    def status(self) -> str:
        return {EXIT_OK: "pass", EXIT_IDENTITY: "fail"}.get(self.exit_code, "error")

    def to_json(self) -> dict:
        out = {
            "manifest": self.manifest,
            "status": self.status,
            "exit_code": self.exit_code,
            "backend": self.backend,
            "seed": self.seed,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "error": self.error,
            "structure_check": self.structure_check,
            "classification": self.classification,
            "frame": self.frame,
            "skipped_points": len(self.skipped),
            "identities": [r.to_json() for r in self.identities],
            "discrepancies": self.discrepancies,
            "claims": self.claims,
        }
        if self.geometry is not None:
            out["geometry"] = self.geometry
        if self.timing is not None:
            out["timing"] = self.timing
        return out


def report_json(report: RunReport) -> str:
    """Canonical serialization (floats as shortest round-trip decimals)."""
    return json.dumps(report.to_json(), indent=2, allow_nan=True)


def check_structure(manifest, pairs: int = 200) -> RunReport:
    """Structure checks only (J^2 = pJ + qI, compatibility)."""
    m = load_manifest(manifest)
    rep = RunReport(m.name, m.backend_name, m.seed, 0, m.tolerance)
    try:
        setup = build(m)
        if setup.structure is None:
            raise PreconditionError("manifest has no metallic structure")
        compat = check_metallic_compat(setup.space, setup.structure, pairs=pairs, seed=m.seed)
        rep.structure_check = compat.to_json()
        if not compat.passed:
            rep.exit_code = EXIT_PRECONDITION
    except MLHError as exc:
        rep.error = exc.record()
        rep.exit_code = exc.exit_code
    return rep


# -- claims ---------------------------------------------------------------------


def _projective_match(u, v) -> bool:
    """True when u and v are nonzero multiples of each other (exact or float)."""
    if all(value_of(x) == 0 for x in u) or all(value_of(x) == 0 for x in v):
        return False
    k = next(i for i, x in enumerate(u) if value_of(x) != 0)
    if value_of(v[k]) == 0:
        return False
    r = value_of(v[k]) / value_of(u[k])
    exact = all(not isinstance(value_of(x), float) for x in list(u) + list(v))
    for a, b in zip(u, v):
        d = value_of(b) - r * value_of(a)
        if exact:
            if d != 0:
                return False
        elif abs(float(d)) > 1e-9 * max(1.0, abs(float(value_of(b)))):
            return False
    return True


def _claim_vector(claim, m: Manifest, backend):
    vec = [parse_scalar(x, m.p, m.q) for x in claim["paper_claim"]]
    return [backend.convert(x) for x in vec]


def _evaluate_claims(m: Manifest, frame, kind, error):
    out = []
    for claim in m.data.get("claims", []):
        qty = claim["quantity"]
        entry = {
            "tag": claim["tag"],
            "quantity": qty,
            "paper_claim": claim["paper_claim"],
            "fatal": claim.get("fatal", False),
        }
        if "comment" in claim:
            entry["comment"] = claim["comment"]
        if qty == "lightlike":
            computed = error is None or error.get("error") not in ("not_lightlike", "not_hypersurface_rank")
            entry["computed"] = computed if error is None else error["error"]
            entry["match"] = bool(claim["paper_claim"]) == computed
        elif qty == "classification":
            entry["computed"] = kind
            entry["match"] = kind == claim["paper_claim"]
        elif qty == "note":
            entry["computed"] = None
            entry["match"] = False
        elif frame is None:
            entry["computed"] = None
            entry["match"] = False
        else:
            backend = frame.backend
            target = _claim_vector(claim, m, backend)
            if qty == "E":
                got = frame.Ev
            elif qty == "N":
                got = frame.Nv
            elif qty == "JE":
                got = frame.value(psi_field)
            elif qty == "JN":
                got = frame.value(zeta_field)
            else:  # screen_vector: must be tangent and orthogonal to N
                got = [frame.g(target, frame.Ev), frame.g(target, frame.Nv)]
                entry["computed"] = {"g_E": scalar_json(got[0]), "g_N": scalar_json(got[1])}
                entry["match"] = all(backend.is_zero(x) for x in got)
                out.append(entry)
                continue
            entry["computed"] = [scalar_json(x) for x in got]
            entry["match"] = _projective_match(target, got)
        out.append(entry)
    return out


# -- the pipeline -----------------------------------------------------------------


def _frames(m: Manifest, geo):
    frames = []
    for pt in m.data.get("points", []):
        vals = [geo.backend.convert(parse_scalar(x, m.p, m.q)) if not isinstance(x, float) else x for x in pt]
        if geo.H.kind == "affine":
            frames.append(geo.frame_at(vals))
        else:
            frames.append(geo.frame(vals))
    sampled, skipped = geo.sample(m.samples, m.seed)
    return frames + sampled, skipped


def _selected_ids(m: Manifest, kind, has_structure, ids):
    sel = m.identities if ids is None else ids
    if sel == "all":
        return applicable_ids(kind, has_structure)
    return list(sel)


def run(manifest, ids=None, samples=None, tol=None, seed=None, dump_geometry=None, timing=True) -> RunReport:
    """Run the pipeline; never raises for geometric failures (they become exit codes)."""
    m = load_manifest(manifest)
    overrides = {"samples": samples, "seed": seed, "tolerance": tol}
    if any(v is not None for v in overrides.values()):
        m = m.with_overrides(**overrides)
    dump = m.data.get("dump_geometry", False) if dump_geometry is None else dump_geometry
    t0 = time.perf_counter()
    rep = RunReport(m.name, m.backend_name, m.seed, m.samples, m.tolerance)
    frames, kind = [], None
    try:
        setup = build(m)
        if setup.structure is not None:
            rep.structure_check = check_metallic_compat(setup.space, setup.structure, pairs=50,
                                                        seed=m.seed).to_json()
        geo = setup.geometry
        if geo is not None:
            frames, skipped = _frames(m, geo)
            rep.skipped = skipped
            if not frames and not skipped:
                raise PreconditionError("no valid sample point")
        elif ids not in (None, []) or m.data.get("identities", "all") not in ("all", []):
            raise PreconditionError("identities need a hypersurface")
        if geo is not None and not frames:
            # every sampled point failed; on an affine hypersurface they fail alike
            first = rep.skipped[0]
            rep.error = {"error": first["error"], "message": first["message"]}
            rep.exit_code = EXIT_PRECONDITION
        elif geo is not None:
            rep.frame = frames[0].to_json()
            if setup.structure is not None:
                cl = classify(frames, m.tolerance)
                kind = cl.kind
                rep.classification = cl.to_json()
            selected = _selected_ids(m, kind, setup.structure is not None, ids)
            rep.identities = verify(geo, frames, selected, kind, m.tolerance, m.seed)
            if dump:
                rep.geometry = [_dump(fr) for fr in frames]
        if rep.structure_check is not None and not rep.structure_check["passed"]:
            rep.exit_code = EXIT_PRECONDITION
        elif any(not r.passed for r in rep.identities):
            rep.exit_code = EXIT_IDENTITY
    except MLHError as exc:
        rep.error = exc.record()
        rep.exit_code = exc.exit_code
    except ZeroDivisionError as exc:
        rep.error = {"error": "arithmetic", "message": str(exc)}
        rep.exit_code = EXIT_PRECONDITION
    rep.claims = _evaluate_claims(m, frames[0] if frames else None, kind, rep.error)
    if rep.exit_code == EXIT_OK and any(c["fatal"] for c in rep.discrepancies):
        rep.exit_code = EXIT_PRECONDITION
    if timing:
        rep.timing = {"seconds": round(time.perf_counter() - t0, 6)}
    return rep


def _dump(fr):
    ig = induced_geometry(fr)
    data = ig.to_json()
    return {
        "point": [scalar_json(x) for x in fr.xv],
        "E": [scalar_json(x) for x in fr.Ev],
        "N": [scalar_json(x) for x in fr.Nv],
        "B_matrix": data["B_matrix"],
        "C_matrix": data["C_matrix"],
        "tau_covector": data["tau_covector"],
    }


def basis_residual(fr):
    """Largest deviation of the frame conditions at ``fr`` (used in reports and tests)."""
    res = fr.lightlike().check(fr.space, fr.backend, fr.Phiv)
    return max(abs(float(value_of(v))) for k, v in res.items() if k != "basis_det")
