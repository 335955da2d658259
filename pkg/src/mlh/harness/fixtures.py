"""Worked examples as manifests, with the expected outcome of each run.

Four fixtures encode published examples verbatim (including their claims,
which the runner re-verifies); the others are constructed instances with
known answers.
"""

from __future__ import annotations

import json

from ..errors import DomainError
from .instances import curved_invariant_instance, curved_ssi_instance, light_cone_instance

__all__ = ["fixtures", "fixture", "fixture_names"]

GOLDEN = {"p": 1, "q": 1}
R52 = {"dim": 5, "signature": [-1, 1, -1, 1, 1]}


def _ex1_structure():
    return {
        "name": "ex-1-structure",
        "description": "diag(p-sigma, sigma, p-sigma, sigma, p-sigma, sigma, sigma) on R^7_3",
        "metallic": GOLDEN,
        "ambient": {"dim": 7, "signature": [-1, 1, -1, 1, -1, 1, 1]},
        "structure": {"type": "diagonal", "entries": ["p-sigma", "sigma", "p-sigma", "sigma", "p-sigma", "sigma",
                                                      "sigma"]},
        "hypersurface": None,
        "identities": [],
        "seed": 0,
        "backend": "exact",
        "expected": {"outcome": "pass", "exit_code": 0},
    }


def _ex2_hyperplane():
    return {
        "name": "ex-2-hyperplane",
        "description": "x1 = sigma x5 in R^5_2 with J = sigma I; claimed invariant lightlike",
        "metallic": GOLDEN,
        "ambient": R52,
        "structure": {"type": "diagonal", "entries": ["sigma"] * 5},
        "hypersurface": {"type": "affine", "c": [1, 0, 0, 0, "-sigma"], "offset": 0},
        "identities": "all",
        "samples": 2,
        "seed": 0,
        "backend": "exact",
        "claims": [
            {"tag": "EX-2/lightlike", "quantity": "lightlike", "paper_claim": True,
             "comment": "induced Gram matrix on span(d2, d3, d4, sigma d1 + d5) is non-degenerate"},
            {"tag": "EX-2/E", "quantity": "E", "paper_claim": [0, "sigma", "sigma", 0, 0]},
            {"tag": "EX-2/N", "quantity": "N", "paper_claim": [0, "1/(2*sigma)", "-1/(2*sigma)", 0, 0]},
            {"tag": "EX-2/classification", "quantity": "classification", "paper_claim": "Invariant"},
        ],
        "expected": {"outcome": "documented-discrepancy", "exit_code": 3, "error": "not_lightlike"},
    }


def _ssi1_base():
    return {
        "metallic": GOLDEN,
        "ambient": R52,
        "structure": {"type": "diagonal", "entries": ["p-sigma", "p-sigma", "sigma", "sigma", "sigma"]},
        "hypersurface": {"type": "affine", "c": ["sigma", "sigma", 1, 0, -1], "offset": 0},
        "seed": 0,
        "backend": "exact",
    }


OMEGA1 = ["-q", "q", "sigma", 0, "sigma"]
OMEGA2 = ["-sigma*(p-sigma)/2", "sigma*(p-sigma)/2", "-sigma/2", 0, "sigma/2"]
OMEGA3 = [0, 0, 0, 1, 0]
SSI1_E = ["sigma", "-sigma", 1, 0, 1]
SSI1_N = ["-sigma/2", "sigma/2", "-1/2", 0, "1/2"]


def _ssi_example_1():
    m = _ssi1_base()
    m.update({
        "name": "ssi-example-1",
        "description": "x5 = sigma x1 + sigma x2 + x3 in R^5_2, J = diag(p-sigma, p-sigma, sigma, sigma, sigma)",
        "screen": {"policy": "adapted"},
        "points": [[0, 0, 0, 0, 0]],
        "identities": "all",
        "samples": 2,
        "claims": [
            {"tag": "SSI-EX-1/E", "quantity": "E", "paper_claim": SSI1_E},
            {"tag": "SSI-EX-1/N", "quantity": "N", "paper_claim": SSI1_N,
             "comment": "valid null transversal, but g(N, JE) = sigma != 0, so JE is not in its screen"},
            {"tag": "SSI-EX-1/Omega1", "quantity": "JE", "paper_claim": OMEGA1},
            {"tag": "SSI-EX-1/Omega2", "quantity": "JN", "paper_claim": OMEGA2,
             "comment": "equals J applied to the claimed N, which differs from the computed N"},
            {"tag": "SSI-EX-1/Omega2-screen", "quantity": "screen_vector", "paper_claim": OMEGA2,
             "comment": "g(Omega2, E) = v(E) = sigma: Omega2 is not tangent"},
            {"tag": "SSI-EX-1/classification", "quantity": "classification",
             "paper_claim": "ScreenSemiInvariant", "fatal": True},
        ],
        "expected": {"outcome": "documented-discrepancy", "exit_code": 0,
                     "classification": "ScreenSemiInvariant"},
    })
    return m


def _ssi_example_1_recorded_screen():
    m = _ssi1_base()
    m.update({
        "name": "ssi-example-1-recorded-screen",
        "description": "the same hyperplane with the published screen {Omega1, Omega2, Omega3}",
        "screen": {"policy": "override", "basis": [OMEGA1, OMEGA2, OMEGA3]},
        "identities": "all",
        "samples": 1,
        "claims": [
            {"tag": "SSI-EX-1/screen", "quantity": "screen_vector", "paper_claim": OMEGA2,
             "comment": "the override is rejected because Omega2 is not orthogonal to E"},
        ],
        "expected": {"outcome": "documented-discrepancy", "exit_code": 3, "error": "screen_construction"},
    })
    return m


def _ssi_example_2():
    return {
        "name": "ssi-example-2",
        "description": "x5 = sigma x3 + sigma x4 + x1 in R^5_2 with J = sigma I; claimed screen semi-invariant",
        "metallic": GOLDEN,
        "ambient": R52,
        "structure": {"type": "diagonal", "entries": ["sigma"] * 5},
        "hypersurface": {"type": "affine", "c": [1, 0, "sigma", "sigma", -1], "offset": 0},
        "screen": {"policy": "canonical"},
        "identities": "all",
        "samples": 2,
        "seed": 0,
        "backend": "exact",
        "claims": [
            {"tag": "SSI-EX-2/E", "quantity": "E", "paper_claim": [1, 0, "sigma", "-sigma", 1]},
            {"tag": "SSI-EX-2/Omega2", "quantity": "JE",
             "paper_claim": ["sigma", "sigma**2", 0, "-sigma**2", "sigma"],
             "comment": "J = sigma I maps E to sigma E"},
            {"tag": "SSI-EX-2/classification", "quantity": "classification",
             "paper_claim": "ScreenSemiInvariant", "fatal": True},
        ],
        "expected": {"outcome": "documented-discrepancy", "exit_code": 3, "classification": "Invariant"},
    }


def _invariant_hyperplane():
    return {
        "name": "invariant-hyperplane",
        "description": "x1 = x2 in R^5_2 with J = diag(sigma, sigma, p-sigma, p-sigma, sigma): radical in the "
                       "sigma eigenspace",
        "metallic": GOLDEN,
        "ambient": R52,
        "structure": {"type": "diagonal", "entries": ["sigma", "sigma", "p-sigma", "p-sigma", "sigma"]},
        "hypersurface": {"type": "affine", "c": [1, -1, 0, 0, 0], "offset": 0},
        "screen": {"policy": "adapted"},
        "identities": "all",
        "samples": 2,
        "seed": 0,
        "backend": "exact",
        "claims": [
            {"tag": "INV/JE", "quantity": "JE", "paper_claim": ["sigma", "sigma", 0, 0, 0]},
            {"tag": "INV/classification", "quantity": "classification", "paper_claim": "Invariant", "fatal": True},
        ],
        "expected": {"outcome": "pass", "exit_code": 0, "classification": "Invariant"},
    }


def _constructed():
    cone = light_cone_instance(samples=20)
    cone["expected"] = {"outcome": "pass", "exit_code": 0, "classification": "Generic"}
    ssi = curved_ssi_instance(1, 1, seed=0, m=1, k=1, samples=20)
    ssi["name"] = "curved-ssi-r52"
    ssi["expected"] = {"outcome": "pass", "exit_code": 0, "classification": "ScreenSemiInvariant"}
    ssi7 = curved_ssi_instance(1, 1, seed=0, m=2, k=1, samples=10)
    ssi7["name"] = "curved-ssi-r73"
    ssi7["expected"] = {"outcome": "pass", "exit_code": 0, "classification": "ScreenSemiInvariant"}
    inv = curved_invariant_instance(1, 1, seed=0, samples=20)
    inv["name"] = "invariant-cone-cylinder"
    inv["expected"] = {"outcome": "pass", "exit_code": 0, "classification": "Invariant"}
    return [cone, ssi, ssi7, inv]


def fixtures() -> list:
    """All fixture manifests (fresh copies)."""
    items = [
        _ex1_structure(),
        _ex2_hyperplane(),
        _ssi_example_1(),
        _ssi_example_1_recorded_screen(),
        _ssi_example_2(),
        _invariant_hyperplane(),
    ] + _constructed()
    return json.loads(json.dumps(items))


def fixture_names() -> list:
    return [f["name"] for f in fixtures()]


def fixture(name: str) -> dict:
    for f in fixtures():
        if f["name"] == name:
            return f
    raise DomainError(f"unknown fixture {name!r}")
