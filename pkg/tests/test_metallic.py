from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlh import linalg
from mlh.ambient import SemiEuclideanSpace, diagonal_structure
from mlh.errors import DomainError, PreconditionError
from mlh.harness.fixtures import fixture
from mlh.harness.instances import (
    curved_invariant_instance,
    curved_ssi_instance,
    light_cone_instance,
    random_ssi_affine,
)
from mlh.harness.manifest import build, load_manifest
from mlh.hypersurface import AffineHypersurface, LightlikeGeometry
from mlh.induced import Phi_field
from mlh.metallic import (
    IDENTITY_IDS,
    REGISTRY,
    applicable_ids,
    classify,
    classify_point,
    distribution_split,
    fit_conformal_factor,
    fit_umbilical_factor,
    induce_metallic,
    lie_bracket,
    make_samples,
    mu0_alphas,
    verify,
)
from mlh.scalar import EXACT, metallic_sigma

R52 = SemiEuclideanSpace((-1, 1, -1, 1, 1))


def _setup(inst):
    setup = build(load_manifest(inst))
    frames, _ = setup.geometry.sample(inst.get("samples", 3), inst.get("seed", 0))
    return setup.geometry, frames


def _ssi1(entries=None, screen="adapted"):
    p, q = 1, 1
    s = metallic_sigma(p, q)
    J = diagonal_structure(p, q, entries or [p - s, p - s, s, s, s])
    geo = LightlikeGeometry(R52, AffineHypersurface([s, s, 1, 0, -1], 0), J, EXACT, screen=screen)
    return geo, [geo.frame_at([0] * 5)] + geo.sample(2, 0)[0]


def _report(reports, ident):
    return next(r for r in reports if r.id == ident)


# -- induced structure ---------------------------------------------------------------


def test_ssi_example_induced_data():
    geo, frames = _ssi1()
    d = induce_metallic(frames[0])
    assert all(x == 0 for x in d.reconstruction)
    assert d.v_of_E == 0
    q = 1
    u_zeta = geo.space.g(d.zeta, d.psi)
    assert u_zeta == q
    # v(E)^2 = p v(E) + q - u(xi):  0 = 0 + q - q
    assert d.v_of_E ** 2 - d.v_of_E - q + geo.space.g(d.xi, d.psi) == 0


def test_sigma_identity_induces_sigma_phi():
    s = metallic_sigma(1, 1)
    geo, frames = _ssi1([s] * 5, screen="canonical")
    assert classify(frames).kind == "Invariant"
    d = induce_metallic(frames[0])
    n = len(d.phi_matrix)
    assert d.phi_matrix == [[s if i == j else 0 for j in range(n)] for i in range(n)]
    reps = verify(geo, frames, ["THM-INV-METALLIC", "EQ4.12", "EQ4.13"], "Invariant")
    assert all(r.passed for r in reps)


def test_requires_structure():
    geo = LightlikeGeometry(R52, AffineHypersurface([metallic_sigma(1, 1)] * 2 + [1, 0, -1], 0), None, EXACT)
    with pytest.raises(PreconditionError):
        classify_point(geo.sample(1, 0)[0][0])
    with pytest.raises(PreconditionError):
        classify([])


# -- classification ---------------------------------------------------------------------


@pytest.mark.parametrize("name,kind", [
    ("ssi-example-1", "ScreenSemiInvariant"),
    ("ssi-example-2", "Invariant"),
    ("invariant-hyperplane", "Invariant"),
    ("light-cone-r41", "Generic"),
    ("curved-ssi-r52", "ScreenSemiInvariant"),
    ("curved-ssi-r73", "ScreenSemiInvariant"),
    ("invariant-cone-cylinder", "Invariant"),
])
def test_fixture_classification(name, kind):
    inst = fixture(name)
    inst["samples"] = min(inst.get("samples", 3), 4)
    geo, frames = _setup(inst)
    assert classify(frames).kind == kind


def test_generic_negative_control():
    # radical with a component in only one eigenspace but J mixing the screen: generic
    s = metallic_sigma(1, 1)
    geo, frames = _ssi1([s, 1 - s, s, 1 - s, s], screen="canonical")
    assert classify(frames).kind == "Generic"


def test_flags():
    geo, frames = _setup(light_cone_instance(samples=4))
    flags = classify(frames, 1e-8).flags
    assert flags["totally_umbilical"] and not flags["totally_geodesic"]
    assert flags["screen_conformal"] is None
    geo, frames = _setup(curved_invariant_instance(1, 1, samples=4))
    flags = classify(frames, 1e-8).flags
    assert flags["screen_conformal"] and all(abs(f - 0.5) < 1e-8 for f in flags["screen_conformal"])
    geo, frames = _ssi1()
    flags = classify(frames).flags
    assert flags["totally_geodesic"] and flags["mixed_geodesic"]
    assert flags["screen_conformal"] == "undetermined"


# -- registry -----------------------------------------------------------------------------


def test_registry_shape():
    assert set(IDENTITY_IDS) == set(REGISTRY)
    for spec in REGISTRY.values():
        assert spec.scope in ("general", "metallic", "invariant", "ssi")
        assert (spec.residual is None) != (spec.theorem is None)
    assert "EQ4.22" in applicable_ids("ScreenSemiInvariant")
    assert "EQ4.22" not in applicable_ids("Invariant")
    assert "EQ4.12" in applicable_ids("Invariant")
    assert applicable_ids(None, has_structure=False) == [i for i in IDENTITY_IDS if REGISTRY[i].scope == "general"]


def test_verify_preconditions():
    geo, frames = _ssi1()
    with pytest.raises(PreconditionError):
        verify(geo, frames, ["EQ4.12"], "ScreenSemiInvariant")
    with pytest.raises(DomainError):
        verify(geo, frames, ["EQ999"], "ScreenSemiInvariant")


def test_ssi_example_all_identities_exact():
    geo, frames = _ssi1()
    reps = verify(geo, frames, applicable_ids("ScreenSemiInvariant"), "ScreenSemiInvariant")
    assert all(r.passed and r.max_residual == 0 for r in reps), [r.id for r in reps if not r.passed]
    sc = _report(reps, "THM-SCREEN-CONFORMAL")
    assert sc.detail["note"] == "trivially conformal, factor undetermined"
    for ident in ("EQ4.41", "EQ4.42", "THM-PSI-PARALLEL", "THM-MIXED"):
        d = _report(reps, ident).detail
        assert d["left_holds"] and d["right_holds"]


@settings(max_examples=8)
@given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=1, max_value=4))
def test_random_affine_ssi_exact(seed, p):
    inst = random_ssi_affine(p, 1 + seed % 3, seed, samples=2)
    geo, frames = _setup(inst)
    kind = classify(frames).kind
    assert kind == "ScreenSemiInvariant"
    reps = verify(geo, frames, applicable_ids(kind), kind, seed=seed)
    assert all(r.passed for r in reps), [(r.id, r.detail) for r in reps if not r.passed]


def test_variants_reported():
    inst = curved_ssi_instance(1, 1, seed=0, samples=5)
    geo, frames = _setup(inst)
    reps = verify(geo, frames, ["EQ35", "EQ4.25", "EQ4.40"], "ScreenSemiInvariant", tol=1e-8)
    eq35 = _report(reps, "EQ35")
    assert eq35.passed and "variant_symmetric" in eq35.detail
    assert not eq35.detail["variant_symmetric"]["vanishes"]
    eq440 = _report(reps, "EQ4.40")
    assert eq440.passed and "variant_verbatim" in eq440.detail


def test_curved_theorems_nontrivial():
    inst = curved_ssi_instance(1, 1, seed=0, samples=5)
    geo, frames = _setup(inst)
    reps = verify(geo, frames, ["THM-PSI-PARALLEL", "THM-MIXED", "THM-ZETA-PARALLEL", "THM-D-PARALLEL"],
                  "ScreenSemiInvariant", tol=1e-8)
    assert all(r.passed for r in reps)
    psi = _report(reps, "THM-PSI-PARALLEL").detail
    assert not psi["left_holds"] and not psi["right_holds"]
    mixed = _report(reps, "THM-MIXED").detail
    assert mixed["left_max"] > 1e-3 and mixed["link_max"] <= 1e-8


@pytest.mark.parametrize("backend_derivative", ["dual", "fd"])
def test_lemma_identities_light_cone(backend_derivative):
    inst = light_cone_instance(samples=10, derivative=backend_derivative)
    tol = 1e-8 if backend_derivative == "dual" else 1e-5
    geo, frames = _setup(inst)
    reps = verify(geo, frames, applicable_ids("Generic"), "Generic", tol=tol)
    assert all(r.passed and r.max_residual <= tol for r in reps), [(r.id, r.max_residual) for r in reps]


def test_make_samples_deterministic():
    geo, frames = _ssi1()
    a = make_samples(frames, 3)
    b = make_samples(frames, 3)
    for x, y in zip(a, b):
        assert x.fr.value(x.U) == y.fr.value(y.U)


# -- distributions and brackets ---------------------------------------------------------


@pytest.mark.parametrize("m,k,mu0_dim", [(1, 1, 1), (2, 1, 3), (1, 2, 2)])
def test_distribution_dimensions(m, k, mu0_dim):
    geo, frames = _setup(curved_ssi_instance(1, 1, seed=1, m=m, k=k, samples=2))
    split = distribution_split(frames[0])
    n = len(frames[0].Phiv)
    assert len(split.mu0_basis) == mu0_dim == n - 3
    assert len(split.D_basis) == 2 + mu0_dim
    assert linalg.rank(split.D_basis + split.Dprime_basis, geo.backend) == n
    fr = frames[0]
    for X in fr.Phiv:
        assert max(abs(a + b - c) for a, b, c in zip(split.Q(fr, X), split.R(fr, X), X)) < 1e-12


def test_distribution_split_needs_ssi():
    geo, frames = _setup(light_cone_instance(samples=1))
    with pytest.raises(PreconditionError):
        distribution_split(frames[0])


def test_coordinate_brackets_vanish():
    geo, frames = _setup(light_cone_instance(samples=3))
    for fr in frames:
        for i in range(3):
            for j in range(3):
                br = lie_bracket(fr, Phi_field(i), Phi_field(j))
                assert max(abs(x) for x in br) < 1e-12


def test_constant_field_brackets_exact():
    geo, frames = _ssi1()
    fr = frames[0]
    assert all(x == 0 for x in lie_bracket(fr, Phi_field(0), lambda f: f.W[1]))


def test_bracket_dual_matches_fd():
    rng = random.Random(5)
    dual_geo, _ = _setup(curved_ssi_instance(1, 1, seed=2, samples=1))
    fd_geo, _ = _setup(curved_ssi_instance(1, 1, seed=2, samples=1, derivative="fd"))

    def U(fr):
        return linalg.vscale(fr.x[0], fr.Phi[1])

    def V(fr):
        return linalg.vadd(fr.W[0], linalg.vscale(fr.x[2] * fr.x[2], fr.Phi[0]))

    for _ in range(3):
        u = dual_geo.H.sample_params(rng, dual_geo.backend)
        a = lie_bracket(dual_geo.frame(u), U, V)
        b = lie_bracket(fd_geo.frame(u), U, V)
        assert max(abs(x - y) for x, y in zip(a, b)) < 1e-6
        assert max(abs(x) for x in a) > 1e-3


def test_mu0_alphas():
    geo, frames = _ssi1()
    s = make_samples(frames[:1])[0]
    formula, direct = mu0_alphas(s)
    assert all(x == 0 for x in formula) and all(x == 0 for x in direct)
    geo, frames = _setup(curved_ssi_instance(1, 1, seed=4, m=2, samples=3))
    for s in make_samples(frames):
        formula, direct = mu0_alphas(s)
        assert all(abs(a - b) <= 1e-8 for a, b in zip(formula, direct))


# -- fits --------------------------------------------------------------------------------


def test_conformal_fit_recovers_factor():
    rng = random.Random(0)
    B = [rng.uniform(-1, 1) for _ in range(30)]
    f, res, trivial = fit_conformal_factor([2 * b for b in B], B)
    assert abs(f - 2) <= 1e-8 and res <= 1e-12 and not trivial
    f, res, trivial = fit_conformal_factor([1.0, 2.0], [0.0, 0.0])
    assert f is None and trivial and res == 2.0
    lam, res = fit_umbilical_factor([0, 0], [1, 2], exact=True)
    assert lam == 0 and res == 0
    lam, res = fit_umbilical_factor([3, 6], [1, 2], exact=True)
    assert lam == 3 and res == 0
