"""Randomized and constructed manifests.

All random rationals have numerators and denominators bounded by 16.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ..errors import DomainError
from .serialize import rational_json

__all__ = [
    "generate_random_instance",
    "random_null_covector",
    "random_ssi_affine",
    "curved_ssi_instance",
    "curved_invariant_instance",
    "light_cone_instance",
]

BOUND = 16


def _rat(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-BOUND, BOUND), rng.randint(1, BOUND))
        if x != 0 or not nonzero:
            return x


def _check_signature(signature):
    sig = [int(s) for s in signature]
    if any(s not in (-1, 1) for s in sig):
        raise DomainError(f"signature entries must be +-1, got {signature!r}")
    if -1 not in sig or 1 not in sig:
        raise DomainError("signature must be indefinite to admit null directions")
    return sig


def random_null_covector(signature, rng: random.Random):
    """Nonzero rational c with sum eps_i c_i^2 = 0 (two-coordinate completion).

    One negative and one positive slot are completed from
    (c_j - c_i)(c_j + c_i) = -R, with R the contribution of the others.
    """
    sig = _check_signature(signature)
    neg = rng.choice([i for i, s in enumerate(sig) if s < 0])
    pos = rng.choice([i for i, s in enumerate(sig) if s > 0])
    c = [Fraction(0)] * len(sig)
    for k in range(len(sig)):
        if k not in (neg, pos) and rng.random() < 0.7:
            c[k] = _rat(rng)
    R = sum(sig[k] * c[k] * c[k] for k in range(len(sig)))
    t = _rat(rng, nonzero=True)
    c[pos] = (t - R / t) / 2
    c[neg] = (-R / t - t) / 2
    return c


def _random_structure(p, q, signature, rng: random.Random):
    n = len(signature)
    if rng.random() < 0.5:
        return {"type": "diagonal", "entries": [rng.choice(["sigma", "p-sigma"]) for _ in range(n)]}
    # involutive F compatible with the metric: swaps within equal signs, +-1 elsewhere
    F = [[0] * n for _ in range(n)]
    free = list(range(n))
    rng.shuffle(free)
    while free:
        i = free.pop()
        partners = [j for j in free if signature[j] == signature[i]]
        if partners and rng.random() < 0.5:
            j = rng.choice(partners)
            free.remove(j)
            sgn = rng.choice([1, -1])
            F[i][j] = F[j][i] = sgn
        else:
            F[i][i] = rng.choice([1, -1])
    return {"type": "from_product", "F": F, "branch": rng.choice(["+", "-"])}


def generate_random_instance(p: int, q: int, dim: int, signature, seed: int, backend: str = "exact",
                             samples: int = 5) -> dict:
    """Manifest of a random lightlike hyperplane with a random metallic structure."""
    sig = _check_signature(signature)
    if len(sig) != dim:
        raise DomainError("signature length must equal dim")
    rng = random.Random(seed)
    c = random_null_covector(sig, rng)
    return {
        "name": f"random-{dim}-{seed}",
        "metallic": {"p": p, "q": q},
        "ambient": {"dim": dim, "signature": sig},
        "structure": _random_structure(p, q, sig, rng),
        "hypersurface": {"type": "affine", "c": [rational_json(x) for x in c], "offset": rational_json(_rat(rng))},
        "screen": {"policy": "canonical"},
        "identities": "all",
        "samples": samples,
        "seed": seed,
        "backend": backend,
    }


def _null_in_block(sig_block, rng):
    """Random nonzero null vector (coordinates) for a block signature with both signs."""
    c = random_null_covector(sig_block, rng)
    return [s * x for s, x in zip(sig_block, c)]


def random_ssi_affine(p: int, q: int, seed: int, dim: int | None = None, backend: str = "exact",
                      samples: int = 3) -> dict:
    """Lightlike hyperplane whose radical has null components in both J-eigenspaces.

    With the adapted screen it is screen semi-invariant.
    """
    rng = random.Random(seed)
    dim = dim or rng.choice([5, 6, 7])
    m = rng.randint(2, dim - 3)  # size of the (p - sigma)-block, each block has both signs
    sig_minus = [-1, 1] + [rng.choice([-1, 1]) for _ in range(m - 2)]
    sig_plus = [-1, 1] + [rng.choice([-1, 1]) for _ in range(dim - m - 2)]
    E = _null_in_block(sig_minus, rng) + _null_in_block(sig_plus, rng)
    sig = sig_minus + sig_plus
    c = [s * e for s, e in zip(sig, E)]
    entries = ["p-sigma"] * m + ["sigma"] * (dim - m)
    return {
        "name": f"random-ssi-{seed}",
        "metallic": {"p": p, "q": q},
        "ambient": {"dim": dim, "signature": sig},
        "structure": {"type": "diagonal", "entries": entries},
        "hypersurface": {"type": "affine", "c": [rational_json(x) for x in c], "offset": rational_json(_rat(rng))},
        "screen": {"policy": "adapted"},
        "identities": "all",
        "samples": samples,
        "seed": seed,
        "backend": backend,
    }


def _poly(rng: random.Random, var: str) -> str:
    coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(3)]
    if all(a == 0 for a in coeffs):
        coeffs[0] = Fraction(1)
    terms = [f"({a})*{var}**{k + 1}" for k, a in enumerate(coeffs) if a != 0]
    return " + ".join(terms)


def _cone_family(p, q, m, k, Zs, name, seed, samples, derivative="dual"):
    """Chart (y, sum_j Z_j(y_{2j-1} + y_{2j}) + w (1 + |v|^2, 2v, 1 - |v|^2)).

    The y block (signature (-,+) repeated m times) lies in the (p - sigma)
    eigenspace, the null cone block (signature (-,+,...,+)) in the sigma one.
    """
    w = f"u{2 * m + 1}"
    v = [f"u{2 * m + 2 + i}" for i in range(k)]
    vv = " + ".join(f"{x}**2" for x in v)
    cone = [f"{w}*(1 + {vv})"] + [f"2*{w}*{x}" for x in v] + [f"{w}*(1 - ({vv}))"]
    comps = [f"u{i + 1}" for i in range(2 * m)]
    for c in range(k + 2):
        terms = [cone[c]]
        for j in range(m):
            if Zs and Zs[j][c]:
                terms.append(Zs[j][c].replace("S", f"(u{2 * j + 1} + u{2 * j + 2})"))
        comps.append(" + ".join(terms))
    sig = [-1, 1] * m + [-1] + [1] * (k + 1)
    dim = len(sig)
    return {
        "name": name,
        "metallic": {"p": p, "q": q},
        "ambient": {"dim": dim, "signature": sig},
        "structure": {"type": "diagonal", "entries": ["p-sigma"] * (2 * m) + ["sigma"] * (k + 2)},
        "hypersurface": {
            "type": "chart",
            "components": comps,
            "domain": [[-1.0, 1.0]] * (2 * m) + [[0.5, 2.0]] + [[-1.0, 1.0]] * k,
        },
        "screen": {"policy": "adapted"},
        "identities": "all",
        "samples": samples,
        "seed": seed,
        "backend": "float",
        "derivative": derivative,
        "tolerance": 1e-8,
    }


def curved_ssi_instance(p: int, q: int, seed: int, m: int = 1, k: int = 1, samples: int = 20,
                        derivative: str = "dual") -> dict:
    """Curved screen semi-invariant chart in R^{2m+k+2}.

    With m = 1 both mu0 and D are integrable; with m >= 2 they generically
    are not.
    """
    rng = random.Random(seed)
    Zs = [[_poly(rng, "S") for _ in range(k + 2)] for _ in range(m)]
    return _cone_family(p, q, m, k, Zs, f"curved-ssi-m{m}-k{k}-{seed}", seed, samples, derivative)


def curved_invariant_instance(p: int, q: int, seed: int = 0, k: int = 1, samples: int = 20,
                              derivative: str = "dual") -> dict:
    """Cylinder over a light cone in the sigma eigenspace: an invariant hypersurface."""
    return _cone_family(p, q, 1, k, None, f"invariant-cone-cylinder-{seed}", seed, samples, derivative)


def light_cone_instance(p: int = 1, q: int = 1, seed: int = 0, samples: int = 20, derivative: str = "dual") -> dict:
    """Light cone of R^4_1 with a diagonal metallic structure."""
    return {
        "name": "light-cone-r41",
        "metallic": {"p": p, "q": q},
        "ambient": {"dim": 4, "signature": [-1, 1, 1, 1]},
        "structure": {"type": "diagonal", "entries": ["p-sigma", "sigma", "p-sigma", "sigma"]},
        "hypersurface": {
            "type": "chart",
            "components": ["u1*(1 + u2**2 + u3**2)", "2*u1*u2", "2*u1*u3", "u1*(1 - u2**2 - u3**2)"],
            "domain": [[0.5, 2.0], [-1.0, 1.0], [-1.0, 1.0]],
        },
        "screen": {"policy": "canonical"},
        "identities": "all",
        "samples": samples,
        "seed": seed,
        "backend": "float",
        "derivative": derivative,
        "tolerance": 1e-8,
    }
