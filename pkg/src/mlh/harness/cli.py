"""Command line interface: ``mlh check|classify|verify|fixtures|random``."""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import MLHError, SchemaError
from ..metallic import IDENTITY_IDS
from .fixtures import fixtures
from .instances import generate_random_instance
from .manifest import default_tolerance
from .runner import EXIT_SCHEMA, check_structure, report_json, run

__all__ = ["main", "build_parser"]


def _parse_ids(text: str | None):
    if text is None:
        return None
    text = text.strip()
    if text == "all":
        return "all"
    if text == "":
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_signature(text: str):
    parts = text.replace(" ", "").split(",")
    out = []
    for p in parts:
        if p in ("-", "-1"):
            out.append(-1)
        elif p in ("+", "1", "+1"):
            out.append(1)
        else:
            raise SchemaError(f"bad signature entry {p!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mlh", description="Lightlike hypersurfaces of metallic semi-Riemannian spaces")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, identities=True):
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--samples", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--dump-geometry", action="store_true", help="include per-point E, N, B, C, tau")
        p.add_argument("--no-timing", action="store_true", help="omit the timing field")
        if identities:
            p.add_argument("--identities", help="comma-separated ids or 'all'")

    p = sub.add_parser("check", help="structure checks only")
    p.add_argument("manifest")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p = sub.add_parser("classify", help="frame and classification")
    p.add_argument("manifest")
    common(p, identities=False)
    p = sub.add_parser("verify", help="run the identity registry")
    p.add_argument("manifest")
    common(p)
    p = sub.add_parser("fixtures", help="list (or run) the built-in fixtures")
    p.add_argument("--run", action="store_true")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--no-timing", action="store_true")
    p = sub.add_parser("random", help="emit a random lightlike manifest")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--signature", required=True, help="e.g. -,+,-,+ or -1,1,-1,1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=["exact", "float"], default="exact")
    return ap


def _text_report(data: dict) -> str:
    lines = [f"manifest: {data['manifest']}  status: {data['status']}  exit: {data['exit_code']}"]
    if data.get("error"):
        lines.append(f"error: {data['error']['error']}: {data['error']['message']}")
    if data.get("structure_check"):
        sc = data["structure_check"]
        lines.append(f"structure: EQ3={sc['EQ3']} EQ4={sc['EQ4']} EQ5={sc['EQ5']}")
    if data.get("classification"):
        lines.append(f"classification: {data['classification']['kind']}  flags: {data['classification']['flags']}")
    for r in data.get("identities", []):
        mark = "PASS" if r["passed"] else "FAIL"
        lines.append(f"  {mark} {r['id']:<22} max_residual={r['max_residual']:.3e} samples={r['samples']}")
    for d in data.get("discrepancies", []):
        fatal = " (fatal)" if d["fatal"] else ""
        lines.append(f"  DISCREPANCY {d['tag']}{fatal}: claimed {d['paper_claim']} computed {d['computed']}")
    return "\n".join(lines)


def _emit(data, fmt: str, out):
    if fmt == "text":
        if isinstance(data, list):
            out.write("\n\n".join(_text_report(d) for d in data) + "\n")
        else:
            out.write(_text_report(data) + "\n")
    else:
        out.write(json.dumps(data, indent=2) + "\n")


def _fixtures_cmd(args, out) -> int:
    items = fixtures()
    if not args.run:
        listing = [{"name": f["name"], "description": f.get("description", ""), "expected": f["expected"]}
                   for f in items]
        if args.format == "text":
            for f in listing:
                out.write(f"{f['name']:<28} {f['expected']['outcome']:<24} exit={f['expected']['exit_code']}\n")
        else:
            out.write(json.dumps(listing, indent=2) + "\n")
        return 0
    results, ok = [], True
    for f in items:
        expected = f["expected"]
        rep = run(f, timing=not args.no_timing)
        data = rep.to_json()
        matched = rep.exit_code == expected["exit_code"]
        if "error" in expected:
            matched = matched and rep.error is not None and rep.error["error"] == expected["error"]
        if "classification" in expected:
            got = (data.get("classification") or {}).get("kind")
            matched = matched and got == expected["classification"]
        if expected["outcome"] == "documented-discrepancy":
            matched = matched and bool(rep.discrepancies)
        else:
            matched = matched and not rep.discrepancies
        data["expected"] = expected
        data["expectation_met"] = matched
        ok = ok and matched
        results.append(data)
    if args.format == "text":
        for d in results:
            mark = "ok " if d["expectation_met"] else "BAD"
            out.write(f"{mark} {d['manifest']:<28} exit={d['exit_code']} expected={d['expected']['exit_code']} "
                      f"discrepancies={len(d['discrepancies'])}\n")
    else:
        out.write(json.dumps(results, indent=2) + "\n")
    return 0 if ok else 1


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fixtures":
            return _fixtures_cmd(args, out)
        if args.command == "random":
            data = generate_random_instance(args.p, args.q, args.dim, _parse_signature(args.signature), args.seed,
                                            backend=args.backend)
            out.write(json.dumps(data, indent=2) + "\n")
            return 0
        if args.command == "check":
            rep = check_structure(args.manifest)
            _emit(rep.to_json(), args.format, out)
            return rep.exit_code
        tol = args.tol if args.tol is not None else None
        if tol is None:
            default_tolerance()  # validate MLH_TOL early
        ids = [] if args.command == "classify" else _parse_ids(args.identities)
        if isinstance(ids, list):
            unknown = [i for i in ids if i not in IDENTITY_IDS]
            if unknown:
                raise SchemaError(f"unknown identity ids: {', '.join(unknown)}")
        rep = run(args.manifest, ids=ids, samples=args.samples, tol=tol, seed=args.seed,
                  dump_geometry=args.dump_geometry or None, timing=not args.no_timing)
        _emit(rep.to_json(), args.format, out)
        return rep.exit_code
    except SchemaError as exc:
        out.write(json.dumps(exc.record()) + "\n")
        return EXIT_SCHEMA
    except MLHError as exc:
        out.write(json.dumps(exc.record()) + "\n")
        return exc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
