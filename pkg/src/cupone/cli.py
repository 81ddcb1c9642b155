"""Command-line front end.  Every command prints one JSON report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import suites
from .cochain import IDENTITIES, Cochain, cup, verify_identity
from .delta import DeltaSet
from .errors import CuponeError, DomainError, NotACocycle, Undefined, ValidationError
from .massey import (
    CohomologyContext,
    distinguish_xk,
    nfold_repeated_zeta,
    restricted_triple,
    triple_massey,
    u_restricted_invariant,
)
from .rings import Ring

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2, 3
EXTRA_SUITES = ("free-dga", "omega-forms")


class UsageError(Exception):
    pass


def _ring(text: str) -> Ring:
    try:
        return Ring.parse(text)
    except (CuponeError, ValueError) as exc:
        raise UsageError(f"bad ring {text!r}: {exc}") from None


def _complex(args) -> DeltaSet:
    if args.input:
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from None
        return DeltaSet.from_json(text)
    if not args.builder:
        raise UsageError("give --builder NAME[:params] or --input FILE")
    try:
        return suites.build_named(args.builder)
    except CuponeError as exc:
        raise UsageError(str(exc)) from None


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_pretty(obj, indent: int = 0) -> str:
    """A plain indented listing of a JSON report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, sort_keys=True)}")
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x)) for x in v)


# ------------------------------------------------------------------ commands


def cmd_verify(args) -> tuple[int, dict]:
    ds = _complex(args)
    ring = _ring(args.ring)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    tags = args.identity or list(IDENTITIES)
    results = []
    ok = True
    for tag in tags:
        if tag == "free-dga":
            r = suites.free_dga_suite(ring, args.seed, samples=args.trials)
            entry = {"identity": tag, "trials": args.trials, "status": "pass" if r["passed"] else "fail", "details": r}
        elif tag == "omega-forms":
            r = suites.omega_suite(args.seed, args.trials)
            failing = sorted(k for k, v in r.items() if isinstance(v, dict) and v.get("failures"))
            entry = {"identity": tag, "trials": args.trials, "status": "fail" if failing else "pass", "failing": failing, "details": r}
        elif tag in IDENTITIES:
            entry = verify_identity(ds, tag, args.trials, args.seed, ring).to_json()
        else:
            raise UsageError(f"unknown identity {tag!r}; choose from {', '.join(IDENTITIES + EXTRA_SUITES)}")
        ok = ok and entry["status"] == "pass"
        results.append(entry)
    report = {
        "command": "verify",
        "complex": ds.name,
        "counts": ds.counts(),
        "ring": ring.to_json(),
        "seed": args.seed,
        "trials": args.trials,
        "results": results,
        "status": "pass" if ok else "fail",
    }
    return (EXIT_OK if ok else EXIT_FAIL), report


def cmd_cohomology(args) -> tuple[int, dict]:
    ds = _complex(args)
    ring = _ring(args.ring)
    ctx = CohomologyContext(ds, ring)
    report = {
        "command": "cohomology",
        "complex": ds.name,
        "ring": ring.to_json(),
        "h1": {"free_rank": ctx.h1.free_rank, "torsion": ctx.h1.torsion, "group": str(ctx.h1)},
        "h2": {"free_rank": ctx.h2.free_rank, "torsion": ctx.h2.torsion, "group": str(ctx.h2)},
        "cup_table": ctx.cup_table(ctx.h1_basis()),
    }
    duals = ctx.dual_cocycles()
    if duals:
        names = sorted(duals)
        report["generator_classes"] = {g: ctx.h1_class(duals[g]) for g in names}
        report["generator_cup_table"] = {
            f"{g}*{h}": ctx.h2_class(cup(duals[g], duals[h])) for g in names for h in names
        }
    return EXIT_OK, report


def _class_arg(ctx: CohomologyContext, text: str):
    if "," in text or text.lstrip("-").isdigit():
        try:
            coords = [int(x) for x in text.split(",")]
        except ValueError:
            raise UsageError(f"bad class {text!r}") from None
        if len(coords) != ctx.h1.rank:
            raise UsageError(f"class {text!r} needs {ctx.h1.rank} coordinates")
        return coords
    if text.startswith("@"):
        try:
            obj = json.loads(Path(text[1:]).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read cochain {text[1:]}: {exc}") from None
        return Cochain.from_json(obj, ctx.ds)
    duals = ctx.dual_cocycles()
    if text not in duals:
        raise UsageError(f"unknown class {text!r}; give coordinates, a generator name or @cochain.json")
    return duals[text]


def cmd_massey(args) -> tuple[int, dict]:
    ds = _complex(args)
    ring = _ring(args.ring)
    ctx = CohomologyContext(ds, ring)
    classes = [_class_arg(ctx, c) for c in (args.cls or [])]
    need = {"triple": 3, "nfold-zeta": 1, "restricted": 2, "u-invariant": 1}[args.variant]
    if len(classes) != need:
        raise UsageError(f"variant {args.variant} needs {need} --class arguments")
    base = {"command": "massey", "complex": ds.name, "ring": ring.to_json(), "variant": args.variant}
    try:
        if args.variant == "triple":
            res = triple_massey(ctx, *classes).to_json()
        elif args.variant == "nfold-zeta":
            res = nfold_repeated_zeta(ctx, classes[0], args.n).to_json()
        elif args.variant == "restricted":
            res = restricted_triple(ctx, *classes).to_json()
        else:
            res = u_restricted_invariant(ctx, classes[0]).to_json()
    except Undefined as exc:
        base["result"] = {"defined": False, "obstruction": exc.obstruction}
        return (EXIT_PRECONDITION if args.strict else EXIT_OK), base
    base["result"] = res
    return EXIT_OK, base


def cmd_distinguish(args) -> tuple[int, dict]:
    if args.k < 0 or args.l < 0:
        raise UsageError("k and l must be nonnegative")
    return EXIT_OK, {"command": "distinguish", **distinguish_xk(args.k, args.l)}


def cmd_paper_suite(args) -> tuple[int, dict]:
    return EXIT_OK, {"command": "paper-suite", **suites.paper_suite(args.seed)}


def cmd_build(args) -> tuple[int, str]:
    ds = _complex(args)
    return EXIT_OK, ds.to_json()


# ------------------------------------------------------------------- parsing


def _add_complex(p):
    g = p.add_argument_group("complex")
    g.add_argument("--builder", help="interval | torus | simplexN | attach:P | xk:K | bintest[:DEPTH] | random:SIZE[:SEED]")
    g.add_argument("--input", help="Delta-set JSON file")


def _add_common(p, ring=True):
    if ring:
        p.add_argument("--ring", default="Z", help="Z or Zp:P")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--pretty", action="store_true", help="human-readable rendering of the JSON report")
    p.add_argument("--strict", action="store_true", help="exit 3 when a requested product is undefined")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cupone", description="Exact cup-one algebra and Massey product computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run identity checks")
    _add_complex(p)
    _add_common(p)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--identity", action="append", help="identity tag (repeatable): " + ", ".join(IDENTITIES + EXTRA_SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cohomology", help="H^1, H^2 and the cup table")
    _add_complex(p)
    _add_common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("massey", help="Massey products of degree-one classes")
    _add_complex(p)
    _add_common(p)
    p.add_argument("--variant", choices=["triple", "nfold-zeta", "restricted", "u-invariant"], default="triple")
    p.add_argument("--class", dest="cls", action="append", help="H^1 coordinates '1,0,2', a generator name, or @cochain.json")
    p.add_argument("--n", type=int, default=3, help="order for nfold-zeta")
    p.set_defaults(func=cmd_massey)

    p = sub.add_parser("distinguish", help="compare X_k and X_l with the restricted invariant")
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    _add_common(p, ring=False)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("paper-suite", help="reproduce the worked examples")
    _add_common(p, ring=False)
    p.set_defaults(func=cmd_paper_suite)

    p = sub.add_parser("build", help="write a built complex as Delta-set JSON")
    _add_complex(p)
    p.add_argument("--out")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_build)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, report = args.func(args)
    except (UsageError, ValidationError) as exc:
        print(dumps({"error": "validation", "message": str(exc)}), end="", file=sys.stderr)
        return EXIT_INVALID
    except (DomainError, NotACocycle, CuponeError) as exc:
        print(dumps({"error": type(exc).__name__, "message": str(exc)}), end="", file=sys.stderr)
        return EXIT_PRECONDITION
    if isinstance(report, str):
        text = report
    else:
        text = render_pretty(report) + "\n" if args.pretty else dumps(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
