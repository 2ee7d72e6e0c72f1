"""``loopforge`` command line.

Exit codes: 0 when every check passes (or the identity holds / is not
refuted), 1 when a check fails or an identity is refuted, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import battery
from . import calculus as C
from . import properties as P
from . import series as S
from .catalog import builtin_catalog
from .errors import InternalError, LoopError
from .loop import CayleyLoop, parse_table, serialize_table
from .mappings import inner_mapping_group, multiplication_group
from .report import Report, record
from .terms import (
    One,
    basis_for_class,
    decompose_5_2,
    default_budget,
    delta,
    holds_identity,
    parse_term,
    print_term,
    values_equal,
)

KIND_CHOICES = ("mu", "alpha", "beta", "alpha-beta")


def slug(name: str) -> str:
    if name == "1":
        return "trivial"
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")


def load_loop(source: str) -> CayleyLoop:
    """A table file, or the name (or file stem) of a built-in fixture."""
    path = Path(source)
    if path.exists():
        return parse_table(path.read_text(encoding="utf-8"), name=path.stem)
    cat = builtin_catalog()
    for name, Q in cat.items():
        if source in (name, slug(name)):
            return Q
    raise FileNotFoundError(f"no such file or built-in loop: {source}")


def _kind(arg: str | None, default: str = "alpha_beta") -> str:
    return default if arg is None else arg.replace("-", "_")


def _subloop(H: C.Subloop) -> list[str]:
    return H.labels()


def _emit(args, report: Report) -> int:
    report.sections.setdefault("seed", args.seed)
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text(), end="")
    return 0 if report.passed else 1


# -- commands ---------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    Q = load_loop(args.file)
    rep = Report(f"analysis of {Q.name}")
    rep.sections["loop"] = {"name": Q.name, "order": Q.order, "identity": Q.label(Q.identity)}
    props = P.properties(Q)
    rep.sections["properties"] = props
    witnesses = {}
    for key, find in (
        ("group", P.find_nonassociative),
        ("commutative", P.find_noncommutative),
        ("ip", P.find_ip_failure),
        ("moufang", P.find_moufang_failure),
        ("aloop", P.find_aloop_failure),
        ("power_associative", P.find_power_associative_failure),
        ("diassociative", P.find_diassociative_failure),
        ("alternative", P.find_alternative_failure),
    ):
        if not props[key]:
            witnesses[key] = _jsonable(find(Q))
    rep.sections["witnesses"] = witnesses
    nuc = C.nuclei(Q)
    rep.sections["nuclei"] = {
        "left": _subloop(nuc.left),
        "middle": _subloop(nuc.middle),
        "right": _subloop(nuc.right),
        "nucleus": _subloop(nuc.nucleus),
    }
    rep.sections["center"] = _subloop(C.center(Q))
    rep.sections["multiplication_group_order"] = multiplication_group(Q).order
    rep.sections["inner_mapping_group_order"] = inner_mapping_group(Q).order
    sr = S.series_report(Q, "mu" if props["moufang"] else "alpha_beta")
    rep.sections["series"] = sr.to_dict()
    rep.sections["class"] = sr.nilpotency_class
    rep.add(battery.lemma_battery(Q, args.budget))
    if Q.order <= C.NORMAL_ENUM_CAP:
        rep.add(battery.structural_battery(Q))
    return _emit(args, rep)


def cmd_series(args) -> int:
    Q = load_loop(args.file)
    kind = _kind(args.kind)
    if kind in ("alpha", "beta"):
        kind = "alpha_beta"
    sr = S.series_report(Q, kind)
    rep = Report(f"central series of {Q.name}")
    rep.sections.update(sr.to_dict())
    if args.cross_validate:
        c = S.nilpotency_class(Q, cross_validate=True, budget=args.budget)
        rep.add(record("class.cross-validated", "lower series, upper series and word vanishing give the same class", c == sr.nilpotency_class))
        rep.add(S.weight_subloop_checks(Q, kind, args.budget))
    return _emit(args, rep)


def cmd_verify(args) -> int:
    Q = load_loop(args.file)
    kind = None if args.kind is None else _kind(args.kind)
    rep = S.verify_structure(Q, args.budget, kind if kind in S.SERIES_KINDS else None)
    rep.title = f"verification of {Q.name}"
    rep.add(battery.lemma_battery(Q, args.budget))
    rep.add(S.weight_subloop_checks(Q, "alpha_beta", args.budget))
    if P.is_moufang(Q):
        rep.add(S.weight_subloop_checks(Q, "mu", args.budget))
    if Q.order <= C.NORMAL_ENUM_CAP:
        rep.add(battery.structural_battery(Q))
    return _emit(args, rep)


def cmd_basis(args) -> int:
    kind = _kind(args.kind, "mu")
    words = basis_for_class(kind, args.cls)
    lines = [print_term(w, args.macros) + " = 1" for w in words]
    if args.format == "json":
        doc = {"kind": kind, "class": args.cls, "seed": args.seed, "identities": lines,
               "variables": [len(w.vars()) for w in words]}
        print(json.dumps(doc, indent=2))
    else:
        print(f"# identities for class <= {args.cls}, kind {kind}, {len(words)} words")
        print("\n".join(lines))
    return 0


def cmd_check(args) -> int:
    Q = load_loop(args.file)
    t = parse_term(args.term)
    v = holds_identity(Q, t, args.budget, args.seed)
    doc = {
        "loop": Q.name,
        "term": print_term(t, True),
        "status": v.status,
        "cases": v.cases,
        "total": v.total,
        "exhaustive": v.exhaustive,
        "witness": None if v.witness is None else {f"x{k}": Q.label(a) for k, a in sorted(v.witness.items())},
        "value": None if v.value is None else Q.label(v.value),
        "seed": args.seed,
    }
    if args.format == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(f"{Q.name}: {doc['term']} = 1")
        print(f"verdict: {v.describe()}")
        if v.witness is not None:
            print("witness: " + ", ".join(f"{k}={a}" for k, a in doc["witness"].items()) + f" (value {doc['value']})")
        print(f"seed: {args.seed}")
    return 1 if v.status == "fails" else 0


def cmd_decompose(args) -> int:
    w = parse_term(args.term)
    d = decompose_5_2(w, args.t)
    doc = {
        "word": print_term(w, True),
        "t": d.t,
        "u": print_term(d.u, True),
        "v": [print_term(x, True) for x in d.v],
        "seed": args.seed,
        "checks": [],
    }
    rep = Report(f"decomposition of {doc['word']}")
    for source in args.loop or ():
        Q = load_loop(source)
        doc["checks"].append(_check_decomposition(Q, d, args.budget))
    failed = any(not c["reconstruction"] or not c["u_killed"] for c in doc["checks"])
    if args.format == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(rep.title)
        print(f"u = {doc['u']}")
        for i, x in enumerate(doc["v"]):
            print(f"v{i} = {x}")
        for c in doc["checks"]:
            print(f"{c['loop']}: reconstruction {'ok' if c['reconstruction'] else 'FAILS'}, "
                  f"delta_i(u) = 1 {'ok' if c['u_killed'] else 'FAILS'}")
        print(f"seed: {args.seed}")
    return 1 if failed else 0


def _check_decomposition(Q: CayleyLoop, d, budget: int | None) -> dict:
    recon = values_equal(Q, d.word, d.reconstruction(), budget, _full_domains(Q, d.t)) is None
    killed = all(values_equal(Q, delta(i, d.u), One, budget, _full_domains(Q, d.t)) is None for i in range(d.t + 1))
    return {"loop": Q.name, "reconstruction": recon, "u_killed": killed}


def _full_domains(Q: CayleyLoop, t: int) -> dict:
    return {i: range(Q.order) for i in range(t + 1)}


def cmd_catalog(args) -> int:
    cat = builtin_catalog()
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        for name, Q in cat.items():
            (out / f"{slug(name)}.tbl").write_text(serialize_table(Q), encoding="utf-8")
    rows = [{"name": n, "file": f"{slug(n)}.tbl", "order": Q.order} for n, Q in cat.items()]
    if args.format == "json":
        print(json.dumps({"loops": rows, "emitted_to": args.emit, "seed": args.seed}, indent=2))
    else:
        for r in rows:
            print(f"{r['name']:<12} order {r['order']:<3} {r['file']}")
        if args.emit:
            print(f"wrote {len(rows)} tables to {args.emit}")
    return 0


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget", type=int, default=None, help="evaluation budget (default LOOPFORGE_BUDGET or 10^7)")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="loopforge", description="Finite loop calculus and verification.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="classification report")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("series", parents=[common], help="upper and lower central series")
    s.add_argument("file")
    s.add_argument("--kind", choices=KIND_CHOICES)
    s.add_argument("--cross-validate", action="store_true")
    s.set_defaults(func=cmd_series)

    v = sub.add_parser("verify", parents=[common], help="run every structure and lemma check")
    v.add_argument("file")
    v.add_argument("--kind", choices=KIND_CHOICES)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("basis", parents=[common], help="identities for central nilpotency of a given class")
    b.add_argument("--kind", choices=KIND_CHOICES, default="mu")
    b.add_argument("--class", dest="cls", type=int, required=True)
    b.add_argument("--macros", action="store_true", help="print macro forms instead of expanded trees")
    b.set_defaults(func=cmd_basis)

    c = sub.add_parser("check", parents=[common], help="check an identity t = 1 on a loop")
    c.add_argument("file")
    c.add_argument("--term", required=True)
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("decompose", parents=[common], help="peel a word into u and correction factors")
    d.add_argument("--term", required=True)
    d.add_argument("--t", type=int, required=True)
    d.add_argument("--loop", action="append", help="verify on this table file or built-in loop (repeatable)")
    d.set_defaults(func=cmd_decompose)

    k = sub.add_parser("catalog", parents=[common], help="list or write the built-in fixtures")
    k.add_argument("--emit", metavar="DIR")
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", None) is None:
        args.budget = default_budget()
    if getattr(args, "cls", 1) < 1:
        parser.error("--class must be at least 1")
    try:
        return args.func(args)
    except InternalError as exc:
        print(f"loopforge: internal check failed: {exc}", file=sys.stderr)
        return 1
    except (LoopError, ValueError, OSError) as exc:
        print(f"loopforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
