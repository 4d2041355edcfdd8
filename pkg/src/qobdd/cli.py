"""Command-line front end.

    qobdd goodset  --m 16 --epsilon 0.25 --seed 0
    qobdd build    --fn eq --n 4 --epsilon 0.25 > eq4.json
    qobdd sweep    eq4.json --format csv
    qobdd verify   --fn palindrome --n 8 --epsilon 0.25
    qobdd verify   --fn mod:2 --fn mod:3 --n 6 --epsilon 0.09 --general
    qobdd bounds   --fn eq --n 4 --epsilon 0.25 --check
    qobdd project  poly.json proj.json

Reports go to stdout as JSON (CSV for ``sweep --format csv``), diagnostics to
stderr.  Big integers are decimal strings.  Every command is deterministic for
a given ``--seed``; ``verify`` and ``bounds --check`` exit 1 when a check fails.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from typing import Sequence

from . import bounds, fingerprint as fp, good_sets as gs, pipeline, projections, zoo
from .errors import CapExceededError, GoodSetSearchError, InputError
from .qbp import classify_error, measures, program_from_json, program_to_json
from .zmod_poly import Characteristic, linear_from_json, linear_to_json

log = logging.getLogger("qobdd")


def _parse_order(text: str | None) -> tuple[int, ...] | None:
    if not text:
        return None
    return tuple(int(v) for v in text.split(","))


def _entries(fns: Sequence[str], n: int, m: int | None) -> list[zoo.ZooEntry]:
    out = []
    for fn in fns:
        name, _, mod = fn.partition(":")
        out.append(zoo.make(name, n, int(mod) if mod else m))
    return out


def _canonical_fns(entries: Sequence[zoo.ZooEntry], fns: Sequence[str], m: int | None) -> list[str]:
    names = []
    for fn, e in zip(fns, entries):
        name = fn.partition(":")[0]
        names.append(f"{name}:{e.m}" if name in ("mod", "modw") else name)
    return names


def _function_from(args, envelope: dict | None = None):
    """(entries, descriptor) from --fn/--n, falling back to a build envelope."""
    if args.fn:
        if args.n is None:
            raise InputError("--fn needs --n")
        entries = _entries(args.fn, args.n, args.m)
        return entries, {"fn": _canonical_fns(entries, args.fn, args.m), "n": args.n}
    if envelope and "function" in envelope:
        desc = envelope["function"]
        return _entries(desc["fn"], desc["n"], None), desc
    raise InputError("no truth oracle: pass --fn/--n or a build output that records its function")


def _characteristic(entries: Sequence[zoo.ZooEntry]) -> Characteristic:
    return entries[0].characteristic() if len(entries) == 1 else zoo.zoo_conjunction(entries)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _plan(args, entries) -> fp.FingerprintSpec:
    general = args.general or len(entries) > 1
    return fp.plan(
        _characteristic(entries),
        args.epsilon,
        seed=args.seed,
        general=general,
        order=_parse_order(args.order),
        max_attempts=args.attempts,
    )


def cmd_goodset(args) -> int:
    if args.mode == "exhaustive":
        K = gs.exhaustive_smallest_good_set(args.m, args.epsilon, args.t_max)
        if K is None:
            log.error("no good set of size <= %d for m=%d", args.t_max, args.m)
            return 1
    else:
        residues = [int(r) for r in args.residues.split(",")] if args.residues else None
        K = gs.sample_good_set(args.m, args.epsilon, seed=args.seed, max_attempts=args.attempts, residues=residues)
    out = gs.goodset_to_json(K)
    out["max_squared_average"] = gs.max_squared_average(K, K.image if K.scope is gs.Scope.IMAGE else None)
    _emit(out)
    return 0


def cmd_build(args) -> int:
    if args.poly:
        obj = _load(args.poly)
        polys = obj if isinstance(obj, list) else obj.get("polys", [obj])
        polys = tuple(linear_from_json(p) for p in polys)
        chi = Characteristic(polys[0].m, polys)
        general = args.general or len(polys) > 1
        spec = fp.plan(chi, args.epsilon, seed=args.seed, general=general, order=_parse_order(args.order), max_attempts=args.attempts)
        function = None
    else:
        entries, function = _function_from(args)
        chi = _characteristic(entries)
        spec = _plan(args, entries)
    Q = fp.build(spec)
    out = {
        "spec": fp.spec_to_json(spec),
        "program": program_to_json(Q, dense=args.dense),
        "measures": {**measures(Q), **fp.width_qubits_report(spec)},
    }
    if function:
        out["function"] = function
    if spec.chi.m != chi.m:
        out["lifted_from"] = str(chi.m)
    _emit(out)
    return 0


def cmd_sweep(args) -> int:
    envelope = _load(args.program)
    Q = program_from_json(envelope["program"] if "program" in envelope else envelope)
    spec = fp.spec_from_json(envelope["spec"]) if "spec" in envelope else None
    entries, _ = _function_from(args, envelope)
    f = entries[0].oracle if len(entries) == 1 else zoo.conjunction_oracle(entries)

    if spec is None:
        report = classify_error(Q, f, args.cap)
        if args.format == "csv":
            w = csv.writer(sys.stdout)
            w.writerow(["input", "f", "simulated"])
            for key, p in report.probabilities.items():
                w.writerow([key, int(report.truth[key]), repr(p)])
        else:
            _emit(report.to_json())
        return 0

    rows, worst = pipeline.sweep_rows(spec, Q, f, args.cap)
    if args.format == "csv":
        w = csv.writer(sys.stdout)
        w.writerow(["input", "f"] + [f"g{r + 1}" for r in range(spec.l)] + ["closed_form", "simulated", "delta"])
        for r in rows:
            w.writerow([r.sigma, int(r.f), *(str(g) for g in r.g), repr(r.closed_form), repr(r.simulated), repr(r.delta)])
        return 0
    report = classify_error(Q, f, args.cap)
    out = report.to_json()
    out["closed_form"] = {r.sigma: r.closed_form for r in rows}
    out["max_closed_form_delta"] = max(r.delta for r in rows)
    _emit(out)
    return 0


def cmd_verify(args) -> int:
    entries, function = _function_from(args)
    spec = _plan(args, entries)
    Q = fp.build(spec)
    f = entries[0].oracle if len(entries) == 1 else zoo.conjunction_oracle(entries)
    result = pipeline.verify(spec, Q, f, args.cap)
    result["function"] = function
    result["epsilon"] = args.epsilon
    result["general"] = spec.general
    if not args.probabilities:
        result.pop("probabilities")
    _emit(result)
    return 0 if result["passed"] else 1


def cmd_bounds(args) -> int:
    entries, function = _function_from(args)
    f = entries[0].oracle if len(entries) == 1 else zoo.conjunction_oracle(entries)
    n = entries[0].n
    order = _parse_order(args.order)
    report = bounds.bound_report(f, n, order, args.margin, search_orders=args.search_orders)
    report["function"] = function
    ok = True
    if args.check:
        spec = _plan(args, entries)
        Q = fp.build(spec)
        sim = classify_error(Q, f, args.cap)
        report["program_width"] = sim.width
        report["measured_margin"] = sim.margin
        if sim.margin is None:
            report["width_bound_respected"] = None
            ok = False
        else:
            ok = bounds.respects_width_bound(Q, f, order, sim.margin)
            report["measured_width_lower_bound"] = bounds.qobdd_width_lower_bound(report["det_width"], sim.margin)
            report["width_bound_respected"] = ok
    _emit(report)
    return 0 if ok else 1


def cmd_project(args) -> int:
    g = linear_from_json(_load(args.poly))
    pi = projections.projection_from_json(_load(args.projection))
    h = projections.apply_to_poly(g, pi)
    _emit({
        "poly": linear_to_json(h),
        "read_once": projections.is_read_once_projection(pi),
        "multiplicities": {str(i): projections.multiplicity(pi, i) for i in range(1, pi.n + 1)},
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qobdd", description="Fingerprinting quantum OBDD toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fn(p, required=False):
        p.add_argument("--fn", action="append", required=required,
                       help="function name (mod, modw, eq, palindrome, perm); name:m for a modulus; repeat to conjoin")
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int, help="modulus for mod/modw")

    def add_build_opts(p):
        p.add_argument("--epsilon", type=float, default=0.25)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--order", help="variable order as a comma list, e.g. 3,1,2")
        p.add_argument("--general", action="store_true", help="use the characteristic-set construction")
        p.add_argument("--attempts", type=int, default=64, help="sampling attempts per modulus")

    def add_cap(p):
        p.add_argument("--cap", type=int, default=None, help="enumeration cap on the number of variables")

    p = sub.add_parser("goodset", help="sample or exhaustively find a good parameter set")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("sample", "exhaustive"), default="sample")
    p.add_argument("--residues", help="comma list of residues to verify over (large m)")
    p.add_argument("--attempts", type=int, default=64)
    p.add_argument("--t-max", type=int, default=gs.EXHAUSTIVE_T_CAP)
    p.set_defaults(func=cmd_goodset)

    p = sub.add_parser("build", help="build a fingerprint program")
    add_fn(p)
    p.add_argument("--poly", help="linear polynomial JSON (or a list / {'polys': [...]})")
    p.add_argument("--dense", action="store_true", help="emit every operator as a dense matrix")
    add_build_opts(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sweep", help="simulate a program on every input")
    p.add_argument("program", help="program JSON or build output ('-' for stdin)")
    add_fn(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    add_cap(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="build and check a zoo function end to end")
    add_fn(p, required=True)
    add_build_opts(p)
    add_cap(p)
    p.add_argument("--probabilities", action="store_true", help="include per-input probabilities")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="width lower bound from deterministic OBDD width")
    add_fn(p, required=True)
    add_build_opts(p)
    add_cap(p)
    p.add_argument("--margin", type=float, default=0.25, help="bounded-error margin for the bound")
    p.add_argument("--search-orders", action="store_true", help="also minimize over all orders (n <= 8)")
    p.add_argument("--check", action="store_true", help="build a program and check its width against the bound")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("project", help="apply a projection to a linear polynomial")
    p.add_argument("poly")
    p.add_argument("projection")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, CapExceededError, GoodSetSearchError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
