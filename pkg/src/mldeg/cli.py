"""Command line interface.

Exit codes: 0 success, 1 usage or input error, 2 verification mismatch,
3 instance beyond capacity.
"""
from __future__ import annotations

import argparse
import json
import sys

from .arrangement import CapacityError, arrangement_from_scaling, bounded_regions
from .dataio import emit_report, parse_matroid_db, special_beta_tally, MatroidParseError
from .experiments import EXPERIMENTS, run_experiment
from .models import degree, ml_degree_combinatorial, ml_degree_upper_bound, signature
from .render import arrangement_svg, hasse_dot
from .scalingio import dump_scaling, load_scaling, load_scalings
from .search import STRATEGIES, SearchSpec, find_scaling
from .solver import InconsistentCount, ml_degree_numeric
from .stratify import stratify

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_CAPACITY = 0, 1, 2, 3


def _emit(args, payload: dict, text: str):
    print(json.dumps(payload, indent=2, sort_keys=True) if args.json else text)


def _write(path, content):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(content)


def cmd_model(args) -> int:
    kind = args.command
    w = load_scaling(args.scaling, kind)
    sig = signature(w)
    out = {"family": w.family.describe(), "degree": degree(w.family),
           "signature": sig.pattern_string(), "vanished": sig.num_vanished, "results": {}}
    method = args.method
    if kind != "segre" and method in ("beta", "regions"):
        print(f"method {method!r} applies to Segre scalings only", file=sys.stderr)
        return EXIT_INPUT
    res = out["results"]
    if kind == "segre":
        if method in ("auto", "beta"):
            res["beta"] = ml_degree_combinatorial(w)
        if method == "regions" or (method == "auto" and w.is_real):
            try:
                res["regions"] = bounded_regions(arrangement_from_scaling(w.matrix()))
            except CapacityError:
                if method == "regions":
                    raise
        if method == "solve":
            res["solve"] = ml_degree_numeric(w.family, w, trials=args.trials, seed=args.seed)
    else:
        res["solve"] = ml_degree_numeric(w.family, w, trials=args.trials, seed=args.seed)
        if kind == "hypersimplex":
            out["upper_bound"] = ml_degree_upper_bound(w)
    values = set(res.values())
    out["ml_degree"] = next(iter(values)) if len(values) == 1 else None
    problems = []
    if len(values) > 1:
        problems.append(f"methods disagree: {res}")
    ml = out["ml_degree"]
    if ml is not None:
        if ml > out["degree"]:
            problems.append("ML degree exceeds the degree")
        if sig.num_vanished == 0 and ml != out["degree"]:
            problems.append("no factor vanishes but the ML degree dropped")
        if sig.num_vanished and ml == out["degree"]:
            problems.append("a factor vanishes but the ML degree did not drop")
        if "upper_bound" in out and ml > out["upper_bound"]:
            problems.append("ML degree exceeds the vanishing-minor bound")
    out["problems"] = problems
    if args.emit_svg:
        if kind == "segre" and w.family.params[0] == 3 and w.is_real:
            _write(args.emit_svg, arrangement_svg(w.matrix()))
        else:
            print("--emit-svg draws 3-row real Segre scalings only; skipped", file=sys.stderr)
    text = [f"{out['family']}: degree {out['degree']}, signature {out['signature']}"]
    text += [f"  {k}: {v}" for k, v in res.items()]
    if "upper_bound" in out:
        text.append(f"  upper bound: {out['upper_bound']}")
    text += [f"  MISMATCH: {p}" for p in problems]
    _emit(args, out, "\n".join(text))
    return EXIT_MISMATCH if problems else EXIT_OK


def cmd_search(args) -> int:
    if args.family != "segre":
        print("search covers Segre families", file=sys.stderr)
        return EXIT_INPUT
    spec = SearchSpec(args.m, args.n, args.target, args.budget, args.seed, args.strategy,
                      args.workers)
    try:
        r = find_scaling(spec)
    except AssertionError as exc:
        print(f"verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    payload = {"found": r.found, "candidates_tried": r.candidates_tried,
               "verified_by": list(r.verified_by),
               "scaling": dump_scaling(r.scaling) if r.found else None}
    if r.found and args.emit_svg and args.m == 3:
        _write(args.emit_svg, arrangement_svg(r.scaling.matrix()))
    if r.found:
        rows = "\n".join("  " + " ".join(str(x) for x in row) for row in dump_scaling(r.scaling))
        text = (f"ML degree {args.target} after {r.candidates_tried} candidate(s), "
                f"verified by {', '.join(r.verified_by)}:\n{rows}")
    else:
        text = f"not found within {r.candidates_tried} candidates"
    _emit(args, payload, text)
    return EXIT_OK if r.found else EXIT_INPUT


def cmd_tally(args) -> int:
    recs = parse_matroid_db(args.db, args.n, args.rank)
    rep = special_beta_tally(recs, limit=args.limit, special_only=args.special_only)
    print(emit_report(rep, "json" if args.json else args.format), end="")
    return EXIT_OK


def cmd_stratify(args) -> int:
    items = load_scalings(args.scalings, args.family)
    rep = stratify(args.family, items, trials=args.trials, seed=args.seed)
    if args.emit_dot and "hasse" in rep.extra:
        labels = [f"class {i}: ML degree {d}" for i, d in enumerate(rep.extra["class_ml_degree"])]
        _write(args.emit_dot, hasse_dot(labels, rep.extra["hasse"]))
    print(emit_report(rep, "json" if args.json else args.format), end="")
    return EXIT_OK


def cmd_experiment(args) -> int:
    params = {}
    if args.name in ("signature_determines_mldeg", "slice_conjecture") and args.n is not None:
        params["n"] = args.n
    if args.name == "hypersimplex_min" and args.d is not None:
        params["d"] = args.d
    if args.name == "slice_conjecture" and args.d is not None:
        params["ds"] = [args.d]
    if args.name != "weak_order_monotone":
        params["seed"] = args.seed
        params["trials"] = args.trials
        if args.samples is not None and args.name != "slice_conjecture":
            params["samples"] = args.samples
    rep = run_experiment(args.name, **params)
    if args.emit_dot and args.name == "weak_order_monotone":
        labels = [f"beta {b}" for b in rep["betas"]]
        idx = {c: t for t, c in enumerate(rep["representatives"])}
        _write(args.emit_dot, hasse_dot(labels, [(idx[a], idx[b]) for a, b in rep["edges"]]))
    text = f"{args.name}: {rep['checked']} checked, {len(rep['violations'])} violation(s)"
    _emit(args, rep, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mldeg", description="ML degrees of scaled toric models")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=2, help="random data vectors for the solver")

    for kind in ("segre", "triple", "hypersimplex"):
        sp = sub.add_parser(kind, help=f"ML degree of one {kind} scaling")
        sp.add_argument("--scaling", required=True)
        sp.add_argument("--method", choices=("auto", "beta", "regions", "solve"), default="auto")
        sp.add_argument("--emit-svg", dest="emit_svg")
        common(sp)
        sp.set_defaults(func=cmd_model)

    sp = sub.add_parser("search", help="find a Segre scaling with a given ML degree")
    sp.add_argument("--family", default="segre")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--target", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10_000)
    sp.add_argument("--strategy", choices=STRATEGIES, default="randomized_arrangement")
    sp.add_argument("--workers", type=int, default=1, help="processes evaluating candidates")
    sp.add_argument("--emit-svg", dest="emit_svg")
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("matroid-tally", help="beta tallies over a matroid database file")
    sp.add_argument("--db", required=True)
    sp.add_argument("--n", type=int, required=True, help="ground set size")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--special-only", action="store_true")
    sp.add_argument("--limit", type=int)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="text")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_tally)

    sp = sub.add_parser("stratify", help="signatures and ML degrees for a file of scalings")
    sp.add_argument("--family", choices=("segre", "triple", "hypersimplex"), required=True)
    sp.add_argument("--scalings", required=True)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="text")
    sp.add_argument("--emit-dot", dest="emit_dot")
    common(sp)
    sp.set_defaults(func=cmd_stratify)

    sp = sub.add_parser("experiment", help="randomised probes of open statements")
    sp.add_argument("name", choices=EXPERIMENTS)
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--emit-dot", dest="emit_dot")
    common(sp)
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InconsistentCount as exc:
        print(f"verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (MatroidParseError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
