"""``opforge`` command line: experiments, object checks and one-shot computations.

Exit codes: 0 pass, 1 a theorem check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness as hz

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser():
    p = argparse.ArgumentParser(prog="opforge", description="Exact operad and homotopy computations.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("experiment", help="run a seeded experiment suite")
    e.add_argument("name", help=", ".join(sorted(hz.EXPERIMENTS)))
    e.add_argument("--seed", type=int, default=42)
    e.add_argument("--trials", type=int)
    e.add_argument("--nmax", type=int, help="arity bound (s_max for dold-kan-roundtrip)")
    e.add_argument("--tmax", type=int, help="weight bound for algebras, s_max for Dold-Kan")
    e.add_argument("--field", help="q or p:<prime>")
    e.add_argument("--out", help="report path (default reports/<name>.json); a .csv summary goes next to it")

    c = sub.add_parser("check", help="validate a JSON complex, simplicial object, operad or algebra")
    c.add_argument("file")

    comp = sub.add_parser("compute", help="direct computations")
    csub = comp.add_subparsers(dest="what", required=True)
    h = csub.add_parser("homology")
    h.add_argument("source", help="JSON file, 'pentagon' or 'associahedron:<n>'")
    fo = csub.add_parser("free-operad")
    fo.add_argument("--generators", default="2:0", help="comma-separated arity:degree, one per generator")
    fo.add_argument("--nmax", type=int, default=5)
    fo.add_argument("--size", type=int, help="vertex bound, needed for arity 0 or 1 generators")
    fo.add_argument("--field", default="q")
    po = csub.add_parser("pushout")
    po.add_argument("spec", nargs="?", help="JSON pushout spec file")
    po.add_argument("--preset", choices=sorted(hz.PUSHOUT_PRESETS))
    po.add_argument("--nmax", type=int, help="override the spec's arity bound")
    po.add_argument("--out", help="write the ledger CSV here instead of stdout")
    cp = csub.add_parser("compose-product")
    cp.add_argument("--left", default="ass")
    cp.add_argument("--right", default="ass")
    cp.add_argument("--nmax", type=int, default=5)
    cp.add_argument("--field", default="q")
    return p


def _print(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _experiment(args):
    cfg = hz.ExperimentConfig(args.name, args.seed, args.trials, args.nmax, args.tmax, args.field, args.out)
    report = hz.run_experiment(cfg)
    path = hz.write_report(report, args.out)
    for t in report["trials"]:
        label = t.get("seed", t.get("case"))
        print(f"{label}\t{'pass' if t['pass'] else 'FAIL'}")
    print(f"{report['experiment']}: {report['passed']}/{report['total']} pass "
          f"in {report['timing']['seconds']}s -> {path}")
    return EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL


def _check(args):
    rep = hz.check_object(args.file)
    _print(rep)
    return EXIT_PASS if rep["verdict"] == "pass" else EXIT_FAIL


def _compute(args):
    if args.what == "homology":
        _print(hz.compute_homology(args.source))
        return EXIT_PASS
    if args.what == "free-operad":
        if args.nmax <= 0:
            raise hz.UsageError("--nmax must be positive")
        _print(hz.compute_free_operad(args.generators, args.nmax, args.field, args.size))
        return EXIT_PASS
    if args.what == "compose-product":
        if args.nmax <= 0:
            raise hz.UsageError("--nmax must be positive")
        _print(hz.compute_compose_product(args.left, args.right, args.nmax, args.field))
        return EXIT_PASS
    if bool(args.spec) == bool(args.preset):
        raise hz.UsageError("pushout needs exactly one of a spec file or --preset")
    if args.preset:
        spec = dict(hz.PUSHOUT_PRESETS[args.preset])
    else:
        try:
            spec = json.loads(Path(args.spec).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise hz.UsageError(f"cannot read {args.spec}: {e}")
    if args.nmax is not None:
        spec["arity_bound"] = args.nmax
    text, ok = hz.emit_ledger(spec)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if not ok:
        print("ledger identity FAILS", file=sys.stderr)
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    try:
        if args.command == "experiment":
            return _experiment(args)
        if args.command == "check":
            return _check(args)
        return _compute(args)
    except hz.UsageError as e:
        print(f"opforge: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
