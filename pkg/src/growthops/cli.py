"""Command-line front end.

    growthops analyze --config FILE|BUILTIN --out DIR [--n0 K] [--max-m M] [--dirs D] [--seed S]
    growthops verify --suite identities|examples|all [--out DIR]
    growthops scenarios --list | --run ID

Exit codes: 0 success (whatever the verdicts), 1 failed verification,
2 bad config or unknown name, 3 resource cap exceeded.
"""

import argparse
import dataclasses
import json
import os
import sys

from .errors import ConfigError, HypothesisMismatch, ResourceCapError

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_CAP = 3


def _load_config(arg):
    from . import specfile

    if arg in specfile.BUILTINS:
        return specfile.BUILTINS[arg]
    if not os.path.exists(arg):
        raise ConfigError(f"no config file or built-in named {arg!r} (built-ins: {', '.join(specfile.BUILTINS)})")
    return specfile.load(arg)


def _apply_overrides(cfg, args):
    from . import specfile

    kw = {}
    if args.n0 is not None:
        kw["n0"] = args.n0
    if args.max_m is not None:
        if not 6 <= args.max_m <= specfile.MAX_M_CAP:
            raise ConfigError(f"--max-m must lie in [6, {specfile.MAX_M_CAP}]")
        kw["max_m"] = args.max_m
    if args.dirs is not None:
        if not 1 <= args.dirs <= specfile.DIRS_CAP:
            raise ConfigError(f"--dirs must lie in [1, {specfile.DIRS_CAP}]")
        kw["dirs"] = args.dirs
    if args.seed is not None:
        kw["seed"] = args.seed
    return dataclasses.replace(cfg, **kw) if kw else cfg


def run_analysis(cfg):
    """Run the configured criteria; returns (reports, notes)."""
    from . import criteria
    from .quantities import SymbolPair
    from .sampling import BallGrid
    from .specfile import build_map, build_symbol, build_weight

    nu, mu = build_weight(cfg.nu), build_weight(cfg.mu)
    pair = SymbolPair(build_symbol(cfg.psi), build_map(cfg.phi), cfg.p)
    grid = BallGrid(pair.N, dirs=cfg.dirs, seed=cfg.seed, max_m=cfg.max_m)
    n, m = cfg.n, cfg.m
    reports, notes = [], []
    for th in cfg.theorems:
        try:
            if th == "A1":
                rep = criteria.boundedness_A1(pair, nu, mu, n, m, grid)
            elif th == "A2":
                rep = criteria.boundedness_A2(pair, nu, mu, n, m, grid)
            elif th == "C1":
                rep = criteria.compactness_C1(pair, nu, mu, n, m, cfg.n0, grid)
            else:
                rep = criteria.compactness_C2(pair, nu, mu, n, m, cfg.n0, grid, restrict=cfg.restrict)
        except HypothesisMismatch as exc:
            notes.append(f"[{th}] not applicable: {exc}")
            continue
        rep.seed = cfg.seed
        reports.append(rep)
    return reports, notes


def cmd_analyze(args):
    from . import report, specfile
    from .criteria import threshold_text

    try:
        cfg = _apply_overrides(_load_config(args.config), args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        reports, notes = run_analysis(cfg)
    except ResourceCapError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    header = [
        f"# growthops analyze: {cfg.name}",
        f"# seed={cfg.seed} dirs={cfg.dirs} max_m={cfg.max_m} n={cfg.n} m={cfg.m} p={cfg.p}"
        + (f" n0={cfg.n0}" if cfg.n0 is not None else ""),
        f"# {threshold_text()}",
    ] + [f"# {x}" for x in notes]
    report.write_report(args.out, reports, header, plots=not args.no_plots)
    report.atomic_write(os.path.join(args.out, "config.toml"), specfile.dumps(cfg))
    text = report.summary_text(reports, header)
    sys.stdout.write(text)
    return EXIT_OK


def _inject(name):
    """Fault injection used to test the verification harness."""
    from . import multiindex

    if name == "multinomial":
        good = multiindex.multinomial

        def corrupted(n, k):
            v = good(n, k)
            return v + 1 if n >= 3 and len(k) >= 2 else v

        multiindex.multinomial = corrupted
    else:
        raise ConfigError(f"unknown fault {name!r}")


def cmd_verify(args):
    from . import report, verify

    if args.inject:
        try:
            _inject(args.inject)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        results = verify.run_suite(args.suite)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    os.makedirs(args.out, exist_ok=True)
    rows = [(r.suite, r.name, r.cases, repr(float(r.max_error)), repr(float(r.tol)), "pass" if r.passed else "fail")
            for r in results]
    report.atomic_write(os.path.join(args.out, f"verify_{args.suite}.csv"),
                        report.rows_csv(("suite", "check", "cases", "max_error", "tol", "status"), rows))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.suite}/{r.name}: {r.cases} cases, "
              f"max error {r.max_error:.3g} (tol {r.tol:g}), {r.seconds:.1f}s")
    failed = [r for r in results if not r.passed]
    if failed:
        first = failed[0]
        cex = dict(first.counterexample, check=f"{first.suite}/{first.name}")
        text = json.dumps(cex, indent=2, sort_keys=True, default=repr)
        report.atomic_write(os.path.join(args.out, "counterexample.json"), text + "\n")
        print("first counterexample:\n" + text)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_scenarios(args):
    from . import paperlab

    if args.list:
        for sid, desc in paperlab.list_scenarios():
            print(f"{sid}\t{desc}")
        return EXIT_OK
    try:
        out = paperlab.run_scenario(args.run)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    print(out.summary())
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="growthops", description="Weighted composition operators between "
                                 "weighted-type growth spaces on the unit ball: numerical criteria and reports.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run boundedness/compactness criteria for a config")
    a.add_argument("--config", required=True, help="config file, or a built-in: contraction, identity-singular")
    a.add_argument("--out", required=True, help="output directory")
    a.add_argument("--n0", type=int)
    a.add_argument("--max-m", type=int, dest="max_m")
    a.add_argument("--dirs", type=int)
    a.add_argument("--seed", type=int)
    a.add_argument("--no-plots", action="store_true", help="skip SVG output")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run oracle-equivalence and example suites")
    v.add_argument("--suite", required=True, choices=["identities", "examples", "all"])
    v.add_argument("--out", default="verify-report")
    v.add_argument("--inject", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scenarios", help="list or run worked-example scenarios")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--run", metavar="ID")
    s.set_defaults(func=cmd_scenarios)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
