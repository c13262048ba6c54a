"""Command-line front end: ``generate``, ``solve``, ``verify`` and ``stats``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .fileformats import FormatError, append_stats, read_graph, read_rules, read_stats, write_rules
from .genloop import GenerationFailed, generate_rule_list
from .graphs import DEFAULT_GEN_CAP, MAX_N
from .dpvc import Instance
from .oracle import verify_exhaustive, verify_rule_correctness
from .solver import ExhaustivenessViolation, Solver

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_VERIFY = 4


class InvalidInput(Exception):
    pass


def cmd_generate(args) -> int:
    if args.d < 2:
        raise InvalidInput("--d must be at least 2")
    if not args.beta >= 1.0:
        raise InvalidInput("--beta must be at least 1")
    if not args.d <= args.max_pattern <= MAX_N:
        raise InvalidInput(f"--max-pattern must lie in [d, {MAX_N}]")
    out = Path(args.out)
    if not out.parent.exists():
        raise InvalidInput(f"output directory {out.parent} does not exist")
    try:
        rules, stats = generate_rule_list(args.d, args.beta, args.max_pattern, args.time_limit)
    except GenerationFailed as exc:
        print(f"generation failed: {exc.reason}", file=sys.stderr)
        print(f"current psi: {exc.psi}", file=sys.stderr)
        for g in exc.bad:
            print(f"bad n={g.n} edges={' '.join(f'{u}-{v}' for u, v in g.edges())}", file=sys.stderr)
        return EXIT_CAP
    try:
        write_rules(out, rules)
        row = append_stats(args.stats, stats, len(rules))
    except OSError as exc:
        raise InvalidInput(f"cannot write output: {exc}") from None
    print(f"wrote {len(rules)} rules (psi={rules.psi}) to {out}")
    print(f"stats: {row}")
    return EXIT_OK


def cmd_solve(args) -> int:
    rules = read_rules(args.rules)
    if args.d is not None and args.d != rules.d:
        raise InvalidInput(f"rule file is for d={rules.d}, not d={args.d}")
    if not rules.rules:
        raise InvalidInput("rule file holds no rules")
    graph = read_graph(args.graph)
    try:
        result = Solver(rules).solve(Instance(graph, args.k), want_certificate=args.certificate)
    except ExhaustivenessViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if result.answer and args.certificate:
        print("YES " + " ".join(str(v) for v in sorted(result.certificate)))
    else:
        print(result)
    return EXIT_OK


def cmd_verify(args) -> int:
    rules = read_rules(args.rules)
    if not rules.rules:
        raise InvalidInput("rule file holds no rules")
    failed = False
    for i, rule in enumerate(rules.rules):
        seed = args.seed + i
        report = verify_rule_correctness(rule, rules.d, args.trials, seed, tag=str(i))
        print(report.to_text())
        failed |= not report.ok
    report = verify_exhaustive(rules, rules.d)
    print(report.to_text())
    failed |= not report.ok
    print("verification FAILED" if failed else "verification passed")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_stats(args) -> int:
    path = Path(args.stats)
    if not path.exists():
        raise InvalidInput(f"{path} does not exist")
    with path.open() as fh:
        rows = read_stats(fh)
    print(f"{'d':>3} {'beta':>10} {'rules':>8} {'seconds':>10}")
    for row in rows:
        print(f"{row['d']:>3} {row['beta']:>10} {row['rules']:>8} {row['seconds']:>10}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpvcgen", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate an exhaustive rule list")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-pattern", type=int, default=DEFAULT_GEN_CAP)
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.add_argument("--stats", default="stats.csv")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="decide a d-PVC instance with a rule list")
    p.add_argument("--rules", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, default=None, help="refuse rule files built for another d")
    p.add_argument("--certificate", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check rule correctness and list exhaustiveness")
    p.add_argument("--rules", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="print the accumulated run statistics")
    p.add_argument("--stats", default="stats.csv")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InvalidInput, FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
