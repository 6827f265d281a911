"""Command-line front end: ``surreal-dt <command> ...``.

Exit status is 0 when every requested check passes, 1 when a check fails
and 2 on invalid input.  Flags fall back to ``SURREAL_DT_*`` environment
variables (``SURREAL_DT_DEPTH``, ``SURREAL_DT_TRUNCATE``, ``SURREAL_DT_GRID``,
``SURREAL_DT_MACHINE``, ``SURREAL_DT_REQUIRE_REGULARITY``).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence, TextIO

from surreal_dt.cases import (
    CaseFixture,
    builtin_cases,
    format_ordering,
    run_fixture,
)
from surreal_dt.decision import (
    DominanceVerdict,
    InvalidMixture,
    dominance_matrix,
    expected_utilities,
    pure_beats_mixtures,
    rank,
    simplex_grid,
)
from surreal_dt.literal import Calculator
from surreal_dt.probability import check_nap
from surreal_dt.problem_file import FileFormatError, VnmSpec, load
from surreal_dt.surreal import (
    DEFAULT_DEPTH_LIMIT,
    Classification,
    SurrealError,
    classify,
    depth_limit,
    standard_part,
)
from surreal_dt.vnm import (
    AxiomStatus,
    IncoherentPreference,
    IndifferencePointNotFound,
    NonUniqueIndifference,
    UnknownQuery,
    check_axioms,
    construct_utility,
    default_candidates,
    verify_linearity,
)

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _env_int(name: str, default: int | None) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS,
                        help=f"exponent nesting bound (default {DEFAULT_DEPTH_LIMIT})")
    common.add_argument("--truncate", type=int, metavar="TERMS", default=argparse.SUPPRESS,
                        help="allow inexact division in eval, cut off after TERMS terms")
    common.add_argument("--machine", action="store_true", default=argparse.SUPPRESS,
                        help="line-oriented key=value output")

    parser = argparse.ArgumentParser(
        prog="surreal-dt", parents=[common],
        description="Exact surreal arithmetic and transfinite decision analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a surreal expression")
    p.add_argument("expr")

    p = sub.add_parser("solve", parents=[common], help="expected utilities, ranking, dominance")
    p.add_argument("file")
    p.add_argument("--require-regularity", action="store_true", default=argparse.SUPPRESS,
                   help="fail unless every nonempty event has positive credence")

    p = sub.add_parser("mix", parents=[common], help="compare mixed strategies with the best pure one")
    p.add_argument("file")
    p.add_argument("--grid", type=int, default=argparse.SUPPRESS,
                   help="weights in multiples of 1/N (default: 32 for two actions)")

    p = sub.add_parser("vnm", parents=[common], help="preference axioms and utility construction")
    p.add_argument("action", choices=("check", "construct"))
    p.add_argument("file")

    p = sub.add_parser("cases", parents=[common], help="run the built-in worked examples")
    p.add_argument("filter", nargs="?", default="")

    p = sub.add_parser("check", parents=[common], help="verify a problem file's expected values")
    p.add_argument("file")
    return parser


def _settings(args: argparse.Namespace) -> argparse.Namespace:
    ns = vars(args)
    ns.setdefault("depth", _env_int("SURREAL_DT_DEPTH", DEFAULT_DEPTH_LIMIT))
    ns.setdefault("truncate", _env_int("SURREAL_DT_TRUNCATE", None))
    ns.setdefault("machine", _env_flag("SURREAL_DT_MACHINE"))
    ns.setdefault("grid", _env_int("SURREAL_DT_GRID", None))
    ns.setdefault("require_regularity", _env_flag("SURREAL_DT_REQUIRE_REGULARITY"))
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    if args.truncate is not None and args.truncate < 1:
        raise UsageError("--truncate must be at least 1")
    if args.grid is not None and args.grid < 1:
        raise UsageError("--grid must be at least 1")
    return args


# -- commands ---------------------------------------------------------------


def cmd_eval(args, out: TextIO) -> int:
    if args.truncate is not None:
        calc = Calculator(args.truncate, truncate=True)
    else:
        calc = Calculator()
    value = calc.evaluate(args.expr)
    cls = classify(value)
    if args.machine:
        print(f"value={value}", file=out)
        print(f"class={cls}", file=out)
        if cls in (Classification.FINITE_APPRECIABLE, Classification.INFINITESIMAL):
            print(f"standard_part={standard_part(value)}", file=out)
        print(f"exact={'true' if calc.exact else 'false'}", file=out)
        return EXIT_OK
    extra = ""
    if cls in (Classification.FINITE_APPRECIABLE, Classification.INFINITESIMAL):
        extra = f", standard part {standard_part(value)}"
    note = "" if calc.exact else f" [inexact: truncated to {args.truncate} terms]"
    print(f"{value} ({cls}{extra}){note}", file=out)
    return EXIT_OK


def _load_problem(path: str) -> CaseFixture:
    spec = load(path)
    if not isinstance(spec, CaseFixture):
        raise UsageError(f"{path} is a preference table, not a decision problem")
    return spec


def _load_vnm(path: str) -> VnmSpec:
    spec = load(path)
    if not isinstance(spec, VnmSpec):
        raise UsageError(f"{path} is a decision problem, not a preference table")
    return spec


def _dominance_phrase(a: str, b: str, r) -> str:
    if r.verdict is DominanceVerdict.STRICTLY_DOMINATES:
        s = f"{a} weakly dominates {b}, strictly better in {', '.join(r.better_states)}"
        note = r.note()
        return f"{s} ({note})" if note else s
    return f"{a} weakly dominates {b} (identical in every state)"


def cmd_solve(args, out: TextIO) -> int:
    fx = _load_problem(args.file)
    p = fx.problem
    nap = check_nap(p.credence, require_regularity=args.require_regularity)
    eus = expected_utilities(p)
    groups = rank(p)
    dom = {k: r for k, r in dominance_matrix(p).items() if r.verdict.weak}
    if args.machine:
        print(f"problem={fx.name}", file=out)
        for s in p.states:
            print(f"credence.{s}={p.credence[s]}", file=out)
        for a in p.actions:
            print(f"eu.{a}={eus[a]}", file=out)
            print(f"class.{a}={classify(eus[a])}", file=out)
        for i, g in enumerate(groups, 1):
            print(f"rank.{i}={','.join(g)}", file=out)
        for (a, b), r in dom.items():
            print(f"dominance.{a}.{b}={r.verdict}", file=out)
        print(f"nap.regular={'true' if nap['NAP1 regularity'].passed else 'false'}", file=out)
        print(f"nap.ok={'true' if nap.ok else 'false'}", file=out)
        return EXIT_OK if nap.ok else EXIT_FAIL

    title = f" - {fx.title}" if fx.title else ""
    print(f"{fx.name}{title}", file=out)
    print(f"{len(p.states)} states, {len(p.actions)} actions", file=out)
    print("credence: " + ", ".join(f"{s} = {p.credence[s]}" for s in p.states), file=out)
    width = max(len(a) for a in p.actions)
    print("expected utility:", file=out)
    for a in p.actions:
        print(f"  {a:<{width}}  {eus[a]}  ({classify(eus[a])})", file=out)
    print(f"ranking: {format_ordering(groups)}", file=out)
    print("dominance:", file=out)
    if dom:
        for (a, b), r in dom.items():
            print(f"  {_dominance_phrase(a, b, r)}", file=out)
    else:
        print("  (none)", file=out)
    if not nap.ok:
        print("credence check failed:", file=out)
        for line in nap.lines():
            print(f"  {line}", file=out)
        return EXIT_FAIL
    regular = "regular" if nap["NAP1 regularity"].passed else "not regular"
    print(f"credence: probability axioms hold, {regular}", file=out)
    return EXIT_OK


def cmd_mix(args, out: TextIO) -> int:
    fx = _load_problem(args.file)
    grid = simplex_grid(fx.problem.actions, args.grid) if args.grid else None
    report = pure_beats_mixtures(fx.problem, grid)
    if args.machine:
        print(f"best={','.join(report.best_actions)}", file=out)
        print(f"best_eu={report.best_eu}", file=out)
        for r in report.rows:
            status = "ok" if r.ok else "violation"
            print(f"mixture[{r.mixture}]={r.eu};{status}", file=out)
        print(f"ok={'true' if report.ok else 'false'}", file=out)
    else:
        print(report.summary(), file=out)
        for r in report.violations:
            print(f"  violation: [{r.mixture}] has EU {r.eu}", file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_vnm(args, out: TextIO) -> int:
    spec = _load_vnm(args.file)
    oracle = spec.oracle()
    sample = spec.sample()
    if args.action == "check":
        report = check_axioms(oracle, sample, spec.p_grid)
        if args.machine:
            for r in report.results:
                print(f"{r.name}={r.status.value}", file=out)
        else:
            print(f"{spec.name}: {len(sample)} lotteries, {len(spec.p_grid)} grid weights", file=out)
            for line in report.lines():
                print(f"  {line}", file=out)
        return EXIT_OK if report.ok else EXIT_FAIL

    report = check_axioms(oracle, sample, spec.p_grid)
    broken = [r for r in report.results if r.status is AxiomStatus.FAIL]
    if broken:
        for r in broken:
            print(f"construction refused: {r.name} fails: {r.detail}", file=out)
        return EXIT_FAIL
    try:
        ua = construct_utility(oracle, sample, default_candidates())
    except (IndifferencePointNotFound, NonUniqueIndifference, IncoherentPreference,
            UnknownQuery) as exc:
        print(f"construction failed: {exc}", file=out)
        return EXIT_FAIL
    pairs = [(a, x, y) for i, x in enumerate(sample) for y in sample[i + 1:]
             for a in spec.p_grid if 0 < a < 1][:64]
    try:
        lin = verify_linearity(ua, oracle, pairs)
    except UnknownQuery:
        lin = None
    if args.machine:
        for x in sample:
            print(f"U.{x.label()}={ua[x]}", file=out)
        if lin is not None:
            print(f"linearity={'true' if lin.ok else 'false'}", file=out)
    else:
        print(f"best: {ua.top.label()}, worst: {ua.bottom.label()}"
              + (" (indifferent: constant utility)" if ua.constant else ""), file=out)
        for x in sample:
            print(f"  U({x.label()}) = {ua[x]}", file=out)
        if lin is None:
            print("linearity: not checked (oracle cannot rank mixtures)", file=out)
        else:
            print(f"linearity: {len(lin.rows) - len(lin.mismatches)}/{len(lin.rows)} mixtures agree",
                  file=out)
            for r in lin.mismatches:
                print(f"  mismatch at a={r.weight}, {r.p.label()} / {r.p_prime.label()}: "
                      f"{r.detail or f'derived {r.derived}, predicted {r.predicted}'}", file=out)
    return EXIT_OK if lin is None or lin.ok else EXIT_FAIL


def cmd_cases(args, out: TextIO) -> int:
    chosen = [fx for fx in builtin_cases() if args.filter in fx.name]
    if not chosen:
        raise UsageError(f"no built-in case matches {args.filter!r}")
    failed = 0
    for fx in chosen:
        report = run_fixture(fx)
        if args.machine:
            print(f"{fx.name}={'pass' if report.ok else 'fail'}", file=out)
        else:
            print(f"{'pass' if report.ok else 'FAIL'} {fx.name} ({len(report.rows)} checks)", file=out)
            for row in report.failures:
                print(f"  {row.line()}", file=out)
        failed += not report.ok
    if not args.machine:
        print(f"{len(chosen) - failed}/{len(chosen)} cases pass", file=out)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_check(args, out: TextIO) -> int:
    fx = _load_problem(args.file)
    report = run_fixture(fx)
    if not report.rows:
        raise UsageError(f"{args.file} has no expected, classify or ordering section")
    for row in report.rows:
        if args.machine:
            print(f"{row.quantity}={'pass' if row.ok else 'fail'}", file=out)
        elif not row.ok:
            print(row.line(), file=out)
    if not args.machine:
        n = len(report.rows)
        print(f"{fx.name}: {n - len(report.failures)}/{n} checks pass", file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


COMMANDS = {
    "eval": cmd_eval,
    "solve": cmd_solve,
    "mix": cmd_mix,
    "vnm": cmd_vnm,
    "cases": cmd_cases,
    "check": cmd_check,
}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        args = _settings(args)
        with depth_limit(args.depth):
            return COMMANDS[args.command](args, out)
    except (UsageError, FileFormatError, FileNotFoundError, SurrealError,
            ZeroDivisionError, InvalidMixture) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
