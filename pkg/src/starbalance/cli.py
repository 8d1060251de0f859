"""Command line front end: ``starbalance <command> ...``.

Exit status is 0 on success, 2 for bad input (with ``error[<code>]: ...`` on
stderr) and 1 for anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, divisible, heuristics, oracle, ordering
from .core import InvalidPlan, InvalidPlatform, simulate
from .io import fmt, load_divisible_platform, load_platform, parse_rational, timeline_csv


class UsageError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _write_or_print(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _run_algo(args, platform):
    if args.algo == "oracle":
        if args.makespan is not None:
            raise UsageError("bad-arguments", "--makespan does not apply to the oracle")
        return oracle.brute_force(platform, args.max_moves, args.restricted, args.budget), {}
    if args.makespan is not None:
        tests = {"mbbsa": heuristics.mbbsa_feasible, "rbsa": heuristics.rbsa_feasible}
        if args.algo not in tests:
            raise UsageError("bad-arguments", f"--makespan only applies to {', '.join(tests)}")
        target = parse_rational(args.makespan)
        ok, plan = tests[args.algo](platform, target)
        extra = {"target": fmt(target), "feasible": ok}
        return (plan, simulate(platform, plan).makespan), extra
    return heuristics.ALGORITHMS[args.algo](platform), {}


def cmd_solve(args) -> int:
    platform = load_platform(args.platform)
    (plan, ms), extra = _run_algo(args, platform)
    timeline = simulate(platform, plan)
    if args.gantt:
        Path(args.gantt).write_text(timeline_csv(timeline))
    if args.format == "csv":
        sys.stdout.write(timeline_csv(timeline))
        return 0
    out = {"algorithm": args.algo, "makespan": fmt(ms), "moves": [list(mv) for mv in plan]}
    out.update(extra)
    _emit(out)
    return 0


def cmd_gantt(args) -> int:
    platform = load_platform(args.platform)
    args.makespan = None
    (plan, _), _ = _run_algo(args, platform)
    _write_or_print(timeline_csv(simulate(platform, plan)), args.out)
    return 0


def _parse_delta(text: str) -> list[int]:
    text = text.strip()
    try:
        values = json.loads(text) if text.startswith("[") else [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError("bad-delta", f"cannot parse imbalance {text!r}") from exc
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise UsageError("bad-delta", "imbalance values must be integers")
    return values


def cmd_ordering(args) -> int:
    platform = load_platform(args.platform)
    plan, t = ordering.order_redistribution(platform, _parse_delta(args.delta))
    _emit({"completion_time": fmt(t), "moves": [list(mv) for mv in plan]})
    return 0


def cmd_divisible(args) -> int:
    sol = divisible.solve(load_divisible_platform(args.platform))
    _emit(sol.as_dict())
    return 0


def cmd_bench(args) -> int:
    try:
        family = bench.PlatformFamily.parse(args.family, args.regime)
    except ValueError as exc:
        raise UsageError("bad-family", str(exc)) from exc
    stats = bench.run_benchmark([family], args.count, args.workers, args.seed, jobs=args.jobs)
    if args.out:
        bench.write_csv(stats, args.out)
    st = stats[family.key]
    if args.format == "csv":
        sys.stdout.write("instance,algorithm,makespan,distance\n")
        for k, algo, ms, d in st.rows():
            sys.stdout.write(f"{k},{algo},{ms},{float(d):.6f}\n")
        return 0
    summary = st.summary()
    summary["cdf"] = {a: st.cdf(a) for a in st.distances}
    _emit(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starbalance", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_algo_options(p, default=None):
        p.add_argument("--algo", choices=["bba", "mbbsa", "rbsa", "oracle"], default=default, required=default is None)
        p.add_argument("--platform", required=True)
        p.add_argument("--max-moves", type=int, default=None, help="oracle: longest plan searched (default: n)")
        p.add_argument("--restricted", action="store_true", help="oracle: no worker both sends and receives")
        p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET, help="oracle: search node limit")

    p = sub.add_parser("solve", help="compute a schedule for a task platform")
    add_algo_options(p)
    p.add_argument("--makespan", default=None, help="only test feasibility of this target (mbbsa, rbsa)")
    p.add_argument("--gantt", default=None, help="also write the timeline CSV here")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search (small instances)")
    add_algo_options(p, default="oracle")
    p.set_defaults(func=cmd_solve, makespan=None, gantt=None, format="json")

    p = sub.add_parser("gantt", help="timeline CSV of a schedule")
    add_algo_options(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gantt)

    p = sub.add_parser("ordering", help="optimal order for a known imbalance, computation neglected")
    p.add_argument("--platform", required=True)
    p.add_argument("--delta", required=True, help='e.g. "2,1,-3" or "[2,1,-3]"')
    p.set_defaults(func=cmd_ordering)

    p = sub.add_parser("divisible", help="divisible-load rebalancing")
    p.add_argument("--platform", required=True)
    p.set_defaults(func=cmd_divisible)

    p = sub.add_parser("bench", help="distance-to-best study on random platforms")
    p.add_argument("--family", default="het-het", help="<comm>-<comp>, each hom or het")
    p.add_argument("--regime", default="general", help="general, c<=w or c>=w")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--workers", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel processes")
    p.add_argument("--out", default=None, help="CSV of every run")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_bench)
    return parser


ERROR_CODES = [
    (UsageError, None),
    (json.JSONDecodeError, "malformed-json"),
    (InvalidPlatform, "invalid-platform"),
    (InvalidPlan, "invalid-plan"),
    (ordering.InfeasibleImbalance, "infeasible-imbalance"),
    (oracle.BudgetExceeded, "budget-exceeded"),
    (divisible.ConstraintViolation, "constraint-violation"),
    (FileNotFoundError, "file-not-found"),
]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except Exception as exc:
        for kind, code in ERROR_CODES:
            if isinstance(exc, kind):
                print(f"error[{code or exc.code}]: {exc}", file=sys.stderr)
                return 2
        print(f"error[internal]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
