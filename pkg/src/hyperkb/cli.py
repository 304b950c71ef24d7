"""Command line entry point: ``hyperkb {run,compare,validate,solve-oracle}``.

Exit status for ``run``: 0 saturated, 1 refuted, 2 error, 3 truncated.
``compare`` exits 0 when both policies agree, 4 on a verdict mismatch.
``solve-oracle`` exits 0 when satisfiable and 1 when not.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .formats import ParseError, load_instance
from .kb import Policy
from .metrics import Outcome, compare_reports, emit_report
from .model import InstanceError, validate_instance
from .oracle import EnumerationCapExceeded, OracleStatus, brute_force_solve
from .simnet import dump_trace, run_async, run_synchronous

EXIT_SATURATED = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2
EXIT_TRUNCATED = 3
EXIT_MISMATCH = 4


@dataclass
class RunConfig:
    instance: str
    policy: Policy = Policy.EKBM
    scheduler: str = "sync"
    seed: int | None = None
    colors: int | None = None
    max_rounds: int = 100
    max_events: int = 1_000_000
    max_delay: int = 3
    format: str = "csv"
    trace: str | None = None

    def check(self) -> None:
        if self.scheduler == "async" and self.seed is None:
            raise ValueError("--seed is required with --scheduler async")
        if self.scheduler == "sync" and self.seed is not None:
            raise ValueError("--seed only applies to --scheduler async")


def _execute(cfg: RunConfig, policy: Policy, inst):
    if cfg.scheduler == "sync":
        return run_synchronous(inst, policy, cfg.max_rounds)
    return run_async(inst, policy, cfg.seed, cfg.max_delay, cfg.max_events)


def _write_trace(path: str, report, labels) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_trace(report.trace, labels))


def cmd_run(cfg: RunConfig, out=sys.stdout) -> int:
    cfg.check()
    inst = load_instance(cfg.instance, cfg.colors)
    verdict, report = _execute(cfg, cfg.policy, inst)
    if cfg.format == "csv":
        out.write(
            f"# verdict={verdict.outcome.value} rounds={verdict.rounds} "
            f"truncated={str(report.truncated).lower()} policy={cfg.policy.value} "
            f"scheduler={cfg.scheduler}\n"
        )
    out.write(emit_report(report, cfg.format))
    if cfg.trace:
        _write_trace(cfg.trace, report, inst.labels)
    if report.truncated:
        return EXIT_TRUNCATED
    return EXIT_REFUTED if verdict.outcome is Outcome.REFUTED else EXIT_SATURATED


def cmd_compare(cfg: RunConfig, out=sys.stdout) -> int:
    cfg.check()
    inst = load_instance(cfg.instance, cfg.colors)
    _, base = _execute(cfg, Policy.BASELINE, inst)
    _, managed = _execute(cfg, Policy.EKBM, inst)
    cmp = compare_reports(base, managed)
    if cfg.format == "csv":
        out.write(cmp.to_csv())
    elif cfg.format == "json":
        out.write(cmp.to_json())
    else:
        out.write(cmp.to_text())
    return EXIT_SATURATED if cmp.verdicts_agree else EXIT_MISMATCH


def cmd_validate(path: str, colors: int | None, out=sys.stdout) -> int:
    inst = load_instance(path, colors)
    problems = validate_instance(inst)
    if problems:
        for p in problems:
            out.write(p + "\n")
        return EXIT_ERROR
    out.write(f"ok: {inst.var_count} variables, {len(inst.nogoods)} nogoods\n")
    return 0


def cmd_solve_oracle(path: str, colors: int | None, out=sys.stdout) -> int:
    inst = load_instance(path, colors)
    res = brute_force_solve(inst)
    out.write(f"{res.status.value} models={res.model_count}\n")
    if res.witness is not None:
        out.write(" ".join(f"{inst.labels[v]}={d}" for v, d in enumerate(res.witness)) + "\n")
    return 0 if res.status is OracleStatus.SAT else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperkb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p):
        p.add_argument("instance", help="DIMACS .col graph or CSP text file")
        p.add_argument("--colors", type=int, help="color count for .col input")

    def run_args(p, with_policy: bool):
        instance_args(p)
        if with_policy:
            p.add_argument("--policy", choices=["baseline", "ekbm"], default="ekbm")
        p.add_argument("--scheduler", choices=["sync", "async"], default="sync")
        p.add_argument("--seed", type=int)
        p.add_argument("--max-rounds", type=int, default=100)
        p.add_argument("--max-events", type=int, default=1_000_000)
        p.add_argument("--max-delay", type=int, default=3)

    p_run = sub.add_parser("run", help="run one policy and print its report")
    run_args(p_run, True)
    p_run.add_argument("--format", choices=["csv", "json"], default="csv")
    p_run.add_argument("--trace", help="write the event trace (JSON lines) here")

    p_cmp = sub.add_parser("compare", help="run both policies side by side")
    run_args(p_cmp, False)
    p_cmp.add_argument("--format", choices=["text", "csv", "json"], default="text")

    p_val = sub.add_parser("validate", help="check an instance file")
    instance_args(p_val)

    p_orc = sub.add_parser("solve-oracle", help="brute-force satisfiability check")
    instance_args(p_orc)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("run", "compare"):
            cfg = RunConfig(
                instance=args.instance,
                policy=Policy.parse(getattr(args, "policy", "ekbm")),
                scheduler=args.scheduler,
                seed=args.seed,
                colors=args.colors,
                max_rounds=args.max_rounds,
                max_events=args.max_events,
                max_delay=args.max_delay,
                format=args.format,
                trace=getattr(args, "trace", None),
            )
            handler = cmd_run if args.command == "run" else cmd_compare
            return handler(cfg, out)
        if args.command == "validate":
            return cmd_validate(args.instance, args.colors, out)
        return cmd_solve_oracle(args.instance, args.colors, out)
    except (OSError, ParseError, InstanceError, ValueError, EnumerationCapExceeded) as exc:
        print(f"hyperkb: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
