"""CLI interface for block_sparse_mac project."""

import logging
from argparse import ArgumentParser, Namespace
from dataclasses import replace
from importlib.metadata import version
from pathlib import Path

from block_sparse_mac.harness.outputs import emit_outputs
from block_sparse_mac.harness.plan import (
    Algorithm,
    ExperimentPlan,
    InvalidPlanError,
    SweepAxis,
    desk_default_plan,
)
from block_sparse_mac.harness.plan_file_loader import load_plan_file, load_scenario_file
from block_sparse_mac.harness.runner import ExperimentRunner
from block_sparse_mac.harness.selftest import run_selftest
from block_sparse_mac.harness.table1 import (
    PUBLISHED_ES_N0_DB,
    PUBLISHED_ROWS,
    load_table1_rows,
    table1_report,
)
from block_sparse_mac.model.system_config import InvalidConfigError

logger = logging.getLogger(__name__)


def _build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        description="Simulate precoded block-sparse uplink access with BOMP and ICBOMP receivers"
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + version("block_sparse_mac")
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="Log at INFO, repeat for DEBUG"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run a Monte-Carlo sweep and write CSV and plot files")
    run.add_argument("--plan", type=Path, help="Plan file, the desk default plan if omitted")
    run.add_argument("--seed", type=int, help="Override the plan seed")
    run.add_argument("--trials", type=int, help="Override the trials per point")
    run.add_argument("--threads", type=int, help="Worker threads per point")
    run.add_argument("--out-dir", type=Path, help="Directory for the result files")
    run.add_argument("--no-progress", action="store_true", help="Hide the progress bars")
    run.add_argument("--p-e", type=float, default=0.0, help="Error probability for the rate bound")

    table1 = subparsers.add_parser("table1", help="Largest admissible active-user counts")
    table1.add_argument("--rows", type=Path, help="Rows file, the published rows if omitted")
    table1.add_argument(
        "--es-n0-db",
        type=float,
        nargs="+",
        default=list(PUBLISHED_ES_N0_DB),
        help="Es/N0 columns in dB",
    )

    analyze = subparsers.add_parser("analyze", help="Guarantee report for one realization")
    analyze.add_argument("--plan", type=Path, help="Scenario or plan file, desk default if omitted")
    analyze.add_argument("--seed", type=int, help="Override the scenario seed")
    analyze.add_argument("--p-e", type=float, default=0.0, help="Error probability for the rate bound")
    analyze.add_argument(
        "--check-gram-bounds", action="store_true", help="Also verify the Gram-block bounds"
    )

    selftest = subparsers.add_parser("selftest", help="Check the numerics on tiny instances")
    selftest.add_argument("--seed", type=int, default=0)
    return parser


def _configure_logging(verbosity: int) -> None:
    if verbosity:
        logging.basicConfig(level=logging.DEBUG if verbosity > 1 else logging.INFO)


def _plan_from_args(args: Namespace) -> ExperimentPlan:
    plan = load_plan_file(args.plan) if args.plan is not None else desk_default_plan()
    overrides = {}
    if args.seed is not None:
        overrides["base"] = replace(plan.base, seed=args.seed)
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    return replace(plan, **overrides) if overrides else plan


def _run(args: Namespace) -> int:
    plan = _plan_from_args(args)
    print(
        f"Running {plan.name}: {len(plan.values)} points on {plan.axis.value}, "
        f"{plan.trials} trials, algorithms {', '.join(a.value for a in plan.algorithms)}"
    )
    runner = ExperimentRunner(plan, progress=not args.no_progress)
    stats = runner.run()
    reports = runner.guarantee_reports(args.p_e) if plan.analysis else None
    emitted = emit_outputs(stats, plan, reports)

    for point in stats:
        print(
            f"{point.algorithm.value:>9} {plan.axis.value}={point.axis_value:g}: "
            f"SER {point.ser:.3e} FER {point.fer:.3e} throughput {point.throughput:.3f}"
        )
    print(f"Results written to {emitted.csv}")
    return 0


def _table1(args: Namespace) -> int:
    rows = load_table1_rows(args.rows) if args.rows is not None else PUBLISHED_ROWS
    print(table1_report(rows, args.es_n0_db).render(), end="")
    return 0


def _analyze(args: Namespace) -> int:
    cfg = load_scenario_file(args.plan) if args.plan is not None else desk_default_plan().base
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    plan = ExperimentPlan(
        base=cfg,
        axis=SweepAxis.ES_N0_DB,
        values=(cfg.es_n0_db,),
        algorithms=(Algorithm.ICBOMP,),
        trials=1,
    )
    [(_, report)] = ExperimentRunner(plan).guarantee_reports(args.p_e, args.check_gram_bounds)
    print(report.to_key_value(), end="")
    return 0


def _selftest(args: Namespace) -> int:
    checks = run_selftest(args.seed)
    for check in checks:
        print(f"[{'PASS' if check.passed else 'FAIL'}] {check.name}: {check.detail}")
    return 0 if all(check.passed for check in checks) else 1


COMMANDS = {"run": _run, "table1": _table1, "analyze": _analyze, "selftest": _selftest}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (InvalidPlanError, InvalidConfigError) as error:
        print(f"Invalid plan: {error}")
        return 1
    except OSError as error:
        print(f"I/O failure: {error}")
        return 2
