"""
qgt - Command line entry point for the QGT lab.

Payloads (instance JSON, reports, CSV) go to stdout or --output; logs go to
stderr. Exit codes: 0 success, 2 invalid spec or parameters, 3 bound violation.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import structlog
import yaml
from pydantic import ValidationError

from .algorithms.registry import available_algorithms, get_selector
from .core.errors import InvalidParamsError, InvalidSpecError, QGTError, RecoveryError
from .core.log import configure_logging
from .core.model import estimate_k, generate_instance, instance_from_json, instance_to_json
from .core.settings import LabSettings, load_settings
from .harness.montecarlo import mc_rank_lemma, mc_score_distribution, mc_singularity
from .harness.runner import run_sweep
from .harness.spec import load_spec, parse_spec
from .harness.stats import write_csv
from .linalg.field import ModP, field_from_name
from .recovery.recover import RecoveryConfig, solve_qgt
from .rules.bound_rules import BoundCheckRanges, verify_bounds

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BOUND_VIOLATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgt", description="Quantitative group testing lab.")
    parser.add_argument("--config", type=Path, default=None, help="Settings YAML (default config/lab.yaml).")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a seeded instance as JSON.")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", type=Path, default=None)

    solve = sub.add_parser("solve", help="Run Subset Select and recovery on an instance file.")
    solve.add_argument("instance", type=Path)
    solve.add_argument("--algorithm", default="m_thresh", help=f"One of {available_algorithms()}.")
    solve.add_argument("--budget", type=int, default=None, help="Free-variable budget.")
    solve.add_argument("--field", choices=["mod_p", "exact"], default="mod_p")
    solve.add_argument("--exact-cap", type=int, default=None)
    solve.add_argument("--unknown-k", action="store_true", help="Use the estimate from the outcomes instead of k.")
    solve.add_argument("--output", type=Path, default=None)

    sweep = sub.add_parser("sweep", help="Run an m-sweep from a spec file (path or path:name).")
    sweep.add_argument("spec")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--trials", type=int, default=None)
    sweep.add_argument("--seed", type=int, default=None, help="Override the master seed.")
    sweep.add_argument("--budget", type=int, default=None)
    sweep.add_argument("--exact-cap", type=int, default=None, help="Dimension cap when the spec uses exact mode.")
    sweep.add_argument("--output", type=Path, default=None)

    sing = sub.add_parser("mc-sing", help="Singularity fraction of random binary matrices.")
    sing.add_argument("--m", type=int, required=True)
    sing.add_argument("--trials", type=int, default=2000)
    sing.add_argument("--seed", type=int, default=0)
    sing.add_argument("--exhaustive", action="store_true")
    sing.add_argument("--exact-cap", type=int, default=None)
    sing.add_argument("--output", type=Path, default=None)

    rank_lemma = sub.add_parser("mc-ranklemma", help="Rank lemma Monte Carlo against its bound.")
    rank_lemma.add_argument("--m1", type=int, required=True)
    rank_lemma.add_argument("--k1", type=int, required=True)
    rank_lemma.add_argument("--l", type=int, required=True)
    rank_lemma.add_argument("--k2", type=int, required=True)
    rank_lemma.add_argument("--trials", type=int, default=10_000)
    rank_lemma.add_argument("--seed", type=int, default=0)
    rank_lemma.add_argument("--exact-cap", type=int, default=None)
    rank_lemma.add_argument("--output", type=Path, default=None)

    scores = sub.add_parser("scores-dist", help="Empirical psi moments for defective and other items.")
    scores.add_argument("--n", type=int, required=True)
    scores.add_argument("--k", type=int, required=True)
    scores.add_argument("--m", type=int, required=True)
    scores.add_argument("--trials", type=int, default=100)
    scores.add_argument("--seed", type=int, default=0)
    scores.add_argument("--output", type=Path, default=None)

    bounds = sub.add_parser("verify-bounds", help="Exact domination suite for the closed-form bounds.")
    bounds.add_argument("--ranges", type=Path, default=None, help="YAML overriding the check grids.")
    bounds.add_argument("--c-tail", type=float, default=None)
    bounds.add_argument("--output", type=Path, default=None)

    return parser


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        output.write_text(text)
        logger.info("Wrote output", path=str(output))


def _dump(payload: dict[str, Any], output: Path | None) -> None:
    _emit(json.dumps(payload, indent=2, default=str), output)


def _cmd_gen(args: argparse.Namespace, settings: LabSettings) -> int:
    inst = generate_instance(args.n, args.k, args.m, args.seed)
    _emit(instance_to_json(inst), args.output)
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace, settings: LabSettings) -> int:
    inst = instance_from_json(args.instance.read_text())
    mode = field_from_name(args.field, prime=settings.prime, cap=args.exact_cap or settings.exact_cap)
    cfg = RecoveryConfig(
        free_var_budget=settings.free_var_budget if args.budget is None else args.budget,
        field_mode=mode,
    )
    k = estimate_k(inst.outcome) if args.unknown_k else inst.k
    if k < 1 or k >= inst.n:
        raise InvalidParamsError(f"k={k} is unusable for n={inst.n}")
    selector = get_selector(args.algorithm)

    payload: dict[str, Any] = {"algorithm": selector.algorithm_id, "k_used": k}
    try:
        report = solve_qgt(inst, selector, cfg, k=k)
        payload |= report.to_dict()
        payload["recovered"] = report.solution == inst.defectives
    except RecoveryError as e:
        payload |= e.report.to_dict() if e.report is not None else {}
        payload |= {"recovered": False, "error": str(e)}
        logger.warning("Recovery failed", error=str(e))
    _dump(payload, args.output)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, settings: LabSettings) -> int:
    spec = load_spec(args.spec)
    overrides = (args.trials, args.seed, args.budget, args.exact_cap)
    if any(value is not None for value in overrides):
        data = spec.model_dump()
        if args.trials is not None:
            data["trials"] = args.trials
        if args.seed is not None:
            data["master_seed"] = args.seed
        if args.budget is not None:
            data["recovery"]["free_var_budget"] = args.budget
        if args.exact_cap is not None and data["recovery"]["field_mode"]["kind"] == "exact":
            data["recovery"]["field_mode"]["cap"] = args.exact_cap
        spec = parse_spec(data)

    workers = args.workers or settings.workers
    rows = run_sweep(spec, workers=workers)
    buffer = io.StringIO()
    write_csv(rows, buffer)
    _emit(buffer.getvalue(), args.output)
    return EXIT_OK


def _cmd_mc_sing(args: argparse.Namespace, settings: LabSettings) -> int:
    estimate = mc_singularity(
        args.m,
        args.trials,
        args.seed,
        exhaustive=args.exhaustive,
        exact_cap=args.exact_cap or settings.exact_cap,
        screen=ModP(prime=settings.prime),
    )
    _dump(estimate.to_dict(), args.output)
    return EXIT_OK


def _cmd_mc_ranklemma(args: argparse.Namespace, settings: LabSettings) -> int:
    estimate = mc_rank_lemma(
        args.m1, args.k1, args.l, args.k2, args.trials, args.seed,
        exact_cap=args.exact_cap or settings.exact_cap,
    )
    _dump(estimate.to_dict(), args.output)
    return EXIT_OK


def _cmd_scores_dist(args: argparse.Namespace, settings: LabSettings) -> int:
    moments = mc_score_distribution(args.n, args.k, args.m, args.trials, args.seed)
    _dump(moments.to_dict(), args.output)
    return EXIT_OK


def _cmd_verify_bounds(args: argparse.Namespace, settings: LabSettings) -> int:
    ranges = BoundCheckRanges()
    if args.ranges is not None:
        try:
            ranges = BoundCheckRanges.model_validate(yaml.safe_load(args.ranges.read_text()) or {})
        except (OSError, yaml.YAMLError, ValidationError) as e:
            raise InvalidSpecError(f"invalid ranges file {args.ranges}: {e}") from e
    report = verify_bounds(ranges, c_tail=args.c_tail)
    _dump(report.to_dict(), args.output)
    return EXIT_OK if report.passed else EXIT_BOUND_VIOLATION


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "mc-sing": _cmd_mc_sing,
    "mc-ranklemma": _cmd_mc_ranklemma,
    "scores-dist": _cmd_scores_dist,
    "verify-bounds": _cmd_verify_bounds,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(args.config, log_level=args.log_level)
    except ValidationError as e:
        configure_logging()
        logger.error("Invalid settings", error=str(e))
        return EXIT_INVALID
    configure_logging(settings.log_level, settings.log_format)

    try:
        return _COMMANDS[args.command](args, settings)
    except (InvalidSpecError, InvalidParamsError, ValidationError) as e:
        logger.error("Invalid input", command=args.command, error=str(e))
        return EXIT_INVALID
    except QGTError as e:
        logger.error("Command failed", command=args.command, error=str(e))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
