#!/usr/bin/env python3
"""
QGT Sweep Runner

Runs every experiment in a spec file and writes one CSV per experiment.
"""

import argparse
import asyncio
import signal
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import structlog
import yaml

logger = structlog.get_logger()


async def main(spec_path: Path, out_dir: Path, only: list[str]) -> None:
    """Main entry point."""
    from src.core.log import configure_logging
    from src.core.settings import load_settings
    from src.harness.runner import sweep
    from src.harness.spec import load_spec
    from src.harness.stats import empirical_threshold, write_csv

    settings = load_settings()
    configure_logging(settings.log_level, settings.log_format)

    with open(spec_path) as f:
        names = list((yaml.safe_load(f) or {}).get("experiments", {}))
    if only:
        names = [n for n in names if n in only]
    out_dir.mkdir(parents=True, exist_ok=True)
    logger.info("Starting sweeps", spec=str(spec_path), experiments=names, workers=settings.workers)

    stop = asyncio.Event()
    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        loop.add_signal_handler(sig, stop.set)

    for name in names:
        if stop.is_set():
            logger.info("Shutdown signal received, skipping remaining sweeps")
            break
        spec = load_spec(f"{spec_path}:{name}")
        rows = await sweep(spec, settings.workers)
        target = out_dir / f"{name}.csv"
        write_csv(rows, target)
        logger.info(
            "Sweep written",
            name=name,
            path=str(target),
            thresholds={a: empirical_threshold(rows, a) for a in spec.algorithms},
        )

    logger.info("Sweeps finished")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run every sweep in a spec file.")
    parser.add_argument("spec", type=Path, nargs="?", default=Path("config/experiments.yaml"))
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--only", nargs="*", default=[], help="Experiment names to run.")
    args = parser.parse_args()
    asyncio.run(main(args.spec, args.out, args.only))
