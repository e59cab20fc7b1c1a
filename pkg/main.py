"""
Command-line entry point for the narrative assessment pipeline.

    python main.py synth --out synth_out
    python main.py run-all --config synth_out/pipeline.json --out run_out
    python main.py calibrate --config synth_out/pipeline.json --out run_out \
        --ground-truth synth_out/ground_truth.json

Exit status: 0 on success, 1 on any pipeline error (message on stderr),
2 on usage errors.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app import service
from app.config import cli_overrides, load_config
from core.errors import ConfigError, PipelineError

logger = logging.getLogger("main")

STAGE_COMMANDS = {
    "ingest": "Normalize platform files into posts.json",
    "narratives": "Detect events and chain them into narratives",
    "classify": "Score deception, coordination and agenda; label narratives",
    "attribute": "Group accounts of orchestrated narratives into candidate actors",
    "impact": "Reach, engagement and conversion-proxy metrics per narrative",
}


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="JSON config file (deep-merged over defaults)")
    parser.add_argument("--out", type=str, default=None, help="Output directory for artifacts")
    parser.add_argument("--seed", type=int, default=None, help="Random seed")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (0 = all cores, 1 = serial)")
    parser.add_argument("--window", type=int, default=None, help="Window length in seconds (alone: tumbling)")
    parser.add_argument("--stride", type=int, default=None, help="Window stride in seconds")
    parser.add_argument("--theta-edge", dest="theta_edge", type=float, default=None,
                        help="Minimum co-occurrence edge weight")
    parser.add_argument("--tau-link", dest="tau_link", type=float, default=None,
                        help="Minimum Jaccard to link clusters across windows")
    parser.add_argument("--j-dup", dest="j_dup", type=float, default=None,
                        help="Minimum shingle Jaccard for near-duplicates")
    parser.add_argument("--input", action="append", default=None, metavar="PATH:ADAPTER",
                        help="Platform file and adapter (JSON path or shipped name); repeatable")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Assess narratives as organic or orchestrated-inauthentic across platforms",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    for name, help_text in STAGE_COMMANDS.items():
        _common_flags(sub.add_parser(name, help=help_text))

    p = sub.add_parser("run-all", help="Run every stage and write report.json")
    _common_flags(p)
    p.add_argument("--quiet", action="store_true", help="Do not print the terminal summary")

    p = sub.add_parser("synth", help="Generate a labeled synthetic corpus")
    _common_flags(p)
    p.add_argument("--scenario", type=str, default=None, help="JSON ScenarioConfig")

    p = sub.add_parser("calibrate", help="Fit fusion weights on assessed synthetic narratives")
    _common_flags(p)
    p.add_argument("--ground-truth", dest="ground_truth", type=str, required=True)

    p = sub.add_parser("evaluate", help="Campaign recovery precision/recall against ground truth")
    _common_flags(p)
    p.add_argument("--ground-truth", dest="ground_truth", type=str, required=True)
    return parser


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="[%(name)s] %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    setup_logging(args.verbose)

    try:
        cfg = load_config(args.config, cli_overrides(args))
        command = args.command
        if command in STAGE_COMMANDS:
            service.run_stage(command, cfg)
        elif command == "run-all":
            service.run_all(cfg, quiet=args.quiet)
        elif command == "synth":
            written = service.run_synth(cfg, args.scenario)
            print(f"synthetic corpus written to {cfg.output_dir} ({len(written)} files)")
        elif command == "calibrate":
            fit = service.run_calibrate(cfg, args.ground_truth)["calibration"]
            print(f"training accuracy {fit['training_accuracy']:.3f} on {fit['n']} narratives")
        elif command == "evaluate":
            metrics = service.run_evaluate(cfg, args.ground_truth)
            print(f"precision {metrics['precision']:.3f}  recall {metrics['recall']:.3f}")
        else:
            raise ConfigError(f"unknown command {command!r}")
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
