# main.py
import sys
import os

# --- Path Fix for Local Module Discovery ---
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

import argparse
from typing import List, Optional

from core.errors import BerezinError, InputError
from core.logger import logger
from modules.cli_reports import EXIT_INPUT, CliConfig, CommandResult, run_command
from utils.report_formatter import emit, render_table, render_text, rows_to_csv, to_json


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="berezin", description="Berezin and t-Berezin norm toolkit.")
    parser.add_argument("command", choices=["norms", "sweep-t", "verify", "reproduce", "lemmas"])
    parser.add_argument("--model", help="model spec JSON file")
    parser.add_argument("--operator", help='operator JSON file: {"matrix": [[[re, im], ...], ...]}')
    parser.add_argument("--campaign", help="campaign spec JSON file (verify)")
    parser.add_argument("--t", type=float, action="append", help="t value; repeat for several")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output file (stdout when omitted)")
    parser.add_argument("--format", choices=["json", "csv", "text"], default=None)
    parser.add_argument("--tol-ineq", dest="tol_ineq", type=float, help="relative inequality tolerance")
    parser.add_argument("--self-test-mutation", dest="self_test_mutation", type=float,
                        help="scale every proved right-hand side (harness self-test)")
    parser.add_argument("--steps", type=int, default=101, help="t grid size for sweep-t")
    parser.add_argument("--refine", action="store_true", help="local refinement of the supremum (Hardy models)")
    parser.add_argument("--count", type=int, help="samples per lemma suite")
    parser.add_argument("--workers", type=int, help="parallel campaign workers")
    return parser


def render(result: CommandResult, fmt: str) -> str:
    if fmt == "csv":
        return rows_to_csv(result.rows)
    if fmt == "text":
        return render_table(result.rows) if result.rows and "rows" in result.payload else render_text(result.payload)
    return to_json(result.payload)


def main(argv: Optional[List[str]] = None) -> int:
    args = vars(build_parser().parse_args(argv))
    if args["format"] is None:
        args["format"] = "csv" if args["command"] == "sweep-t" else "json"
    try:
        config = CliConfig.model_validate(args)
    except ValueError as e:
        logger.error(f"Invalid command line: {e}")
        return EXIT_INPUT
    try:
        result = run_command(config)
    except (InputError, BerezinError) as e:
        logger.error(f"Input error: {e}", extra={"error_type": type(e).__name__})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    emit(render(result, config.format), config.out)
    return result.exit_code


def main_cli_entry():
    """Standard entry point for synchronous execution"""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrupted by user (Ctrl+C).")
        sys.exit(130)


if __name__ == "__main__":
    main_cli_entry()
