"""Command-line driver: resolves the run configuration, runs a campaign, writes its report"""

import argparse
import asyncio
import csv
import io
import logging
import sys
from typing import List, Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.text import Text

from . import __version__
from .campaigns import CAMPAIGNS
from .errors import ConfigError, RangeError, SerializationError
from .models.report import Report
from .utils.config import COMMANDS, FORMATS, KINDS, ConfigManager, RunConfig, parse_tolerance_pairs
from .utils.serialization import dumps
from .utils.status import print_checks, summary_line

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILED_CHECK = 1
EXIT_CONFIG = 2

HELP = {
    "family-sweep": "power condition, fiber invariance and member checks along a t-grid",
    "verify-lemmas": "randomized positivity lemma campaigns",
    "fujiki": "Fujiki-relation identities on a lattice preset",
    "period-line": "sample twistor or degenerate twistor lines",
    "lift-check": "certificate for the lifted form on the total space",
    "roundtrip": "bit-exact JSON round-trips",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--n", type=int, default=None, help="half complex dimension of the model")
    common.add_argument("--p", type=int, default=None, help="lemma degree; all p when omitted")
    common.add_argument("--t", default=None, help="comma separated complex values, e.g. 0,1,i,5-5i")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--lattice", default=None, help="preset name or path to a lattice JSON file")
    common.add_argument("--kind", choices=KINDS, default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--output", default=None, help='report path, or "-" for stdout')
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--config", default=None, help="JSON config file")
    common.add_argument("--inject-bug", dest="inject_bug", action="store_const", const=True, default=None)
    common.add_argument("--verbose", action="store_const", const=True, default=None)

    parser = argparse.ArgumentParser(prog="twistor-forge", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        commands.add_parser(command, parents=[common], help=HELP[command])
    return parser


def setup_logging(console: Console, verbose: bool):
    handler = RichHandler(console=console, show_path=False, markup=False)
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _csv_text(header: List[str], rows: List[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(value)) if isinstance(value, float) else value for value in row])
    return buffer.getvalue()


def _write(text: str, output: Optional[str]):
    if output is None:
        return
    if output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(output, "w") as f:
            f.write(text)
    except OSError as e:
        raise SerializationError(f"Failed to write report {output}: {e}")


def resolve_config(args: argparse.Namespace, manager: ConfigManager) -> RunConfig:
    flags = {
        key: getattr(args, key)
        for key in ("seed", "n", "p", "t", "trials", "lattice", "kind", "samples", "output", "format",
                    "inject_bug", "verbose")
    }
    return manager.resolve(args.command, flags, args.config, parse_tolerance_pairs(args.tol))


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 when every check passes, 1 on a failed check, 2 on a configuration error
    """
    console = Console(stderr=True)
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_PASS

    manager = ConfigManager()
    try:
        config = resolve_config(args, manager)
        setup_logging(console, config.verbose)
        campaign = CAMPAIGNS[config.command](config, manager.threads)
        if config.format == "csv" and not campaign.header():
            raise ConfigError(f"{config.command} has no CSV output")
    except (ConfigError, RangeError, SerializationError) as e:
        console.print(Text.assemble(("configuration error: ", "bold red"), str(e)))
        return EXIT_CONFIG

    report: Report = asyncio.run(campaign.run())
    print_checks(console, report.checks)
    console.print(summary_line(report))

    if config.format == "csv":
        text = _csv_text(campaign.header(), campaign.rows())
    else:
        text = dumps(report.to_json())
    try:
        _write(text, config.output)
    except SerializationError as e:
        console.print(Text.assemble(("error: ", "bold red"), str(e)))
        return EXIT_CONFIG

    if not report.passed:
        logger.info("first failing check: %s", report.first_failure.label)
        return EXIT_FAILED_CHECK
    return EXIT_PASS
