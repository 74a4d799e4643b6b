"""
Main application entry point.
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import argparse
import logging
from typing import List, Optional

from pydantic import ValidationError

from src import __version__, config
from src.controller import AppController, exit_code_for, run_command
from src.services.exceptions import ConfigError, VocicError
from src.services.verification import SUITES

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class VocicArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def setup_logging(verbose: bool = False, debug: bool = False):
    """Configure the root logger on stderr."""
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = VocicArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "pretty"], default=config.DEFAULT_FORMAT)
    common.add_argument("--cache", help=f"Hall polynomial cache file (overrides ${config.CACHE_ENV_VAR})")
    common.add_argument("--threads", default=str(config.DEFAULT_THREADS), help="worker threads, or 'auto'")
    common.add_argument("--max-total-dim", type=int, default=config.DEFAULT_MAX_TOTAL_DIM,
                        help="ceiling on the total dimension of Hall computations")
    common.add_argument("--seed-extra-primes", type=int, default=config.DEFAULT_EXTRA_PRIMES,
                        help="extra primes used to cross-check interpolated Hall polynomials")
    common.add_argument("--verbose", action="store_true", help="log progress to stderr")
    common.add_argument("--debug", action="store_true", help="log details to stderr")

    parser = VocicArgumentParser(
        prog="vocic",
        description="Local intersection cohomology of components of varieties of complexes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    components = commands.add_parser("components", parents=[common], help="list the irreducible components")
    components.add_argument("--dim", required=True)

    stalks = commands.add_parser("stalks", parents=[common], help="IC stalk table of a component")
    stalks.add_argument("--dim", required=True)
    stalks.add_argument("--r", help="rank vector of the component; all components when omitted")

    canonical = commands.add_parser("canonical", parents=[common], help="canonical basis element of a component")
    canonical.add_argument("--dim", required=True)
    canonical.add_argument("--r", required=True)
    canonical.add_argument("--method", choices=["hall", "closed"], default="hall")
    canonical.add_argument("--check", action="store_true", help="run the canonical-basis checks")

    hall = commands.add_parser("hall", parents=[common], help="product of two Hall basis elements")
    hall.add_argument("--lhs", required=True)
    hall.add_argument("--rhs", required=True)
    hall.add_argument("--n", type=int)

    orbits = commands.add_parser("orbits", parents=[common], help="orbits and their degenerations")
    orbits.add_argument("--dim", required=True)

    basis = commands.add_parser("basis", parents=[common], help="canonical basis of a weight space")
    basis.add_argument("--dim", required=True)

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("--suite", action="append", choices=list(SUITES))
    verify.add_argument("--max-rank", type=int, default=4)
    verify.add_argument("--max-entry", type=int)

    cache = commands.add_parser("cache", parents=[common], help="cache maintenance")
    cache.add_argument("--validate", nargs="?", const="", metavar="PATH", required=True,
                       help="load and check a cache file (defaults to --cache / $VOCIC_CACHE)")
    return parser


def build_config(args: argparse.Namespace) -> config.CliConfig:
    """
    Raises:
        ConfigError: If an option value is invalid
    """
    threads = args.threads
    if threads != "auto":
        try:
            threads = int(threads)
        except ValueError:
            raise ConfigError(f"--threads must be a positive integer or 'auto', got '{threads}'")
    try:
        return config.CliConfig(
            format=args.format,
            cache_path=config.resolve_cache_path(args.cache),
            threads=threads,
            max_total_dim=args.max_total_dim,
            extra_primes=args.seed_extra_primes,
        )
    except ValidationError as e:
        raise ConfigError(str(e))


def command_arguments(args: argparse.Namespace) -> dict:
    """The keyword arguments of the controller method for args.command."""
    if args.command in ("components", "orbits", "basis"):
        return {"dim": args.dim}
    if args.command == "stalks":
        return {"dim": args.dim, "r": args.r}
    if args.command == "canonical":
        return {"dim": args.dim, "r": args.r, "method": args.method, "check": args.check}
    if args.command == "hall":
        return {"lhs": args.lhs, "rhs": args.rhs, "n": args.n}
    if args.command == "verify":
        return {"suites": args.suite, "max_rank": args.max_rank, "max_entry": args.max_entry}
    return {"path": args.validate or None}


def main(argv: Optional[List[str]] = None) -> int:
    """Main application function."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.debug)

    try:
        controller = AppController(build_config(args))
    except VocicError as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)

    command = "cache_validate" if args.command == "cache" else args.command
    return run_command(controller, command, **command_arguments(args))


if __name__ == "__main__":
    sys.exit(main())
