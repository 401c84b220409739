"""Command-line interface for the circulant topology toolkit."""

from __future__ import annotations

import argparse
import logging
import sys
import traceback
from pathlib import Path
from typing import NoReturn

from .config import Config
from .constants import BROADCAST_COLLISION
from .constants import BROADCAST_COMPLETE
from .constants import BROADCAST_Q_ADAPTIVE
from .constants import BROADCAST_Q_PERSISTENT
from .constants import POOL_ALL
from .constants import POOL_FILE
from .constants import POOL_PRIMES
from .core import get_commands
from .core import run_command
from .validators import ValidationError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class _ArgumentParser(argparse.ArgumentParser):
  """ArgumentParser that reports usage errors with exit status 1."""

  def error(self, message: str) -> NoReturn:
    self.print_usage(sys.stderr)
    self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
  try:
    return [float(part) for part in text.split(",") if part.strip()]
  except ValueError as e:
    raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from e


def setup_logging(verbose: bool) -> None:
  """
  Configure logging for the application.

  Args:
      verbose: Enable debug-level logging if True.
  """
  level = logging.DEBUG if verbose else logging.INFO
  logging.basicConfig(
    level=level,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
    handlers=[logging.StreamHandler(sys.stdout)],
  )


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
  """
  Parse command-line arguments.

  Args:
      argv: Optional argument list (defaults to sys.argv).

  Returns:
      argparse.Namespace: Parsed arguments.
  """
  p = _ArgumentParser(
    prog="ctopo", description="Circulant Cayley graph topology optimizer"
  )
  p.add_argument("command", choices=sorted(get_commands()), help="Command to run")
  p.add_argument("config", nargs="?", help="Path to a key = value config file")
  p.add_argument("--n", type=int, help="Agent count N")
  p.add_argument("--dmax", type=int, help="Degree budget; K = dmax // 2")
  p.add_argument("--pool", choices=(POOL_ALL, POOL_PRIMES, POOL_FILE), help="Candidate pool")
  p.add_argument("--pool-file", help="Candidate list for --pool file")
  p.add_argument("--seed", type=int, help="Master seed")
  p.add_argument("--out", help="Root output directory")
  p.add_argument("--trials", type=int, help="Gossip trials per topology")
  p.add_argument("--rates", type=_float_list, help="Failure rates, comma-separated")
  p.add_argument("--steps", type=int, help="Communication-load steps")
  p.add_argument("--threads", type=int, help="Worker thread cap")
  p.add_argument(
    "--broadcast-mode",
    choices=(BROADCAST_COLLISION, BROADCAST_COMPLETE),
    help="Broadcast baseline: shared collision channel or gossip on K_N",
  )
  p.add_argument(
    "--broadcast-q",
    choices=(BROADCAST_Q_PERSISTENT, BROADCAST_Q_ADAPTIVE),
    help="Collision contention: every informed agent sends, or each with p = 1/informed",
  )
  p.add_argument(
    "--topology",
    action="append",
    help="Builtin name or generator-set JSON (repeatable; replaces the config list)",
  )
  p.add_argument("--label", help="Run directory name used with --no-timestamp")
  p.add_argument(
    "--no-timestamp",
    action="store_true",
    help="Use the label as run directory and omit CSV timestamp headers",
  )
  p.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
  return p.parse_args(argv)


def build_config(args: argparse.Namespace) -> Config:
  """
  Merge defaults, the config file and command-line flags (flags win).

  Raises:
      FileNotFoundError: If the config file doesn't exist.
      ValidationError: If a value is invalid.
  """
  cfg = Config.load_from_file(Path(args.config)) if args.config else Config()
  return cfg.with_overrides(
    n=args.n,
    dmax=args.dmax,
    pool=args.pool,
    pool_file=args.pool_file,
    seed=args.seed,
    out=args.out,
    trials=args.trials,
    rates=args.rates,
    steps=args.steps,
    threads=args.threads,
    broadcast_mode=args.broadcast_mode,
    broadcast_q=args.broadcast_q,
    topologies=args.topology,
    label=args.label,
    timestamp=False if args.no_timestamp else None,
  )


def main(argv: list[str] | None = None) -> int:
  """
  Main entry point for the CLI.

  Args:
      argv: Optional argument list (defaults to sys.argv).

  Returns:
      int: 0 on success, 1 for usage or configuration errors, 2 for runtime errors.
  """
  try:
    args = parse_args(argv)
  except SystemExit as e:
    return e.code if isinstance(e.code, int) else EXIT_USAGE
  setup_logging(args.verbose)
  logger = logging.getLogger("ctopo.cli")

  try:
    config = build_config(args)
  except FileNotFoundError as e:
    logger.error(f"Config file error: {e}")
    return EXIT_USAGE
  except ValidationError as e:
    logger.error(f"Invalid configuration: {e}")
    return EXIT_USAGE

  try:
    ctx = run_command(args.command, config)
  except ValidationError as e:
    logger.error(f"{args.command}: {e}")
    if args.verbose:
      traceback.print_exc()
    return EXIT_USAGE
  except (OSError, ValueError, RuntimeError) as e:
    logger.error(f"{args.command} failed: {e}")
    if args.verbose:
      traceback.print_exc()
    return EXIT_RUNTIME

  logger.info(f"{len(ctx.artifacts)} artifacts in {ctx.output_dir}")
  return EXIT_OK


if __name__ == "__main__":
  raise SystemExit(main())
