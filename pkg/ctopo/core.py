"""Command discovery and dispatch."""

from __future__ import annotations

import importlib
import logging
import pkgutil
import time
import types
from collections.abc import Callable
from pathlib import Path

from . import commands as commands_pkg
from .config import Config
from .context import RunContext
from .validators import ValidationError
from .validators import validate_command_names
from .validators import validate_output_dir

logger = logging.getLogger("ctopo.core")

CommandFn = Callable[[RunContext], None]


class _CommandCache:
  """Lazily discovered command modules, each exposing run(ctx)."""

  def __init__(self) -> None:
    self._commands: dict[str, CommandFn] | None = None

  @staticmethod
  def _discover(pkg: types.ModuleType, attr_name: str) -> dict[str, CommandFn]:
    """
    Import every module of a package and collect its `attr_name` callable.

    Args:
        pkg: The package module to search.
        attr_name: Attribute each module must expose.

    Returns:
        dict[str, CommandFn]: Module name -> callable.
    """
    discovered: dict[str, CommandFn] = {}
    for _, name, _ in pkgutil.iter_modules(pkg.__path__):
      try:
        module = importlib.import_module(f"{pkg.__name__}.{name}")
      except ImportError as e:
        logger.warning(f"Command '{name}' load fail: {e}")
        continue
      target = getattr(module, attr_name, None)
      if target is not None and callable(target):
        discovered[getattr(module, "COMMAND", name)] = target
    return discovered

  def get_commands(self) -> dict[str, CommandFn]:
    if self._commands is None:
      self._commands = self._discover(commands_pkg, "run")
    return self._commands


_command_cache = _CommandCache()


def get_commands() -> dict[str, CommandFn]:
  """
  Get all discovered commands.

  Returns:
      dict[str, CommandFn]: Mapping of command names to run functions.
  """
  return _command_cache.get_commands()


def run_command(name: str, config: Config) -> RunContext:
  """
  Execute one command in a fresh run directory.

  Args:
      name: Command name.
      config: Effective configuration.

  Returns:
      RunContext: Context with artifacts and metadata of the finished run.

  Raises:
      ValidationError: For unknown commands or invalid inputs.
      RuntimeError: If the command fails while running.
  """
  available = get_commands()
  if validate_command_names([name], available):
    raise ValidationError(f"Unknown command {name!r}; available: {sorted(available)}")
  validate_output_dir(Path(config.out))

  ctx = RunContext.create(name, config)
  ctx.log(f"Running {name} -> {ctx.output_dir}")
  start = time.time()
  try:
    available[name](ctx)
  finally:
    elapsed = time.time() - start
    ctx.metadata["elapsed"] = elapsed
    ctx.log(f"Command {name} completed in {elapsed:.2f}s")
  return ctx
