"""Tests for command discovery and dispatch."""

from __future__ import annotations

import pytest

from ctopo.config import Config
from ctopo.core import get_commands
from ctopo.core import run_command
from ctopo.validators import ValidationError


def test_get_commands_discovers_every_module() -> None:
  """Test that every command module exposing run() is found."""
  commands = get_commands()
  assert set(commands) == {
    "bruteforce",
    "evaluate",
    "gossip",
    "layout",
    "load",
    "moore",
    "optimize",
    "robustness",
  }
  assert all(callable(fn) for fn in commands.values())


def test_run_command_unknown() -> None:
  """Test that an unknown command raises ValidationError."""
  with pytest.raises(ValidationError, match="Unknown command"):
    run_command("teleport", Config(n=31))


def test_run_command_records_elapsed(run_config: Config) -> None:
  """Test elapsed time and artifacts of a finished run."""
  ctx = run_command("moore", run_config)
  assert ctx.metadata["elapsed"] >= 0.0
  assert ctx.metadata["bound"] == 3
  assert (ctx.output_dir / "moore.csv") in ctx.artifacts


def test_run_command_requires_n(run_config: Config) -> None:
  """Test commands needing N fail with ValidationError when it is missing."""
  cfg = run_config.with_overrides(topologies=["expo"])
  cfg.n = None
  with pytest.raises(ValidationError, match="N is required"):
    run_command("optimize", cfg)
