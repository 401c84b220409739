"""Per-run execution context: output directory, configuration and artifacts."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any

from .config import Config
from .utils import utc_timestamp
from .utils import write_csv
from .utils import write_json

logger = logging.getLogger("ctopo")

SNAPSHOT_NAME = "config.snapshot"


@dataclass
class RunContext:
  """
  Runtime context for one command invocation.

  Attributes:
      command: Command name (also the second path component of output_dir).
      config: Effective configuration (file values with CLI overrides applied).
      output_dir: <out>/<command>/<timestamp or label>/.
      timestamp: UTC stamp of the run start.
      artifacts: Files written so far, in order.
      metadata: Free-form results (timings, summary numbers) for callers and tests.
  """

  command: str
  config: Config
  output_dir: Path
  timestamp: str = field(default_factory=utc_timestamp)
  artifacts: list[Path] = field(default_factory=list)
  metadata: dict[str, Any] = field(default_factory=dict)

  def __post_init__(self) -> None:
    self.output_dir.mkdir(parents=True, exist_ok=True)

  @classmethod
  def create(cls, command: str, config: Config) -> RunContext:
    """Resolve the run directory from the config and write the config snapshot."""
    stamp = utc_timestamp()
    run_name = stamp if config.timestamp else config.label
    ctx = cls(command, config, Path(config.out) / command / run_name, stamp)
    ctx.artifacts.append(config.save_to_file(ctx.output_dir / SNAPSHOT_NAME))
    return ctx

  @property
  def header_comment(self) -> str | None:
    """Leading CSV comment, or None when timestamps are disabled."""
    return f"generated {self.timestamp}" if self.config.timestamp else None

  def log(self, msg: str, level: int = logging.INFO) -> None:
    """
    Log a message using standard logging.

    Args:
        msg: Message to log.
        level: Logging level (default: INFO).
    """
    logger.log(level, msg)

  def write_csv(
    self, name: str, rows: Iterable[Mapping[str, Any]], fieldnames: Sequence[str]
  ) -> Path:
    path = write_csv(self.output_dir / name, rows, fieldnames, self.header_comment)
    self.artifacts.append(path)
    self.log(f"Wrote {path}")
    return path

  def write_json(self, name: str, data: Any) -> Path:
    path = write_json(self.output_dir / name, data)
    self.artifacts.append(path)
    self.log(f"Wrote {path}")
    return path

  def register(self, path: Path) -> Path:
    """Record an artifact written by another helper."""
    self.artifacts.append(path)
    self.log(f"Wrote {path}")
    return path
