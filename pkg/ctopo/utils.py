"""Shared utilities for artifact writing, RNG streams and worker pools."""

from __future__ import annotations

import csv
import math
from collections.abc import Callable
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from datetime import UTC
from datetime import datetime
from pathlib import Path
from typing import Any
from typing import TypeVar

import numpy as np

from .constants import get_optimal_thread_workers

T = TypeVar("T")
R = TypeVar("R")

# ⚡ Perf: Use orjson (~6x faster) with fallback to stdlib json
try:
  import orjson

  def dumps_json(data: Any) -> str:
    """Serialize to indented, key-sorted JSON text using orjson."""
    return orjson.dumps(
      data,
      option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY,
    ).decode("utf-8")

  def loads_json(text: str) -> Any:
    """Parse JSON text using orjson."""
    return orjson.loads(text)

except ImportError:
  import json

  def dumps_json(data: Any) -> str:
    """Serialize to indented, key-sorted JSON text (stdlib fallback)."""
    return json.dumps(data, indent=2, sort_keys=True)

  def loads_json(text: str) -> Any:
    """Parse JSON text (stdlib fallback)."""
    return json.loads(text)


def utc_timestamp() -> str:
  """Return the current UTC time as a compact directory-safe stamp."""
  return datetime.now(UTC).strftime("%Y%m%dT%H%M%SZ")


def finite_or_none(value: float) -> float | None:
  """Map non-finite floats to None so they serialize as JSON null."""
  return value if math.isfinite(value) else None


def write_json(path: Path, data: Any) -> Path:
  """
  Write JSON data to a file, creating parent directories.

  Args:
      path: Destination file.
      data: JSON-serializable data (numpy arrays allowed).

  Returns:
      Path: The written path.
  """
  path.parent.mkdir(parents=True, exist_ok=True)
  with open(path, "w", encoding="utf-8") as f:
    f.write(dumps_json(data))
    f.write("\n")
  return path


def read_json(path: Path) -> Any:
  """
  Read a JSON file.

  Raises:
      FileNotFoundError: If the file doesn't exist.
      ValueError: If the file is not valid JSON.
  """
  if not path.exists():
    raise FileNotFoundError(f"JSON file not found: {path}")
  with open(path, encoding="utf-8") as f:
    return loads_json(f.read())


def _format_cell(value: Any) -> Any:
  if isinstance(value, float | np.floating):
    value = float(value)
    if math.isinf(value):
      return "inf" if value > 0 else "-inf"
    return repr(value)
  if isinstance(value, np.integer):
    return int(value)
  return value


def write_csv(
  path: Path,
  rows: Iterable[Mapping[str, Any]],
  fieldnames: Sequence[str],
  header_comment: str | None = None,
) -> Path:
  """
  Write rows as CSV with an optional leading comment line.

  Floats are written with repr() so values round-trip exactly.

  Args:
      path: Destination file.
      rows: Row mappings keyed by field name.
      fieldnames: Column order.
      header_comment: Optional text for a leading "# ..." line.

  Returns:
      Path: The written path.
  """
  path.parent.mkdir(parents=True, exist_ok=True)
  with open(path, "w", encoding="utf-8", newline="") as f:
    if header_comment:
      f.write(f"# {header_comment}\n")
    writer = csv.DictWriter(f, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
      writer.writerow({k: _format_cell(row.get(k)) for k in fieldnames})
  return path


def derive_rng(seed: int, *stream: int) -> np.random.Generator:
  """
  Create an independent generator for one task of a seeded run.

  The same (seed, stream) always yields the same sequence, whichever worker
  thread executes the task.

  Args:
      seed: Master seed.
      stream: Stream identifiers (e.g. batch index, episode index).

  Returns:
      np.random.Generator: Generator for this stream.
  """
  return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))


def parallel_map(
  fn: Callable[[T], R], items: Sequence[T], threads: int | None = None
) -> list[R]:
  """
  Apply fn to every item, preserving input order.

  Args:
      fn: Function applied to each item.
      items: Items to process.
      threads: Worker cap (None = automatic, 1 = run inline).

  Returns:
      list: Results in the order of items.
  """
  workers = get_optimal_thread_workers(threads)
  if workers <= 1 or len(items) <= 1:
    return [fn(item) for item in items]
  with ThreadPoolExecutor(max_workers=min(workers, len(items))) as executor:
    return list(executor.map(fn, items))
