"""Input validation and error handling utilities."""

from __future__ import annotations

from collections.abc import Iterable
from collections.abc import Mapping
from pathlib import Path

import numpy as np


class ValidationError(ValueError):
  """Raised when input validation fails."""


def validate_modulus(n: int, minimum: int = 3) -> None:
  """
  Validate an agent count / modulus.

  Args:
      n: Modulus to check.
      minimum: Smallest admissible value.

  Raises:
      ValidationError: If n is not an integer >= minimum.
  """
  if isinstance(n, bool) or not isinstance(n, int):
    raise ValidationError(f"Modulus must be an integer, got {n!r}")
  if n < minimum:
    raise ValidationError(f"Modulus must be >= {minimum}, got {n}")


def validate_offsets(n: int, offsets: Iterable[int]) -> list[int]:
  """
  Validate raw generator offsets against a modulus.

  Args:
      n: Modulus.
      offsets: Raw offsets, each expected in [1, n-1].

  Returns:
      list[int]: The offsets as a list.

  Raises:
      ValidationError: If the list is empty, an offset is not an integer or is
          out of range.
  """
  values: list[int] = []
  for s in offsets:
    if isinstance(s, bool) or not isinstance(s, int | np.integer):
      raise ValidationError(f"Offsets must be integers, got {s!r}")
    values.append(int(s))
  if not values:
    raise ValidationError("Generator set needs at least one offset")
  bad = [s for s in values if not 1 <= s <= n - 1]
  if bad:
    raise ValidationError(f"Offsets out of range [1, {n - 1}]: {bad}")
  return values


def validate_probability(
  value: float, name: str, *, allow_zero: bool = False, allow_one: bool = True
) -> None:
  """
  Validate a probability-like parameter.

  Args:
      value: Value to check.
      name: Parameter name for the error message.
      allow_zero: Accept 0.
      allow_one: Accept 1.

  Raises:
      ValidationError: If value lies outside the requested interval.
  """
  low_ok = value >= 0 if allow_zero else value > 0
  high_ok = value <= 1 if allow_one else value < 1
  if not (low_ok and high_ok):
    lo = "[0" if allow_zero else "(0"
    hi = "1]" if allow_one else "1)"
    raise ValidationError(f"{name} must lie in {lo}, {hi}, got {value}")


def validate_positive(value: int, name: str) -> None:
  """Raise ValidationError unless value is a positive integer."""
  if value < 1:
    raise ValidationError(f"{name} must be >= 1, got {value}")


def validate_output_dir(output_dir: Path) -> None:
  """
  Validate and prepare output directory.

  Args:
      output_dir: Path to output directory.

  Raises:
      ValidationError: If output directory is invalid.
  """
  if output_dir.exists() and not output_dir.is_dir():
    raise ValidationError(f"Output path exists but is not a directory: {output_dir}")


def validate_command_names(
  commands: list[str], available: Mapping[str, object]
) -> list[str]:
  """
  Validate command names against the discovered commands.

  Args:
      commands: Command names to validate.
      available: Dictionary of available commands.

  Returns:
      list[str]: Unknown command names.
  """
  return [name for name in commands if name not in available]
