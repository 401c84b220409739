"""Number-theoretic priors: gcd, multiplicative orders and the candidate pool."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sympy import primerange

from .constants import POOL_ALL
from .constants import POOL_FILE
from .constants import POOL_PRIMES
from .utils import write_csv
from .validators import ValidationError
from .validators import validate_modulus

logger = logging.getLogger("ctopo.numtheory")

POOL_MODES = (POOL_ALL, POOL_PRIMES, POOL_FILE)


def gcd(a: int, b: int) -> int:
  """
  Greatest common divisor of two non-negative integers.

  Raises:
      ValidationError: If a or b is negative, or both are zero.
  """
  if a < 0 or b < 0:
    raise ValidationError(f"gcd expects non-negative integers, got ({a}, {b})")
  if a == 0 and b == 0:
    raise ValidationError("gcd(0, 0) is undefined")
  return math.gcd(a, b)


def multiplicative_order(a: int, n: int) -> int:
  """
  Smallest k >= 1 with a^k ≡ 1 (mod n), by iterated modular multiplication.

  Args:
      a: Unit residue, 1 <= a < n.
      n: Modulus, n >= 2.

  Returns:
      int: ord_n(a).

  Raises:
      ValidationError: If the preconditions fail (gcd(a, n) != 1 included).
  """
  if n < 2:
    raise ValidationError(f"Modulus must be >= 2, got {n}")
  if not 1 <= a < n:
    raise ValidationError(f"Residue must lie in [1, {n - 1}], got {a}")
  if math.gcd(a, n) != 1:
    raise ValidationError(f"{a} is not a unit modulo {n}")
  value = a % n
  k = 1
  # ord_n(a) <= λ(n) < n, so n steps always suffice
  while value != 1:
    value = (value * a) % n
    k += 1
    if k > n:
      raise ValidationError(f"Order of {a} mod {n} exceeded the {n}-step cap")
  return k


@dataclass(frozen=True)
class CandidatePool:
  """
  Ordered candidate generators with their (normalized) multiplicative orders.

  Candidate positions are fixed for the life of a run; the policy's positional
  feature depends on them.

  Attributes:
      modulus: N.
      candidates: Ascending canonical candidates coprime to N.
      orders: ord_N(p) per candidate.
  """

  modulus: int
  candidates: tuple[int, ...]
  orders: tuple[int, ...]

  def __post_init__(self) -> None:
    if not self.candidates:
      raise ValidationError(f"Candidate pool for N={self.modulus} is empty")
    if len(self.candidates) != len(self.orders):
      raise ValidationError("Candidates and orders must have equal length")
    if len(set(self.candidates)) != len(self.candidates):
      raise ValidationError("Candidate pool contains duplicates")

  def __len__(self) -> int:
    return len(self.candidates)

  @property
  def normalized_orders(self) -> np.ndarray:
    """ω(p) = ord_N(p) / max_q ord_N(q); the maximum is exactly 1."""
    orders = np.asarray(self.orders, dtype=np.float64)
    return orders / orders.max()

  def to_csv(self, path: Path, header_comment: str | None = None) -> Path:
    """Export (candidate, order, omega) rows."""
    rows = (
      {"candidate": p, "order": k, "omega": float(w)}
      for p, k, w in zip(
        self.candidates, self.orders, self.normalized_orders, strict=True
      )
    )
    return write_csv(path, rows, ["candidate", "order", "omega"], header_comment)


def build_candidate_pool(
  n: int, mode: str = POOL_ALL, explicit: Iterable[int] | None = None
) -> CandidatePool:
  """
  Enumerate the candidate pool for modulus n.

  Candidates are coprime to n and restricted to the canonical range
  [1, n // 2]; each keeps its own multiplicative order.

  Args:
      n: Modulus (>= 3).
      mode: "all" (every unit), "primes" (primes that are units) or
          "file" (the explicit list, canonicalized and filtered).
      explicit: Candidate values for mode "file".

  Returns:
      CandidatePool: The populated pool.

  Raises:
      ValidationError: On unknown mode, missing explicit list or empty pool.
  """
  validate_modulus(n)
  half = n // 2
  if mode == POOL_ALL:
    values = [p for p in range(1, half + 1) if math.gcd(p, n) == 1]
  elif mode == POOL_PRIMES:
    values = [int(p) for p in primerange(2, half + 1) if math.gcd(int(p), n) == 1]
  elif mode == POOL_FILE:
    if explicit is None:
      raise ValidationError("Pool mode 'file' requires an explicit candidate list")
    raw = [int(p) for p in explicit]
    bad = [p for p in raw if not 1 <= p <= n - 1]
    if bad:
      raise ValidationError(f"Explicit candidates out of range [1, {n - 1}]: {bad}")
    canon = sorted({min(p, n - p) for p in raw})
    values = [p for p in canon if math.gcd(p, n) == 1]
    dropped = len(canon) - len(values)
    if dropped:
      logger.warning(f"Dropped {dropped} explicit candidates not coprime to {n}")
  else:
    raise ValidationError(f"Unknown pool mode {mode!r}; expected one of {POOL_MODES}")

  if not values:
    raise ValidationError(f"Candidate pool for N={n} (mode {mode!r}) is empty")
  orders = tuple(multiplicative_order(p, n) for p in values)
  logger.debug(f"Pool N={n} mode={mode}: {len(values)} candidates")
  return CandidatePool(n, tuple(values), orders)


def load_candidate_file(path: Path) -> list[int]:
  """
  Read candidate values from a text file (whitespace/comma separated, # comments).

  Raises:
      FileNotFoundError: If the file doesn't exist.
      ValidationError: If a token is not an integer.
  """
  if not path.exists():
    raise FileNotFoundError(f"Candidate file not found: {path}")
  values: list[int] = []
  for line in path.read_text(encoding="utf-8").splitlines():
    body = line.split("#", 1)[0]
    for token in body.replace(",", " ").split():
      try:
        values.append(int(token))
      except ValueError as e:
        raise ValidationError(f"Invalid candidate {token!r} in {path}") from e
  return values
