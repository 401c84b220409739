"""Rule-based generator sets used as comparison baselines."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from pathlib import Path

from sympy import primerange

from .cayley import GeneratorSet
from .cayley import canonicalize
from .constants import TOPOLOGY_BROADCAST
from .constants import TOPOLOGY_COMPLETE
from .constants import TOPOLOGY_EXPO
from .constants import TOPOLOGY_FIBONACCI
from .constants import TOPOLOGY_PRIME
from .constants import TOPOLOGY_RING
from .validators import ValidationError
from .validators import validate_modulus
from .validators import validate_positive

logger = logging.getLogger("ctopo.baselines")

BaselineFn = Callable[[int, int | None], GeneratorSet]


def _shrink_warning(name: str, requested: int, gs: GeneratorSet) -> None:
  if len(gs.offsets) < requested:
    logger.warning(
      f"{name}: {requested} offsets collapsed to {len(gs.offsets)} after "
      f"canonicalization mod {gs.modulus}"
    )


def expo_generators(n: int, k: int | None = None) -> GeneratorSet:
  """
  Powers of two 2^0 .. 2^ceil(log2(n-1)) that fall in [1, n-1].

  Args:
      n: Agent count (>= 3).
      k: Keep only the k smallest powers (degree-budget truncation).

  Returns:
      GeneratorSet: Canonical exponential-graph generators.
  """
  validate_modulus(n)
  top = math.ceil(math.log2(n - 1))
  powers = [1 << e for e in range(top + 1) if (1 << e) <= n - 1]
  if k is not None:
    validate_positive(k, "K")
    if k > len(powers):
      logger.warning(
        f"expo: K={k} exceeds the {len(powers)} powers of two below {n}; using all"
      )
    powers = powers[:k]
  gs = canonicalize(n, powers)
  _shrink_warning(TOPOLOGY_EXPO, len(powers), gs)
  return gs


def fibonacci_generators(n: int, k: int | None) -> GeneratorSet:
  """
  First k distinct Fibonacci numbers 1, 2, 3, 5, 8, ... (duplicate 1 skipped).

  Raises:
      ValidationError: If fewer than k such values lie below n.
  """
  validate_modulus(n)
  if k is None:
    raise ValidationError("fibonacci baseline needs K")
  validate_positive(k, "K")
  values: list[int] = []
  a, b = 1, 2
  while a <= n - 1 and len(values) < k:
    values.append(a)
    a, b = b, a + b
  if len(values) < k:
    raise ValidationError(f"Only {len(values)} Fibonacci numbers below {n}, need {k}")
  gs = canonicalize(n, values)
  _shrink_warning(TOPOLOGY_FIBONACCI, k, gs)
  return gs


def prime_generators(n: int, k: int | None) -> GeneratorSet:
  """
  First k primes 2, 3, 5, 7, ... (coprimality to n is not required).

  Raises:
      ValidationError: If fewer than k primes lie below n.
  """
  validate_modulus(n)
  if k is None:
    raise ValidationError("prime baseline needs K")
  validate_positive(k, "K")
  values: list[int] = []
  for p in primerange(2, n):
    values.append(int(p))
    if len(values) == k:
      break
  if len(values) < k:
    raise ValidationError(f"Only {len(values)} primes below {n}, need {k}")
  gs = canonicalize(n, values)
  _shrink_warning(TOPOLOGY_PRIME, k, gs)
  return gs


def ring_generators(n: int, k: int | None = None) -> GeneratorSet:
  """The cycle C_N, offsets [1]."""
  return canonicalize(n, [1])


def complete_generators(n: int, k: int | None = None) -> GeneratorSet:
  """Every offset 1..N//2: the complete graph K_N as a circulant."""
  validate_modulus(n)
  return canonicalize(n, range(1, n // 2 + 1))


BUILTIN_TOPOLOGIES: dict[str, BaselineFn] = {
  TOPOLOGY_EXPO: expo_generators,
  TOPOLOGY_FIBONACCI: fibonacci_generators,
  TOPOLOGY_PRIME: prime_generators,
  TOPOLOGY_RING: ring_generators,
  TOPOLOGY_COMPLETE: complete_generators,
  # Structural view of the broadcast baseline; simulators swap in the channel model
  TOPOLOGY_BROADCAST: complete_generators,
}


def resolve_topology(ref: str, n: int, k: int | None) -> tuple[str, GeneratorSet]:
  """
  Resolve a builtin name or a generator-set JSON file into a named set.

  Args:
      ref: Builtin name ("expo", "fibonacci", "prime", "ring", "complete",
          "broadcast") or path to a {"n", "offsets"} JSON file.
      n: Agent count for builtins.
      k: Generator budget for builtins.

  Returns:
      tuple[str, GeneratorSet]: Display name and generator set.

  Raises:
      ValidationError: For unknown names or malformed files.
      FileNotFoundError: If a path was given that doesn't exist.
  """
  builder = BUILTIN_TOPOLOGIES.get(ref)
  if builder is not None:
    return ref, builder(n, k)
  path = Path(ref)
  if path.suffix.lower() == ".json" or path.exists():
    return path.stem, GeneratorSet.load(path)
  raise ValidationError(
    f"Unknown topology {ref!r}; use a JSON file or one of {sorted(BUILTIN_TOPOLOGIES)}"
  )
