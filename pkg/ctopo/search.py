"""Exhaustive (diameter, average path length) search over size-K candidate subsets."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cayley import GeneratorSet
from .cayley import canonicalize
from .cayley import distance_profile
from .constants import DEFAULT_BRUTEFORCE_CAP
from .numtheory import CandidatePool
from .validators import ValidationError
from .validators import validate_positive

logger = logging.getLogger("ctopo.search")


@dataclass(frozen=True)
class SearchResult:
  """
  Global optimum of an exhaustive search.

  Attributes:
      best: First subset (in combination order) reaching the optimal key.
      diameter: Its diameter.
      avg_path_length: Its exact average path length.
      evaluated: Number of subsets evaluated.
      optimal_count: How many subsets share the optimal diameter.
  """

  best: GeneratorSet
  diameter: int | float
  avg_path_length: Fraction | float
  evaluated: int
  optimal_count: int


def subset_count(pool: CandidatePool, k: int) -> int:
  return math.comb(len(pool), k)


def exhaustive_search(
  n: int, pool: CandidatePool, k: int, cap: int = DEFAULT_BRUTEFORCE_CAP
) -> SearchResult:
  """
  Evaluate every size-k subset of the pool and keep the (D, L) minimum.

  Args:
      n: Agent count N.
      pool: Candidate pool for N.
      k: Subset size K.
      cap: Refuse to run when C(|pool|, K) exceeds this.

  Returns:
      SearchResult: The optimum and search statistics.

  Raises:
      ValidationError: If K is out of range or the subset count exceeds cap.
  """
  validate_positive(k, "K")
  if pool.modulus != n:
    raise ValidationError(f"Pool modulus {pool.modulus} does not match N={n}")
  if k > len(pool):
    raise ValidationError(f"Pool of {len(pool)} candidates cannot supply K={k}")
  total = subset_count(pool, k)
  if total > cap:
    raise ValidationError(
      f"C({len(pool)}, {k}) = {total} subsets exceeds the cap of {cap}; "
      "use the optimize command instead"
    )
  logger.info(f"Exhaustive search over {total} subsets (N={n}, K={k})")

  best: GeneratorSet | None = None
  best_key: tuple[int | float, Fraction | float] = (math.inf, math.inf)
  optimal_count = 0
  for subset in combinations(pool.candidates, k):
    gs = canonicalize(n, subset)
    profile = distance_profile(gs)
    key = (profile.diameter, profile.avg_path_length)
    if key[0] < best_key[0]:
      optimal_count = 0
    if key[0] <= best_key[0]:
      optimal_count += 1
    if best is None or key < best_key:
      best, best_key = gs, key

  assert best is not None
  logger.info(f"Optimum {best.label()}: D={best_key[0]} L={float(best_key[1]):.4f}")
  return SearchResult(best, best_key[0], best_key[1], total, optimal_count)
