"""Circulant Cayley graphs on Z_N: construction, exact metrics, Moore bound."""

from __future__ import annotations

import logging
import math
import threading
from collections import OrderedDict
from collections.abc import Callable
from collections.abc import Iterable
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from functools import cached_property
from functools import reduce
from pathlib import Path
from typing import Generic
from typing import TypeVar

import numpy as np

from .constants import DEFAULT_CACHE_SIZE
from .types import GeneratorSetJSON
from .utils import read_json
from .utils import write_csv
from .utils import write_json
from .validators import ValidationError
from .validators import validate_modulus
from .validators import validate_offsets

logger = logging.getLogger("ctopo.cayley")

UNREACHABLE = -1

K = TypeVar("K")
V = TypeVar("V")


@dataclass(frozen=True, slots=True)
class GeneratorSet:
  """
  Positive generators S+ of a circulant graph on Z_N, in canonical form.

  Every offset s satisfies 1 <= s <= N // 2; build instances through
  canonicalize() when the raw offsets may contain mirrored values.

  Attributes:
      modulus: Agent count N (>= 3).
      offsets: Strictly increasing canonical offsets.
  """

  modulus: int
  offsets: tuple[int, ...]

  def __post_init__(self) -> None:
    validate_modulus(self.modulus)
    validate_offsets(self.modulus, self.offsets)
    half = self.modulus // 2
    if any(s > half for s in self.offsets):
      raise ValidationError(f"Offsets must be canonical (<= {half}): {self.offsets}")
    if any(a >= b for a, b in zip(self.offsets, self.offsets[1:], strict=False)):
      raise ValidationError(f"Offsets must be strictly increasing: {self.offsets}")

  @property
  def degree(self) -> int:
    """Undirected degree; the half-modulus offset contributes one edge."""
    n = self.modulus
    return sum(1 if 2 * s == n else 2 for s in self.offsets)

  def steps(self) -> np.ndarray:
    """Symmetric step set S = S+ ∪ (−S+) as residues, one entry per edge."""
    n = self.modulus
    out: list[int] = []
    for s in self.offsets:
      out.append(s)
      if 2 * s != n:
        out.append(n - s)
    return np.asarray(out, dtype=np.int64)

  def with_offset(self, s: int) -> GeneratorSet:
    """Return the canonical set with one more raw offset added."""
    return canonicalize(self.modulus, [*self.offsets, s])

  def label(self) -> str:
    """Compact text form, e.g. "1024:[1,2,4]"."""
    return f"{self.modulus}:[{','.join(map(str, self.offsets))}]"

  def to_dict(self) -> GeneratorSetJSON:
    return {"n": self.modulus, "offsets": list(self.offsets)}

  @classmethod
  def from_dict(cls, data: dict[str, object]) -> GeneratorSet:
    """
    Build a generator set from its JSON object form.

    Raises:
        ValidationError: If keys are missing or values are malformed.
    """
    try:
      n = data["n"]
      offsets = data["offsets"]
    except (KeyError, TypeError) as e:
      raise ValidationError(f"Malformed generator set object: {data!r}") from e
    if not isinstance(n, int) or not isinstance(offsets, list):
      raise ValidationError(f"Malformed generator set object: {data!r}")
    return canonicalize(n, offsets)

  def save(self, path: Path) -> Path:
    return write_json(path, self.to_dict())

  @classmethod
  def load(cls, path: Path) -> GeneratorSet:
    data = read_json(path)
    if not isinstance(data, dict):
      raise ValidationError(f"Topology file must hold a JSON object: {path}")
    return cls.from_dict(data)


@dataclass(frozen=True, eq=False)
class DistanceProfile:
  """
  Hop distances from vertex 0; all-pairs metrics follow by vertex-transitivity.

  Attributes:
      modulus: Vertex count N.
      distances: distances[v] = d(0, v); UNREACHABLE (-1) when disconnected.
  """

  modulus: int
  distances: np.ndarray = field(repr=False)

  @cached_property
  def connected(self) -> bool:
    return bool(np.all(self.distances != UNREACHABLE))

  @cached_property
  def diameter(self) -> int | float:
    """Maximum distance, or math.inf when some vertex is unreachable."""
    if not self.connected:
      return math.inf
    return int(self.distances.max())

  @cached_property
  def avg_path_length(self) -> Fraction | float:
    """Exact mean distance over v != 0, or math.inf when disconnected."""
    if not self.connected:
      return math.inf
    if self.modulus == 1:
      return Fraction(0)
    return Fraction(int(self.distances.sum()), self.modulus - 1)

  def to_csv(self, path: Path, header_comment: str | None = None) -> Path:
    """Export (vertex, distance) rows; unreachable vertices get "inf"."""
    rows = (
      {"vertex": v, "distance": int(d) if d != UNREACHABLE else math.inf}
      for v, d in enumerate(self.distances)
    )
    return write_csv(path, rows, ["vertex", "distance"], header_comment)


def canonicalize(modulus: int, raw_offsets: Iterable[int]) -> GeneratorSet:
  """
  Map raw offsets to the canonical positive generator set.

  Each s is replaced by min(s, N - s), duplicates are dropped and the result is
  sorted, so S = S+ ∪ (−S+) has a unique representation.

  Args:
      modulus: Agent count N (>= 3).
      raw_offsets: Offsets in [1, N-1].

  Returns:
      GeneratorSet: Canonical set.

  Raises:
      ValidationError: On modulus < 3, empty offsets, non-integer offsets or
          offsets out of range.
  """
  validate_modulus(modulus)
  values = validate_offsets(modulus, raw_offsets)
  canon = sorted({min(s, modulus - s) for s in values})
  return GeneratorSet(modulus, tuple(canon))


def bfs_distances(gs: GeneratorSet) -> DistanceProfile:
  """
  Single-source BFS from vertex 0 over neighbors v ± s (mod N).

  Each level expands the whole frontier at once with numpy.

  Args:
      gs: Generator set.

  Returns:
      DistanceProfile: Distances from vertex 0.
  """
  n = gs.modulus
  steps = gs.steps()
  dist = np.full(n, UNREACHABLE, dtype=np.int64)
  dist[0] = 0
  frontier = np.zeros(1, dtype=np.int64)
  level = 0
  while frontier.size:
    level += 1
    reached = np.unique((frontier[:, None] + steps[None, :]) % n)
    frontier = reached[dist[reached] == UNREACHABLE]
    dist[frontier] = level
  profile = DistanceProfile(n, dist)
  logger.debug(f"BFS {gs.label()}: D={profile.diameter}")
  return profile


class MetricsCache(Generic[K, V]):
  """
  Thread-safe, size-bounded LRU store for computed graph metrics.

  Keys are canonical generator sets (hashable), so a hit is exactly the value a
  recomputation would produce.
  """

  def __init__(self, maxsize: int = DEFAULT_CACHE_SIZE) -> None:
    if maxsize < 1:
      raise ValidationError(f"Cache size must be >= 1, got {maxsize}")
    self.maxsize = maxsize
    self._data: OrderedDict[K, V] = OrderedDict()
    self._lock = threading.Lock()
    self.hits = 0
    self.misses = 0

  def __len__(self) -> int:
    return len(self._data)

  def get(self, key: K) -> V | None:
    with self._lock:
      value = self._data.get(key)
      if value is None:
        self.misses += 1
        return None
      self._data.move_to_end(key)
      self.hits += 1
      return value

  def put(self, key: K, value: V) -> None:
    with self._lock:
      self._data[key] = value
      self._data.move_to_end(key)
      while len(self._data) > self.maxsize:
        self._data.popitem(last=False)

  def get_or_compute(self, key: K, factory: Callable[[K], V]) -> V:
    """
    Return the cached value or compute, store and return it.

    The factory runs outside the lock; two threads may compute the same key
    concurrently, which is harmless because results are deterministic.
    """
    value = self.get(key)
    if value is not None:
      return value
    value = factory(key)
    self.put(key, value)
    return value

  def clear(self) -> None:
    with self._lock:
      self._data.clear()
      self.hits = 0
      self.misses = 0


_profile_cache: MetricsCache[GeneratorSet, DistanceProfile] = MetricsCache()


def distance_profile(gs: GeneratorSet) -> DistanceProfile:
  """Cached bfs_distances()."""
  return _profile_cache.get_or_compute(gs, bfs_distances)


def diameter(gs: GeneratorSet) -> int | float:
  """Diameter D(S+); math.inf signals a disconnected graph."""
  return distance_profile(gs).diameter


def avg_path_length(gs: GeneratorSet) -> Fraction | float:
  """Average shortest-path length L(S+) as an exact fraction."""
  return distance_profile(gs).avg_path_length


def is_connected(gs: GeneratorSet) -> bool:
  """Connected iff gcd(S+ ∪ {N}) == 1."""
  return reduce(math.gcd, gs.offsets, gs.modulus) == 1


def moore_min_diameter(n: int, degree: int) -> int:
  """
  Smallest D with N <= 1 + Δ · Σ_{h<D} (Δ−1)^h (Moore lower bound).

  Args:
      n: Vertex count (>= 1).
      degree: Regular degree Δ.

  Returns:
      int: Minimal diameter any Δ-regular graph on n vertices can have.

  Raises:
      ValidationError: If n < 1, or no finite bound exists (Δ < 2 with n > Δ + 1).
  """
  if n < 1:
    raise ValidationError(f"Vertex count must be >= 1, got {n}")
  if n == 1:
    return 0
  if degree < 2:
    if n <= degree + 1:
      return 1
    raise ValidationError(f"No finite Moore bound for n={n} with degree {degree}")
  d = 0
  reach = 1
  layer = degree
  while reach < n:
    reach += layer
    layer *= degree - 1
    d += 1
  return d
