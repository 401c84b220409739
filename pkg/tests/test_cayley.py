"""Tests for circulant construction, exact metrics and the Moore bound."""

from __future__ import annotations

import math
import time
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from ctopo.cayley import GeneratorSet
from ctopo.cayley import MetricsCache
from ctopo.cayley import avg_path_length
from ctopo.cayley import bfs_distances
from ctopo.cayley import canonicalize
from ctopo.cayley import diameter
from ctopo.cayley import is_connected
from ctopo.cayley import moore_min_diameter
from ctopo.validators import ValidationError


def _random_set(rng: np.random.Generator, n: int, size: int) -> GeneratorSet:
  raw = rng.choice(np.arange(1, n), size=size, replace=False)
  return canonicalize(n, [int(s) for s in raw])


def test_canonicalize_mirrors_and_sorts() -> None:
  """Test that offsets map to min(s, N - s), deduplicated and sorted."""
  gs = canonicalize(10, [9, 1, 5, 6])
  assert gs.offsets == (1, 4, 5)
  assert gs.modulus == 10


@pytest.mark.parametrize(
  ("n", "offsets"),
  [(2, [1]), (10, []), (10, [0]), (10, [10]), (10, [-3])],
)
def test_canonicalize_rejects_invalid(n: int, offsets: list[int]) -> None:
  """Test that invalid moduli and offsets raise ValidationError."""
  with pytest.raises(ValidationError):
    canonicalize(n, offsets)


@pytest.mark.parametrize("offsets", [[1.9, 4.2], [2.0], [True], ["3"], [1, None]])
def test_canonicalize_rejects_non_integer_offsets(offsets: list[object]) -> None:
  """Test that floats, bools and strings are rejected instead of truncated."""
  with pytest.raises(ValidationError, match="integers"):
    canonicalize(16, offsets)  # type: ignore[arg-type]


def test_canonicalize_accepts_numpy_integers() -> None:
  """Test that numpy integer offsets are accepted as plain ints."""
  gs = canonicalize(16, np.array([3, 13, 4], dtype=np.int64))
  assert gs.offsets == (3, 4)
  assert all(type(s) is int for s in gs.offsets)


def test_generator_set_requires_canonical_form() -> None:
  """Test that direct construction rejects mirrored or unsorted offsets."""
  with pytest.raises(ValidationError):
    GeneratorSet(10, (6,))
  with pytest.raises(ValidationError):
    GeneratorSet(10, (2, 1))


def test_degree_counts_half_offset_once() -> None:
  """Test undirected degree with the N/2 offset."""
  assert canonicalize(8, [1, 2, 4]).degree == 5
  assert canonicalize(9, [1, 2, 4]).degree == 6


def test_steps_are_symmetric() -> None:
  """Test the symmetric step set S = S+ ∪ (−S+)."""
  steps = sorted(canonicalize(8, [1, 4]).steps().tolist())
  assert steps == [1, 4, 7]


def test_ring_metrics(ring5: GeneratorSet) -> None:
  """Test diameter and exact average path length of C_5."""
  assert diameter(ring5) == 2
  assert avg_path_length(ring5) == Fraction(3, 2)


def test_complete_circulant_has_diameter_one() -> None:
  """Test that every offset up to N//2 gives K_N."""
  gs = canonicalize(7, [1, 2, 3])
  assert diameter(gs) == 1
  assert avg_path_length(gs) == 1


def test_disconnected_set_reports_infinity() -> None:
  """Test gcd(S+ ∪ {N}) > 1 gives infinite diameter and APL."""
  gs = canonicalize(12, [4, 6])
  assert not is_connected(gs)
  assert math.isinf(diameter(gs))
  assert math.isinf(avg_path_length(gs))
  assert not bfs_distances(gs).connected


def test_connectivity_matches_bfs(rng: np.random.Generator) -> None:
  """Test the gcd criterion against BFS reachability on 1,000 random sets."""
  for _ in range(1000):
    n = int(rng.integers(3, 65))
    gs = _random_set(rng, n, int(rng.integers(1, min(4, n - 1) + 1)))
    assert is_connected(gs) == bfs_distances(gs).connected


def test_bfs_matches_networkx(rng: np.random.Generator) -> None:
  """Test BFS metrics against networkx on random connected circulants."""
  checked = 0
  while checked < 30:
    n = int(rng.integers(3, 80))
    gs = _random_set(rng, n, int(rng.integers(1, min(4, n - 1) + 1)))
    if not is_connected(gs):
      continue
    graph = nx.circulant_graph(n, list(gs.offsets))
    lengths = nx.single_source_shortest_path_length(graph, 0)
    profile = bfs_distances(gs)
    assert profile.diameter == nx.diameter(graph)
    assert profile.distances.tolist() == [lengths[v] for v in range(n)]
    assert float(profile.avg_path_length) == pytest.approx(
      nx.average_shortest_path_length(graph), abs=1e-12
    )
    checked += 1


def test_distances_are_mirror_symmetric(rng: np.random.Generator) -> None:
  """Test d(0, v) = d(0, N − v) on random circulants."""
  for _ in range(100):
    n = int(rng.integers(3, 200))
    gs = _random_set(rng, n, int(rng.integers(1, min(5, n - 1) + 1)))
    distances = bfs_distances(gs).distances
    mirrored = distances[(-np.arange(n)) % n]
    np.testing.assert_array_equal(distances, mirrored)


@pytest.mark.parametrize("n", range(3, 201))
def test_ring_diameter_is_half_n(n: int) -> None:
  """Test D(C_N) = ⌊N/2⌋."""
  assert diameter(canonicalize(n, [1])) == n // 2


def test_single_coprime_offset_is_a_ring(rng: np.random.Generator) -> None:
  """Test that one offset coprime to N gives the ring's diameter and APL."""
  for _ in range(100):
    n = int(rng.integers(3, 300))
    s = int(rng.integers(1, n))
    if math.gcd(s, n) != 1:
      continue
    ring = canonicalize(n, [1])
    gs = canonicalize(n, [s])
    assert diameter(gs) == n // 2
    assert avg_path_length(gs) == avg_path_length(ring)


def test_metrics_never_worsen_on_superset(rng: np.random.Generator) -> None:
  """Test D and L are non-increasing when offsets are added."""
  for _ in range(200):
    n = int(rng.integers(4, 150))
    sub = _random_set(rng, n, int(rng.integers(1, min(3, n - 2) + 1)))
    extra = [int(s) for s in rng.integers(1, n, size=int(rng.integers(1, 4)))]
    sup = canonicalize(n, [*sub.offsets, *extra])
    assert set(sub.offsets) <= set(sup.offsets)
    assert diameter(sup) <= diameter(sub)
    assert avg_path_length(sup) <= avg_path_length(sub)


def test_moore_bound_for_1024_agents() -> None:
  """Test the degree-14 bound for N=1024 and its speed."""
  start = time.perf_counter()
  bound = moore_min_diameter(1024, 14)
  elapsed = time.perf_counter() - start
  assert bound == 3
  assert elapsed < 1e-3


@pytest.mark.parametrize(
  ("n", "degree", "expected"),
  [(1, 5, 0), (2, 1, 1), (8, 7, 1), (8, 5, 2), (10, 3, 2), (11, 3, 3), (5, 2, 2)],
)
def test_moore_bound_values(n: int, degree: int, expected: int) -> None:
  """Test the Moore bound against hand evaluation."""
  assert moore_min_diameter(n, degree) == expected


def test_moore_bound_rejects_degenerate_degree() -> None:
  """Test that degree < 2 with more than degree + 1 vertices has no bound."""
  with pytest.raises(ValidationError):
    moore_min_diameter(5, 1)
  with pytest.raises(ValidationError):
    moore_min_diameter(0, 3)


def test_diameter_never_below_moore_bound(rng: np.random.Generator) -> None:
  """Test D(S+) >= Moore bound at the set's degree."""
  for _ in range(40):
    n = int(rng.integers(5, 120))
    gs = _random_set(rng, n, int(rng.integers(1, min(5, n // 2) + 1)))
    if is_connected(gs) and gs.degree >= 2:
      assert diameter(gs) >= moore_min_diameter(n, gs.degree)


def test_generator_set_json_roundtrip(tmp_path: Path) -> None:
  """Test saving and loading the {"n", "offsets"} object."""
  gs = canonicalize(1024, [1, 15, 127])
  path = gs.save(tmp_path / "best.json")
  assert GeneratorSet.load(path) == gs
  assert gs.to_dict() == {"n": 1024, "offsets": [1, 15, 127]}


def test_from_dict_rejects_malformed() -> None:
  """Test that malformed topology objects raise ValidationError."""
  with pytest.raises(ValidationError):
    GeneratorSet.from_dict({"n": 10})
  with pytest.raises(ValidationError):
    GeneratorSet.from_dict({"n": "10", "offsets": [1]})


def test_distance_profile_csv(tmp_path: Path, ring5: GeneratorSet) -> None:
  """Test the per-vertex distance export."""
  path = bfs_distances(ring5).to_csv(tmp_path / "d.csv")
  lines = path.read_text(encoding="utf-8").splitlines()
  assert lines[0] == "vertex,distance"
  assert lines[1:] == ["0,0", "1,1", "2,2", "3,2", "4,1"]


def test_metrics_cache_hit_equals_recompute(expo64: GeneratorSet) -> None:
  """Test that a cache hit returns exactly the recomputed metrics."""
  cache: MetricsCache[GeneratorSet, object] = MetricsCache(maxsize=4)
  first = cache.get_or_compute(expo64, bfs_distances)
  second = cache.get_or_compute(expo64, bfs_distances)
  assert second is first
  assert cache.hits == 1
  assert cache.misses == 1
  fresh = bfs_distances(expo64)
  assert np.array_equal(fresh.distances, first.distances)  # type: ignore[attr-defined]


def test_metrics_cache_evicts_least_recent() -> None:
  """Test LRU eviction at the size bound."""
  cache: MetricsCache[int, int] = MetricsCache(maxsize=2)
  cache.put(1, 10)
  cache.put(2, 20)
  assert cache.get(1) == 10
  cache.put(3, 30)
  assert cache.get(2) is None
  assert cache.get(1) == 10
  assert len(cache) == 2
  with pytest.raises(ValidationError):
    MetricsCache(maxsize=0)
