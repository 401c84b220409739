"""Tests for rule-based baseline generator sets."""

from __future__ import annotations

import logging
from pathlib import Path

import pytest

from ctopo.baselines import BUILTIN_TOPOLOGIES
from ctopo.baselines import BaselineFn
from ctopo.baselines import complete_generators
from ctopo.baselines import expo_generators
from ctopo.baselines import fibonacci_generators
from ctopo.baselines import prime_generators
from ctopo.baselines import resolve_topology
from ctopo.baselines import ring_generators
from ctopo.cayley import canonicalize
from ctopo.cayley import diameter
from ctopo.validators import ValidationError


def test_expo_full_set() -> None:
  """Test powers of two below N, canonicalized."""
  assert expo_generators(1024).offsets == (1, 2, 4, 8, 16, 32, 64, 128, 256, 512)
  assert expo_generators(8).offsets == (1, 2, 4)


def test_expo_truncates_to_k_smallest() -> None:
  """Test degree-budget truncation."""
  assert expo_generators(1024, 7).offsets == (1, 2, 4, 8, 16, 32, 64)


def test_expo_k_too_large_warns(caplog: pytest.LogCaptureFixture) -> None:
  """Test that asking for more powers than exist keeps all and warns."""
  with caplog.at_level(logging.WARNING, logger="ctopo.baselines"):
    gs = expo_generators(16, 9)
  assert gs.offsets == (1, 2, 4, 8)
  assert "exceeds" in caplog.text


def test_fibonacci_skips_duplicate_one() -> None:
  """Test the first K distinct Fibonacci numbers."""
  assert fibonacci_generators(1024, 7).offsets == (1, 2, 3, 5, 8, 13, 21)


def test_fibonacci_collapse_warns(caplog: pytest.LogCaptureFixture) -> None:
  """Test that mirrored values shrinking the set are reported."""
  with caplog.at_level(logging.WARNING, logger="ctopo.baselines"):
    gs = fibonacci_generators(11, 5)
  assert gs.offsets == (1, 2, 3, 5)
  assert "collapsed" in caplog.text


def test_prime_first_k() -> None:
  """Test the first K primes, coprimality not required."""
  assert prime_generators(1024, 7).offsets == (2, 3, 5, 7, 11, 13, 17)
  assert prime_generators(30, 3).offsets == (2, 3, 5)


@pytest.mark.parametrize("builder", [fibonacci_generators, prime_generators])
def test_rule_baselines_need_enough_values(builder: BaselineFn) -> None:
  """Test that too few values below N raise ValidationError."""
  with pytest.raises(ValidationError):
    builder(5, 10)
  with pytest.raises(ValidationError):
    builder(100, None)


def test_ring_and_complete() -> None:
  """Test the ring and complete builtins."""
  assert ring_generators(9).offsets == (1,)
  assert complete_generators(9).offsets == (1, 2, 3, 4)
  assert diameter(complete_generators(10)) == 1
  assert diameter(ring_generators(5)) == 2


def test_broadcast_resolves_to_complete() -> None:
  """Test the structural view of the broadcast baseline."""
  name, gs = resolve_topology("broadcast", 12, 3)
  assert name == "broadcast"
  assert gs == complete_generators(12)
  assert set(BUILTIN_TOPOLOGIES) >= {"expo", "fibonacci", "prime", "broadcast"}


def test_resolve_json_file(tmp_path: Path) -> None:
  """Test that a generator-set file resolves by stem."""
  path = canonicalize(31, [1, 5]).save(tmp_path / "optimized.json")
  name, gs = resolve_topology(str(path), 1024, 7)
  assert name == "optimized"
  assert gs.modulus == 31
  assert gs.offsets == (1, 5)


def test_resolve_unknown_name() -> None:
  """Test that unknown names raise ValidationError."""
  with pytest.raises(ValidationError):
    resolve_topology("hypercube", 64, 3)
