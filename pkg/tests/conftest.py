"""Common test fixtures for ctopo."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest
import torch

from ctopo.cayley import GeneratorSet
from ctopo.cayley import canonicalize
from ctopo.config import Config
from ctopo.context import RunContext
from ctopo.numtheory import CandidatePool
from ctopo.numtheory import build_candidate_pool

GRADIENT_STEP = 1e-5


def _check_gradients(module: torch.nn.Module, objective: Callable[[], torch.Tensor]) -> None:
  module.zero_grad()
  objective().backward()
  for name, param in module.named_parameters():
    assert param.grad is not None, name
    analytic = param.grad.detach().clone()
    for index in np.ndindex(tuple(param.shape)):
      with torch.no_grad():
        base = float(param[index])
        param[index] = base + GRADIENT_STEP
        plus = float(objective())
        param[index] = base - GRADIENT_STEP
        minus = float(objective())
        param[index] = base
      numeric = (plus - minus) / (2 * GRADIENT_STEP)
      a = float(analytic[index])
      assert abs(a - numeric) / max(abs(a), abs(numeric), 1e-4) < 1e-4, (name, index)


@pytest.fixture
def gradient_check() -> Callable[[torch.nn.Module, Callable[[], torch.Tensor]], None]:
  """Compare autograd gradients of a scalar objective with central differences."""
  return _check_gradients


@pytest.fixture
def rng() -> np.random.Generator:
  """Seeded generator so randomized tests are repeatable."""
  return np.random.default_rng(12345)


@pytest.fixture
def ring5() -> GeneratorSet:
  return canonicalize(5, [1])


@pytest.fixture
def expo64() -> GeneratorSet:
  return canonicalize(64, [1, 2, 4, 8, 16, 32])


@pytest.fixture
def toy_pool() -> CandidatePool:
  """Five candidates (every unit of Z_11 up to 5)."""
  return build_candidate_pool(11)


@pytest.fixture
def run_config(tmp_path: Path) -> Config:
  """
  Provide a small, fast configuration writing under tmp_path.

  Args:
      tmp_path: Pytest temporary path fixture.

  Returns:
      Config with timestamps disabled for byte-stable artifacts.
  """
  return Config(
    n=31,
    dmax=4,
    out=str(tmp_path / "out"),
    timestamp=False,
    threads=1,
    batches=3,
    episodes_per_batch=8,
    epochs=2,
    trials=4,
    realizations=3,
    rates=[0.0, 0.5],
    steps=10,
    topologies=["expo", "ring"],
  )


@pytest.fixture
def mock_context(run_config: Config) -> RunContext:
  """Provide a RunContext rooted in the temporary output directory."""
  return RunContext.create("evaluate", run_config)
