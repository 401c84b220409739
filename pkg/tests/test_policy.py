"""Tests for policy/value networks and the masked softmax."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import pytest
import torch

from ctopo.numtheory import CandidatePool
from ctopo.policy import PolicyNet
from ctopo.policy import ValueNet
from ctopo.policy import episode_features
from ctopo.policy import is_finite
from ctopo.policy import masked_log_softmax
from ctopo.policy import masked_softmax
from ctopo.policy import policy_logits
from ctopo.policy import step_features
from ctopo.policy import value_loss
from ctopo.policy import value_predict
from ctopo.validators import ValidationError

GradientCheck = Callable[[torch.nn.Module, Callable[[], torch.Tensor]], None]


def test_toy_pool_orders(toy_pool: CandidatePool) -> None:
  """Test the fixture pool used throughout: ω = [0.1, 1, 0.5, 0.5, 0.5]."""
  assert toy_pool.candidates == (1, 2, 3, 4, 5)
  np.testing.assert_allclose(toy_pool.normalized_orders, [0.1, 1.0, 0.5, 0.5, 0.5])


def test_step_features(toy_pool: CandidatePool) -> None:
  """Test [ω, i/|C|, t/K] rows and the step range check."""
  x = step_features(toy_pool, 1, 2)
  assert x.shape == (5, 3)
  np.testing.assert_allclose(x[:, 1], [0.0, 0.2, 0.4, 0.6, 0.8])
  np.testing.assert_allclose(x[:, 2], 0.5)
  with pytest.raises(ValidationError):
    step_features(toy_pool, 0, 2)
  with pytest.raises(ValidationError):
    step_features(toy_pool, 3, 2)
  stacked = episode_features(toy_pool, 3)
  assert stacked.shape == (3, 5, 3)
  np.testing.assert_allclose(stacked[2], step_features(toy_pool, 3, 3))


def test_logits_reduce_to_prior_with_zero_network(toy_pool: CandidatePool) -> None:
  """Test s = b2 + η·ω when the network weights are zero."""
  policy = PolicyNet.zeros(hidden=4, eta=2.0, b2=0.5)
  logits = policy_logits(policy, step_features(toy_pool, 1, 2))
  np.testing.assert_allclose(logits, [0.7, 2.5, 1.5, 1.5, 1.5])


def test_batched_logits_match_single_steps(
  toy_pool: CandidatePool, rng: np.random.Generator
) -> None:
  """Test one forward over (K, |C|, 3) equals K separate forwards."""
  policy = PolicyNet.init(6, 1.5, rng)
  batched = policy_logits(policy, episode_features(toy_pool, 3))
  for t in range(1, 4):
    np.testing.assert_allclose(
      batched[t - 1], policy_logits(policy, step_features(toy_pool, t, 3)), atol=1e-15
    )


def test_seeded_init_is_reproducible() -> None:
  """Test equal numpy seeds give identical weights."""
  a = PolicyNet.init(5, 1.0, np.random.default_rng(3))
  b = PolicyNet.init(5, 1.0, np.random.default_rng(3))
  for pa, pb in zip(a.parameters(), b.parameters(), strict=True):
    assert torch.equal(pa, pb)
  assert float(a.eta) == 1.0


def test_masked_softmax_values() -> None:
  """Test softmax([0, ln 3]) = [1/4, 3/4] and exact zeros under the mask."""
  probs = masked_softmax(np.array([0.0, math.log(3.0)]), np.array([False, False]))
  np.testing.assert_allclose(probs, [0.25, 0.75])

  probs = masked_softmax(np.array([5.0, 0.0, math.log(3.0)]), np.array([True, False, False]))
  assert probs[0] == 0.0
  np.testing.assert_allclose(probs[1:], [0.25, 0.75])
  assert probs.sum() == pytest.approx(1.0)


def test_masked_softmax_large_logits_stay_finite() -> None:
  """Test the max-shift keeps huge logits finite."""
  probs = masked_softmax(np.array([1000.0, 1001.0]), np.zeros(2, dtype=bool))
  assert np.all(np.isfinite(probs))
  assert probs[1] > probs[0]


def test_masked_softmax_rejects_full_mask() -> None:
  """Test that masking every candidate raises."""
  with pytest.raises(ValidationError):
    masked_softmax(np.zeros(3), np.ones(3, dtype=bool))
  with pytest.raises(ValidationError):
    masked_log_softmax(torch.zeros(2, 3), torch.tensor([[False, True, True], [True] * 3]))


def test_masked_log_softmax_matches_numpy() -> None:
  """Test the differentiable version agrees with masked_softmax."""
  logits = np.array([5.0, 0.0, math.log(3.0), -1.0])
  mask = np.array([True, False, False, True])
  selected = torch.from_numpy(mask)
  log_probs = masked_log_softmax(torch.from_numpy(logits), selected)
  assert torch.isinf(log_probs[selected]).all()
  np.testing.assert_allclose(log_probs.exp().numpy(), masked_softmax(logits, mask))


def test_eta_increases_high_order_probability(toy_pool: CandidatePool) -> None:
  """Test that raising η moves probability towards the highest-order candidate."""
  x = step_features(toy_pool, 1, 2)
  mask = np.zeros(5, dtype=bool)
  previous = 0.0
  for eta in (0.0, 1.0, 3.0, 10.0):
    probs = masked_softmax(policy_logits(PolicyNet.zeros(4, eta), x), mask)
    assert probs[1] > previous
    previous = probs[1]
  flat = masked_softmax(policy_logits(PolicyNet.zeros(4, 0.0), x), mask)
  np.testing.assert_allclose(flat, 0.2)


def test_network_validation() -> None:
  """Test negative η and an empty hidden layer are rejected."""
  with pytest.raises(ValidationError):
    PolicyNet.zeros(4, -0.1)
  with pytest.raises(ValidationError):
    PolicyNet(0, 1.0)
  with pytest.raises(ValidationError):
    ValueNet(0)


def test_eta_is_not_a_trainable_parameter() -> None:
  """Test η is a buffer, so optimizers built from parameters() skip it."""
  policy = PolicyNet.zeros(3, eta=1.25)
  names = {name for name, _ in policy.named_parameters()}
  assert names == {
    "hidden_layer.weight",
    "hidden_layer.bias",
    "output_layer.weight",
    "output_layer.bias",
  }
  assert "eta" in dict(policy.named_buffers())


def test_logit_gradients_match_finite_differences(
  toy_pool: CandidatePool, rng: np.random.Generator, gradient_check: GradientCheck
) -> None:
  """Test autograd gradients of c·s against central differences."""
  policy = PolicyNet.init(6, 1.5, rng)
  with torch.no_grad():
    policy.output_layer.weight.copy_(torch.from_numpy(rng.normal(0.0, 0.5, size=(1, 6))))
    policy.hidden_layer.bias.copy_(torch.from_numpy(rng.normal(0.0, 0.3, size=6)))
  x = torch.from_numpy(step_features(toy_pool, 2, 3))
  c = torch.from_numpy(rng.normal(size=5))
  gradient_check(policy, lambda: c @ policy(x))


def test_value_gradients_match_finite_differences(
  rng: np.random.Generator, gradient_check: GradientCheck
) -> None:
  """Test the value MSE gradient against central differences."""
  value = ValueNet.init(5, rng)
  with torch.no_grad():
    value.output_layer.weight.copy_(torch.from_numpy(rng.normal(0.0, 0.5, size=(1, 5))))
  inputs = rng.uniform(-1.0, 1.0, size=(7, 2))
  targets = rng.normal(size=7)
  gradient_check(value, lambda: value_loss(value, inputs, targets))


def test_value_predict_matches_forward(rng: np.random.Generator) -> None:
  """Test the numpy helper returns one estimate per row."""
  value = ValueNet.init(4, rng)
  inputs = rng.uniform(size=(3, 2))
  out = value_predict(value, inputs)
  assert out.shape == (3,)
  with torch.no_grad():
    np.testing.assert_allclose(out, value(torch.from_numpy(inputs)).numpy())
  assert value_predict(value, np.array([0.5, -1.0])).shape == (1,)


def test_adam_fits_value_network(rng: np.random.Generator) -> None:
  """Test that repeated Adam steps fit the value network to constant targets."""
  value = ValueNet.init(8, rng)
  inputs = rng.uniform(0.0, 1.0, size=(16, 2))
  targets = np.full(16, -3.0)
  opt = torch.optim.Adam(value.parameters(), lr=0.05)
  first = float(value_loss(value, inputs, targets))
  for _ in range(200):
    opt.zero_grad()
    value_loss(value, inputs, targets).backward()
    opt.step()
  assert float(value_loss(value, inputs, targets)) < 0.1 * first
  assert is_finite(value)


def test_is_finite_flags_nan() -> None:
  """Test a NaN weight is detected."""
  policy = PolicyNet.zeros(2, 1.0)
  assert is_finite(policy)
  with torch.no_grad():
    policy.output_layer.bias.fill_(math.nan)
  assert not is_finite(policy)
