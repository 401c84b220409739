"""Policy and value networks (torch modules) and the masked softmax over candidates."""

from __future__ import annotations

import numpy as np
import torch
import torch.nn.functional as F
from torch import nn

from .numtheory import CandidatePool
from .validators import ValidationError

FEATURES = 3
VALUE_INPUTS = 2

# Gradient checks at h=1e-5 need double precision end to end
DTYPE = torch.float64


class PolicyNet(nn.Module):
  """
  Two-layer logit network s = W2·tanh(W1·x + b1) + b2 + η·ω.

  η is registered as a buffer, so optimizers built from parameters() never
  move it.

  Attributes:
      hidden_layer: W1, b1 with shape (H, 3).
      output_layer: W2, b2 with shape (1, H).
      eta: Fixed prior coefficient η >= 0.
  """

  eta: torch.Tensor

  def __init__(self, hidden: int, eta: float) -> None:
    super().__init__()
    if hidden < 1:
      raise ValidationError(f"hidden must be >= 1, got {hidden}")
    if eta < 0:
      raise ValidationError(f"eta must be >= 0, got {eta}")
    self.hidden_layer = nn.Linear(FEATURES, hidden, dtype=DTYPE)
    self.output_layer = nn.Linear(hidden, 1, dtype=DTYPE)
    self.register_buffer("eta", torch.tensor(eta, dtype=DTYPE))

  @property
  def hidden(self) -> int:
    return self.hidden_layer.out_features

  def forward(self, features: torch.Tensor) -> torch.Tensor:
    """Logits for feature rows of shape (..., |C|, 3); returns shape (..., |C|)."""
    hidden = torch.tanh(self.hidden_layer(features))
    return self.output_layer(hidden).squeeze(-1) + self.eta * features[..., 0]

  @classmethod
  def init(cls, hidden: int, eta: float, rng: np.random.Generator) -> PolicyNet:
    """Seeded small weights; the initial policy is close to the η·ω prior."""
    net = cls(hidden, eta)
    with torch.no_grad():
      net.hidden_layer.weight.copy_(
        torch.from_numpy(rng.normal(0.0, 1.0 / np.sqrt(FEATURES), size=(hidden, FEATURES)))
      )
      net.hidden_layer.bias.zero_()
      net.output_layer.weight.copy_(torch.from_numpy(rng.normal(0.0, 0.01, size=(1, hidden))))
      net.output_layer.bias.zero_()
    return net

  @classmethod
  def zeros(cls, hidden: int, eta: float, b2: float = 0.0) -> PolicyNet:
    net = cls(hidden, eta)
    with torch.no_grad():
      for param in net.parameters():
        param.zero_()
      net.output_layer.bias.fill_(b2)
    return net


class ValueNet(nn.Module):
  """Value MLP v = V2·tanh(V1·[ω, g] + c1) + c2."""

  def __init__(self, hidden: int) -> None:
    super().__init__()
    if hidden < 1:
      raise ValidationError(f"hidden must be >= 1, got {hidden}")
    self.hidden_layer = nn.Linear(VALUE_INPUTS, hidden, dtype=DTYPE)
    self.output_layer = nn.Linear(hidden, 1, dtype=DTYPE)

  def forward(self, inputs: torch.Tensor) -> torch.Tensor:
    return self.output_layer(torch.tanh(self.hidden_layer(inputs))).squeeze(-1)

  @classmethod
  def init(cls, hidden: int, rng: np.random.Generator) -> ValueNet:
    net = cls(hidden)
    with torch.no_grad():
      net.hidden_layer.weight.copy_(
        torch.from_numpy(
          rng.normal(0.0, 1.0 / np.sqrt(VALUE_INPUTS), size=(hidden, VALUE_INPUTS))
        )
      )
      net.hidden_layer.bias.zero_()
      net.output_layer.weight.copy_(torch.from_numpy(rng.normal(0.0, 0.01, size=(1, hidden))))
      net.output_layer.bias.zero_()
    return net


def is_finite(module: nn.Module) -> bool:
  """True when every parameter (and gradient, if present) is finite."""
  for param in module.parameters():
    if not torch.isfinite(param).all():
      return False
    if param.grad is not None and not torch.isfinite(param.grad).all():
      return False
  return True


def step_features(pool: CandidatePool, t: int, k: int) -> np.ndarray:
  """
  Per-candidate features [ω(p_i), i/|C|, t/K] with 0-based i.

  Args:
      pool: Candidate pool.
      t: Step index, 1 <= t <= K.
      k: Episode length K.

  Returns:
      np.ndarray: Matrix of shape (|C|, 3).

  Raises:
      ValidationError: If t is outside [1, K].
  """
  if not 1 <= t <= k:
    raise ValidationError(f"Step {t} outside [1, {k}]")
  size = len(pool)
  return np.column_stack(
    [
      pool.normalized_orders,
      np.arange(size, dtype=np.float64) / size,
      np.full(size, t / k),
    ]
  )


def episode_features(pool: CandidatePool, k: int) -> np.ndarray:
  """step_features for t = 1..K stacked into shape (K, |C|, 3)."""
  return np.stack([step_features(pool, t, k) for t in range(1, k + 1)])


def policy_logits(policy: PolicyNet, features: np.ndarray) -> np.ndarray:
  """Per-candidate logits s_i = W2·tanh(W1·x_i + b1) + b2 + η·ω(p_i)."""
  x = torch.from_numpy(np.ascontiguousarray(features, dtype=np.float64))
  with torch.no_grad():
    logits: np.ndarray = policy(x).numpy()
  return logits


def masked_softmax(logits: np.ndarray, selected: np.ndarray) -> np.ndarray:
  """
  Softmax over unselected entries, exact zeros on selected ones.

  Args:
      logits: Scores, shape (|C|,).
      selected: Boolean mask, True for already chosen candidates.

  Returns:
      np.ndarray: Probabilities summing to 1 over the unmasked entries.

  Raises:
      ValidationError: If every entry is masked.
  """
  open_ = ~np.asarray(selected, dtype=bool)
  if not open_.any():
    raise ValidationError("All candidates are masked")
  shifted = np.where(open_, logits - logits[open_].max(), -np.inf)
  weights = np.exp(shifted)
  return weights / weights.sum()


def masked_log_softmax(logits: torch.Tensor, selected: torch.Tensor) -> torch.Tensor:
  """
  Differentiable log-probabilities over the last axis; selected entries get -inf.

  Raises:
      ValidationError: If some row has every entry masked.
  """
  if bool(selected.all(dim=-1).any()):
    raise ValidationError("All candidates are masked")
  return F.log_softmax(logits.masked_fill(selected, -torch.inf), dim=-1)


def value_predict(value: ValueNet, inputs: np.ndarray) -> np.ndarray:
  """Value estimates for rows [ω, g], shape (M, 2) -> (M,)."""
  x = torch.from_numpy(np.ascontiguousarray(np.atleast_2d(inputs), dtype=np.float64))
  with torch.no_grad():
    values: np.ndarray = value(x).numpy()
  return values


def value_loss(value: ValueNet, inputs: np.ndarray, targets: np.ndarray) -> torch.Tensor:
  """Mean squared error of value estimates against returns-to-go."""
  x = torch.from_numpy(np.ascontiguousarray(np.atleast_2d(inputs), dtype=np.float64))
  y = torch.from_numpy(np.ascontiguousarray(targets, dtype=np.float64))
  return F.mse_loss(value(x), y)
