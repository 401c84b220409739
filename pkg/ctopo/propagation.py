"""Parameter-free message-propagation connectivity score g(S)."""

from __future__ import annotations

import numpy as np

from .cayley import GeneratorSet

ROUNDS = 2


def node_features(n: int) -> np.ndarray:
  """Initial features: row i = [cos(2πi/N), sin(2πi/N), 1]."""
  angles = 2.0 * np.pi * np.arange(n, dtype=np.float64) / n
  return np.column_stack([np.cos(angles), np.sin(angles), np.ones(n)])


def variance_per_channel(features: np.ndarray) -> np.ndarray:
  """
  Population variance (divide by N) of every column.

  Constant columns report exactly 0.

  Args:
      features: Matrix of shape (N, C), N >= 1.

  Returns:
      np.ndarray: C variances.
  """
  x = np.asarray(features, dtype=np.float64)
  if x.ndim == 1:
    x = x[:, None]
  var = x.var(axis=0)
  return np.where(np.ptp(x, axis=0) == 0, 0.0, var)


def propagate(gs: GeneratorSet, x: np.ndarray) -> np.ndarray:
  """
  One application of Â = D̃^{-1/2}(A+I)D̃^{-1/2} to x.

  The graph is regular, so Â averages each closed neighborhood over Δ+1 rows.
  Neighbor terms are accumulated in the fixed step order for every row.

  Args:
      gs: Generator set defining A.
      x: Matrix of shape (N, C).

  Returns:
      np.ndarray: Â x.
  """
  n = gs.modulus
  steps = gs.steps()
  if steps.size + 1 == n:
    # Closed neighborhoods are the whole vertex set: every row is the column mean
    return np.broadcast_to(x.mean(axis=0), x.shape).copy()
  acc = x.copy()
  for s in steps:
    # row i receives x[(i + s) mod N]
    acc += np.roll(x, -int(s), axis=0)
  return acc / (steps.size + 1)


def propagation_score(gs: GeneratorSet, features: np.ndarray | None = None) -> float:
  """
  Connectivity score g = −Σ_j Var(X^(2)[:, j]) with X^(k+1) = tanh(Â X^(k)).

  Works on disconnected sets too; better-mixing graphs score closer to 0.

  Args:
      gs: Generator set.
      features: Optional initial matrix (defaults to node_features(N)).

  Returns:
      float: g(S) <= 0.
  """
  x = node_features(gs.modulus) if features is None else np.asarray(features, float)
  for _ in range(ROUNDS):
    x = np.tanh(propagate(gs, x))
  return -float(variance_per_channel(x).sum())
