"""PPO search over generator sets: rollouts, GAE, clipped updates, training loop."""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from pathlib import Path

import numpy as np
import torch

from .cayley import DistanceProfile
from .cayley import GeneratorSet
from .cayley import MetricsCache
from .cayley import bfs_distances
from .cayley import canonicalize
from .constants import DEFAULT_BATCHES
from .constants import DEFAULT_CACHE_SIZE
from .constants import DEFAULT_CLIP
from .constants import DEFAULT_EPISODES_PER_BATCH
from .constants import DEFAULT_EPOCHS
from .constants import DEFAULT_ETA
from .constants import DEFAULT_GAE_LAMBDA
from .constants import DEFAULT_GAMMA
from .constants import DEFAULT_HIDDEN
from .constants import DEFAULT_LAMBDA_G
from .constants import DEFAULT_LAMBDA_OMEGA
from .constants import DEFAULT_LEARNING_RATE
from .constants import DEFAULT_SEED
from .numtheory import CandidatePool
from .policy import PolicyNet
from .policy import ValueNet
from .policy import episode_features
from .policy import is_finite
from .policy import masked_log_softmax
from .policy import masked_softmax
from .policy import policy_logits
from .policy import value_loss
from .policy import value_predict
from .propagation import propagation_score
from .types import HistoryRow
from .utils import derive_rng
from .utils import parallel_map
from .utils import write_csv
from .validators import ValidationError

logger = logging.getLogger("ctopo.ppo")

HISTORY_FIELDS = ("batch", "mean_return", "best_diameter", "best_apl")


class TrainingError(RuntimeError):
  """Raised when an update produces non-finite losses or parameters."""


@dataclass(frozen=True)
class TrainConfig:
  """
  PPO hyperparameters.

  Attributes:
      k: Generator budget K = floor(dmax / 2).
      lam: Weight λ of the average-order shaping term.
      lam_g: Weight λ_g of the propagation-score shaping term.
      eta: Prior coefficient η on ω in the logits.
      clip: PPO clip ratio ε.
      lr: Adam learning rate.
      gamma: Discount γ.
      gae_lambda: GAE parameter λ_GAE.
      episodes_per_batch: Episodes collected before each update.
      epochs: Update epochs per batch.
      batches: Total batches.
      seed: Master seed.
      hidden: Hidden width H of both networks.
      entropy_coef: Optional entropy bonus weight.
      threads: Rollout worker cap (None = automatic).
      log_every: INFO progress line period in batches.
  """

  k: int
  lam: float = DEFAULT_LAMBDA_OMEGA
  lam_g: float = DEFAULT_LAMBDA_G
  eta: float = DEFAULT_ETA
  clip: float = DEFAULT_CLIP
  lr: float = DEFAULT_LEARNING_RATE
  gamma: float = DEFAULT_GAMMA
  gae_lambda: float = DEFAULT_GAE_LAMBDA
  episodes_per_batch: int = DEFAULT_EPISODES_PER_BATCH
  epochs: int = DEFAULT_EPOCHS
  batches: int = DEFAULT_BATCHES
  seed: int = DEFAULT_SEED
  hidden: int = DEFAULT_HIDDEN
  entropy_coef: float = 0.0
  threads: int | None = None
  log_every: int = 10

  def __post_init__(self) -> None:
    if self.k < 1:
      raise ValidationError(f"K must be >= 1, got {self.k}")
    if not 0 < self.clip < 1:
      raise ValidationError(f"clip must lie in (0, 1), got {self.clip}")
    if not 0 < self.gamma <= 1:
      raise ValidationError(f"gamma must lie in (0, 1], got {self.gamma}")
    if not 0 <= self.gae_lambda <= 1:
      raise ValidationError(f"gae_lambda must lie in [0, 1], got {self.gae_lambda}")
    if self.eta < 0:
      raise ValidationError(f"eta must be >= 0, got {self.eta}")
    for name in ("episodes_per_batch", "epochs", "batches", "hidden", "log_every"):
      if getattr(self, name) < 1:
        raise ValidationError(f"{name} must be >= 1, got {getattr(self, name)}")
    if self.lr <= 0:
      raise ValidationError(f"lr must be > 0, got {self.lr}")


class TopologyMetrics:
  """Metric caches shared by rollout workers, keyed on canonical generator sets."""

  def __init__(self, maxsize: int = DEFAULT_CACHE_SIZE) -> None:
    self.profiles: MetricsCache[GeneratorSet, DistanceProfile] = MetricsCache(maxsize)
    self.scores: MetricsCache[GeneratorSet, float] = MetricsCache(maxsize)

  def profile(self, gs: GeneratorSet) -> DistanceProfile:
    return self.profiles.get_or_compute(gs, bfs_distances)

  def score(self, gs: GeneratorSet) -> float:
    return self.scores.get_or_compute(gs, propagation_score)

  def key(self, gs: GeneratorSet) -> tuple[int | float, Fraction | float]:
    """Lexicographic (diameter, average path length) ranking key."""
    profile = self.profile(gs)
    return profile.diameter, profile.avg_path_length


@dataclass(frozen=True, eq=False)
class EpisodeTrace:
  """
  One episode of K selections.

  Attributes:
      final: Generator set S+_K.
      actions: Chosen candidate indices a_1..a_K (distinct).
      log_probs: log π_t(a_t) under the behavior policy.
      rewards: Shaped rewards r_t (r_K includes −D).
      values: Value estimates v_t of the state before each action.
      omegas: Running average orders ω_1..ω_K.
      scores: Running propagation scores g(S+_1)..g(S+_K).
      diameter: D(S+_K); math.inf if disconnected.
      penalty: The diameter term actually charged (N when disconnected).
  """

  final: GeneratorSet
  actions: tuple[int, ...]
  log_probs: np.ndarray
  rewards: np.ndarray
  values: np.ndarray
  omegas: np.ndarray
  scores: np.ndarray
  diameter: int | float
  penalty: int

  @property
  def k(self) -> int:
    return len(self.actions)

  @property
  def total_return(self) -> float:
    return float(self.rewards.sum())

  def value_inputs(self) -> np.ndarray:
    """Rows [ω_{t−1}, g(S+_{t−1})] fed to the value network, shape (K, 2)."""
    return previous_states(self.omegas, self.scores)


def previous_states(omegas: np.ndarray, scores: np.ndarray) -> np.ndarray:
  """Decision-time states [ω_{t−1}, g_{t−1}] with ω_0 = g_0 = 0."""
  prev_omega = np.concatenate([[0.0], omegas[:-1]])
  prev_score = np.concatenate([[0.0], scores[:-1]])
  return np.column_stack([prev_omega, prev_score])


@dataclass(frozen=True)
class UpdateDiagnostics:
  surrogate: float
  value_loss: float
  approx_kl: float
  clip_fraction: float
  entropy: float


@dataclass(frozen=True, eq=False)
class UpdateResult:
  policy: PolicyNet
  value: ValueNet
  diagnostics: UpdateDiagnostics


@dataclass(frozen=True)
class BatchRecord:
  batch: int
  mean_return: float
  best_diameter: int | float
  best_apl: float
  diagnostics: UpdateDiagnostics | None = None

  def to_row(self) -> HistoryRow:
    return {
      "batch": self.batch,
      "mean_return": self.mean_return,
      "best_diameter": float(self.best_diameter),
      "best_apl": self.best_apl,
    }


@dataclass(eq=False)
class TrainResult:
  """
  Outcome of train().

  Attributes:
      best: Best-ever generator set by (diameter, average path length).
      best_diameter: Its diameter.
      best_apl: Its average path length (exact).
      history: One record per batch.
      policy: Final policy network.
      value: Final value network.
      episodes: Episodes rolled out.
  """

  best: GeneratorSet
  best_diameter: int | float
  best_apl: Fraction | float
  history: list[BatchRecord] = field(default_factory=list)
  policy: PolicyNet | None = None
  value: ValueNet | None = None
  episodes: int = 0

  def history_rows(self) -> list[HistoryRow]:
    return [record.to_row() for record in self.history]

  def write_history_csv(self, path: Path, header_comment: str | None = None) -> Path:
    return write_csv(path, self.history_rows(), HISTORY_FIELDS, header_comment)


def step_logits(policy: PolicyNet, pool: CandidatePool, k: int) -> np.ndarray:
  """
  Logits for every step, shape (K, |C|).

  Features depend only on the step index, so one row serves every episode of a
  batch; the state enters through the mask.
  """
  return policy_logits(policy, episode_features(pool, k))


def rollout_episode(
  policy: PolicyNet,
  value: ValueNet,
  pool: CandidatePool,
  k: int,
  rng: np.random.Generator,
  *,
  lam: float = DEFAULT_LAMBDA_OMEGA,
  lam_g: float = DEFAULT_LAMBDA_G,
  metrics: TopologyMetrics | None = None,
  logits: np.ndarray | None = None,
) -> EpisodeTrace:
  """
  Sample K distinct generators and record shaped rewards.

  r_t = λ(ω_t − ω_{t−1}) + λ_g(g_t − g_{t−1}) with ω_0 = g_0 = 0, and the final
  step additionally pays −D(S+_K) (N when disconnected).

  Args:
      policy: Behavior policy.
      value: Value network for v_t.
      pool: Candidate pool.
      k: Episode length K.
      rng: Generator owned by this episode.
      lam: λ.
      lam_g: λ_g.
      metrics: Shared metric caches.
      logits: Precomputed step_logits() for this policy.

  Returns:
      EpisodeTrace: The recorded episode.

  Raises:
      ValidationError: If the pool holds fewer than K candidates.
  """
  size = len(pool)
  if size < k:
    raise ValidationError(f"Pool of {size} candidates cannot supply K={k}")
  metrics = metrics or TopologyMetrics()
  if logits is None:
    logits = step_logits(policy, pool, k)
  n = pool.modulus
  omega = pool.normalized_orders
  selected = np.zeros(size, dtype=bool)
  actions: list[int] = []
  log_probs = np.empty(k)
  rewards = np.empty(k)
  omegas = np.empty(k)
  scores = np.empty(k)
  omega_prev = 0.0
  score_prev = 0.0
  gs: GeneratorSet | None = None

  for t in range(k):
    probs = masked_softmax(logits[t], selected)
    action = int(rng.choice(size, p=probs))
    log_probs[t] = math.log(probs[action])
    selected[action] = True
    actions.append(action)

    omegas[t] = float(omega[actions].mean())
    gs = canonicalize(n, [pool.candidates[i] for i in actions])
    scores[t] = metrics.score(gs)
    rewards[t] = lam * (omegas[t] - omega_prev) + lam_g * (scores[t] - score_prev)
    omega_prev, score_prev = omegas[t], scores[t]

  assert gs is not None
  diameter = metrics.profile(gs).diameter
  penalty = int(diameter) if math.isfinite(diameter) else n
  rewards[-1] -= penalty
  return EpisodeTrace(
    final=gs,
    actions=tuple(actions),
    log_probs=log_probs,
    rewards=rewards,
    values=value_predict(value, previous_states(omegas, scores)),
    omegas=omegas,
    scores=scores,
    diameter=diameter,
    penalty=penalty,
  )


def compute_gae(
  trace: EpisodeTrace, gamma: float, gae_lambda: float
) -> tuple[np.ndarray, np.ndarray]:
  """
  Generalized advantage estimates and returns-to-go for one episode.

  δ_t = r_t + γ v_{t+1} − v_t (v_{K+1} = 0), A_t = δ_t + γ λ_GAE A_{t+1},
  R_t = A_t + v_t.

  Returns:
      tuple: (advantages, returns), each of shape (K,).
  """
  rewards = trace.rewards
  values = trace.values
  advantages = np.zeros_like(rewards)
  running = 0.0
  next_value = 0.0
  for t in range(len(rewards) - 1, -1, -1):
    delta = rewards[t] + gamma * next_value - values[t]
    running = delta + gamma * gae_lambda * running
    advantages[t] = running
    next_value = values[t]
  return advantages, advantages + values


def _selection_masks(actions: np.ndarray, size: int) -> np.ndarray:
  """Masks before each step: masks[t, b] marks actions[b, :t], shape (K, B, |C|)."""
  batch, k = actions.shape
  masks = np.zeros((k, batch, size), dtype=bool)
  rows = np.arange(batch)
  for t in range(1, k):
    masks[t] = masks[t - 1]
    masks[t, rows, actions[:, t - 1]] = True
  return masks


def _by_step(values: np.ndarray) -> torch.Tensor:
  """(B, K) batch-major array as a (K, B) tensor."""
  return torch.from_numpy(np.ascontiguousarray(np.asarray(values).T))


def surrogate_objective(
  policy: PolicyNet,
  pool: CandidatePool,
  actions: np.ndarray,
  advantages: np.ndarray,
  old_log_probs: np.ndarray,
  clip: float | None = None,
  entropy_coef: float = 0.0,
) -> tuple[torch.Tensor, dict[str, float]]:
  """
  PPO objective over a batch, differentiable in the policy parameters.

  J = mean_{b,t} min(ρ A, clip(ρ, 1−ε, 1+ε) A) + c_H · mean entropy, with
  ρ = π_θ(a)/π_old(a). clip=None gives the unclipped surrogate mean(ρ A).

  Args:
      policy: Current policy θ.
      pool: Candidate pool.
      actions: (B, K) chosen indices.
      advantages: (B, K) advantages.
      old_log_probs: (B, K) behavior log-probabilities.
      clip: ε, or None for the unclipped objective.
      entropy_coef: Entropy bonus weight c_H.

  Returns:
      tuple: (scalar objective tensor, stats with approx_kl/clip_fraction/entropy).
  """
  actions = np.asarray(actions, dtype=np.int64)
  batch, k = actions.shape
  size = len(pool)
  masks = torch.from_numpy(_selection_masks(actions, size))
  features = torch.from_numpy(episode_features(pool, k))

  logits = policy(features)
  log_probs = masked_log_softmax(logits[:, None, :].expand(k, batch, size), masks)
  chosen = _by_step(actions)
  new_logp = log_probs.gather(-1, chosen.unsqueeze(-1)).squeeze(-1)
  log_ratio = new_logp - _by_step(np.asarray(old_log_probs, dtype=np.float64))
  ratio = torch.exp(log_ratio)
  adv = _by_step(np.asarray(advantages, dtype=np.float64))

  unclipped = ratio * adv
  if clip is None:
    objective = unclipped.mean()
  else:
    objective = torch.min(unclipped, torch.clamp(ratio, 1.0 - clip, 1.0 + clip) * adv).mean()

  # Masked entries carry log π = -inf; zero them before weighting by π = 0
  probs = log_probs.exp()
  safe_log_probs = torch.where(masks, torch.zeros_like(log_probs), log_probs)
  entropy = -(probs * safe_log_probs).sum(dim=-1)
  if entropy_coef:
    objective = objective + entropy_coef * entropy.mean()

  with torch.no_grad():
    stats = {
      "approx_kl": float((ratio - 1.0 - log_ratio).mean()),
      "clip_fraction": 0.0 if clip is None else float(((ratio - 1.0).abs() > clip).double().mean()),
      "entropy": float(entropy.mean()),
    }
  return objective, stats


def ppo_update(
  policy: PolicyNet,
  value: ValueNet,
  traces: Sequence[EpisodeTrace],
  config: TrainConfig,
  pool: CandidatePool,
  policy_opt: torch.optim.Optimizer | None = None,
  value_opt: torch.optim.Optimizer | None = None,
) -> UpdateResult:
  """
  Clipped-surrogate PPO update of both networks on one batch of episodes.

  The networks are updated in place. Advantages are normalized to zero mean and
  unit variance across the batch (left as-is when their spread is zero).

  Args:
      policy: Current policy.
      value: Current value network.
      traces: Complete episodes collected with `policy`.
      config: Hyperparameters.
      pool: Candidate pool the episodes were drawn from.
      policy_opt: Optimizer carried across batches (fresh Adam if None).
      value_opt: Optimizer carried across batches (fresh Adam if None).

  Returns:
      UpdateResult: The updated networks and diagnostics.

  Raises:
      ValidationError: On an empty batch.
      TrainingError: On non-finite losses, gradients or parameters.
  """
  if not traces:
    raise ValidationError("ppo_update needs at least one episode")
  if policy_opt is None:
    policy_opt = torch.optim.Adam(policy.parameters(), lr=config.lr)
  if value_opt is None:
    value_opt = torch.optim.Adam(value.parameters(), lr=config.lr)

  gae = [compute_gae(tr, config.gamma, config.gae_lambda) for tr in traces]
  advantages = np.stack([a for a, _ in gae])
  returns = np.stack([r for _, r in gae]).reshape(-1)
  spread = advantages.std()
  if advantages.size > 1 and spread > 1e-12:
    advantages = (advantages - advantages.mean()) / spread
  actions = np.array([tr.actions for tr in traces], dtype=np.int64)
  old_log_probs = np.stack([tr.log_probs for tr in traces])
  value_inputs = np.concatenate([tr.value_inputs() for tr in traces])

  surrogate = critic_loss = 0.0
  stats: dict[str, float] = {}
  for _ in range(config.epochs):
    objective, stats = surrogate_objective(
      policy,
      pool,
      actions,
      advantages,
      old_log_probs,
      clip=config.clip,
      entropy_coef=config.entropy_coef,
    )
    loss = value_loss(value, value_inputs, returns)
    surrogate, critic_loss = float(objective), float(loss)
    if not (math.isfinite(surrogate) and math.isfinite(critic_loss)):
      raise TrainingError(
        f"Non-finite loss: surrogate={surrogate}, value_loss={critic_loss}"
      )

    policy_opt.zero_grad()
    (-objective).backward()
    if not is_finite(policy):
      raise TrainingError("Non-finite policy gradient")
    policy_opt.step()

    value_opt.zero_grad()
    loss.backward()
    value_opt.step()
    if not (is_finite(policy) and is_finite(value)):
      raise TrainingError("Non-finite parameters after update")

  return UpdateResult(
    policy=policy,
    value=value,
    diagnostics=UpdateDiagnostics(
      surrogate=surrogate,
      value_loss=critic_loss,
      approx_kl=stats.get("approx_kl", 0.0),
      clip_fraction=stats.get("clip_fraction", 0.0),
      entropy=stats.get("entropy", 0.0),
    ),
  )


def collect_batch(
  policy: PolicyNet,
  value: ValueNet,
  pool: CandidatePool,
  config: TrainConfig,
  batch: int,
  metrics: TopologyMetrics,
) -> list[EpisodeTrace]:
  """
  Roll out one batch of episodes across worker threads.

  Episode e of batch b draws from derive_rng(seed, 2, b, e), so the batch is
  identical for any thread count.
  """
  logits = step_logits(policy, pool, config.k)

  def run_episode(index: int) -> EpisodeTrace:
    return rollout_episode(
      policy,
      value,
      pool,
      config.k,
      derive_rng(config.seed, 2, batch, index),
      lam=config.lam,
      lam_g=config.lam_g,
      metrics=metrics,
      logits=logits,
    )

  return parallel_map(run_episode, range(config.episodes_per_batch), config.threads)


def train(
  n: int,
  pool: CandidatePool,
  config: TrainConfig,
  metrics: TopologyMetrics | None = None,
  on_batch: Callable[[BatchRecord], None] | None = None,
) -> TrainResult:
  """
  Search for a low-diameter generator set of size K with PPO.

  The best-ever set is tracked by (diameter, average path length); the first
  set reaching a key wins ties, so results are reproducible under a fixed seed.

  Args:
      n: Agent count N (must equal pool.modulus).
      pool: Candidate pool.
      config: Hyperparameters (config.k is the budget K).
      metrics: Shared metric caches (fresh if None).
      on_batch: Optional callback per finished batch.

  Returns:
      TrainResult: Best set, its metrics and the per-batch history.

  Raises:
      ValidationError: If the pool does not match N or holds fewer than K candidates.
      TrainingError: If an update diverges.
  """
  if pool.modulus != n:
    raise ValidationError(f"Pool modulus {pool.modulus} does not match N={n}")
  k = config.k
  if len(pool) < k:
    raise ValidationError(f"Pool of {len(pool)} candidates cannot supply K={k}")
  metrics = metrics or TopologyMetrics()

  policy = PolicyNet.init(config.hidden, config.eta, derive_rng(config.seed, 0))
  value = ValueNet.init(config.hidden, derive_rng(config.seed, 1))

  if len(pool) == k:
    only = canonicalize(n, pool.candidates)
    d, apl = metrics.key(only)
    logger.info(f"Pool size equals K={k}; the only candidate set is {only.label()}")
    return TrainResult(only, d, apl, policy=policy, value=value)

  policy_opt = torch.optim.Adam(policy.parameters(), lr=config.lr)
  value_opt = torch.optim.Adam(value.parameters(), lr=config.lr)
  best: GeneratorSet | None = None
  best_key: tuple[int | float, Fraction | float] = (math.inf, math.inf)
  history: list[BatchRecord] = []
  episodes = 0
  start = time.time()

  for batch in range(config.batches):
    traces = collect_batch(policy, value, pool, config, batch, metrics)
    episodes += len(traces)

    for trace in traces:
      key = metrics.key(trace.final)
      if best is None or key < best_key:
        best, best_key = trace.final, key

    update = ppo_update(policy, value, traces, config, pool, policy_opt, value_opt)
    policy, value = update.policy, update.value

    record = BatchRecord(
      batch=batch,
      mean_return=float(np.mean([tr.total_return for tr in traces])),
      best_diameter=best_key[0],
      best_apl=float(best_key[1]),
      diagnostics=update.diagnostics,
    )
    history.append(record)
    if on_batch is not None:
      on_batch(record)
    logger.debug(
      f"batch {batch}: mean_return={record.mean_return:.4f} "
      f"surrogate={update.diagnostics.surrogate:.4f} "
      f"value_loss={update.diagnostics.value_loss:.4f} "
      f"kl={update.diagnostics.approx_kl:.5f}"
    )
    if (batch + 1) % config.log_every == 0 or batch + 1 == config.batches:
      logger.info(
        f"batch {batch + 1}/{config.batches}: best D={best_key[0]} "
        f"L={float(best_key[1]):.4f} mean return {record.mean_return:.3f} "
        f"({time.time() - start:.1f}s)"
      )

  assert best is not None
  logger.info(
    f"Training done: {best.label()} D={best_key[0]} after {episodes} episodes "
    f"(cache hits {metrics.profiles.hits}, misses {metrics.profiles.misses})"
  )
  return TrainResult(
    best=best,
    best_diameter=best_key[0],
    best_apl=best_key[1],
    history=history,
    policy=policy,
    value=value,
    episodes=episodes,
  )
