"""Run configuration: flat key = value files with environment interpolation."""

from __future__ import annotations

import dataclasses
import logging
import os
import re
import types
import typing
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any

from .constants import BIAS_RANDOM
from .constants import BROADCAST_COLLISION
from .constants import BROADCAST_Q_PERSISTENT
from .constants import DEFAULT_BATCHES
from .constants import DEFAULT_BRUTEFORCE_CAP
from .constants import DEFAULT_CLIP
from .constants import DEFAULT_DMAX
from .constants import DEFAULT_EPISODES_PER_BATCH
from .constants import DEFAULT_EPOCHS
from .constants import DEFAULT_ETA
from .constants import DEFAULT_FAILURE_RATES
from .constants import DEFAULT_GAE_LAMBDA
from .constants import DEFAULT_GAMMA
from .constants import DEFAULT_HIDDEN
from .constants import DEFAULT_INJECT_PROB
from .constants import DEFAULT_LABEL
from .constants import DEFAULT_LAMBDA_G
from .constants import DEFAULT_LAMBDA_OMEGA
from .constants import DEFAULT_LCC_THRESHOLD
from .constants import DEFAULT_LEARNING_RATE
from .constants import DEFAULT_LINK_SUCCESS
from .constants import DEFAULT_LOAD_STEPS
from .constants import DEFAULT_MAX_ROUNDS
from .constants import DEFAULT_REALIZATIONS
from .constants import DEFAULT_SEED
from .constants import DEFAULT_THRESHOLDS
from .constants import DEFAULT_TRIALS
from .constants import POOL_ALL
from .constants import POOL_FILE
from .constants import POOL_PRIMES
from .constants import TOPOLOGY_BROADCAST
from .constants import TOPOLOGY_EXPO
from .constants import TOPOLOGY_FIBONACCI
from .constants import TOPOLOGY_PRIME
from .ppo import TrainConfig
from .sim.broadcast import BroadcastConfig
from .sim.gossip import GossipConfig
from .sim.load import LoadConfig
from .sim.robustness import FailureConfig
from .validators import ValidationError

logger = logging.getLogger("ctopo.config")

_ENV_VAR_PATTERN = re.compile(r"\${(\w+)(?::-(.*?))?}")
_LINE_PATTERN = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


class ConfigError(ValidationError):
  """Raised for malformed config lines or values that don't fit their key."""


def _interpolate_env_vars(value: str) -> str:
  """
  Substitute ${VAR} and ${VAR:-default} from the environment.

  Unknown variables without a default are left as written.
  """

  def replace(match: re.Match[str]) -> str:
    var_name = match.group(1)
    default_value = match.group(2)
    val = os.getenv(var_name)
    if val is not None:
      return val
    if default_value is not None:
      return default_value
    return match.group(0)

  return _ENV_VAR_PATTERN.sub(replace, value)


def _coerce_scalar(key: str, raw: str, target: Any) -> Any:
  if target is bool:
    lowered = raw.lower()
    if lowered in ("1", "true", "yes", "on"):
      return True
    if lowered in ("0", "false", "no", "off"):
      return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
  if target is int:
    try:
      return int(raw)
    except ValueError as e:
      raise ConfigError(f"{key}: expected an integer, got {raw!r}") from e
  if target is float:
    try:
      return float(raw)
    except ValueError as e:
      raise ConfigError(f"{key}: expected a number, got {raw!r}") from e
  return raw


def _coerce(key: str, raw: str, hint: Any) -> Any:
  """Convert a raw string to the annotated field type (Optional, list, scalar)."""
  origin = typing.get_origin(hint)
  if origin in (typing.Union, types.UnionType):
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    if raw == "":
      return None
    return _coerce(key, raw, args[0])
  if origin is list:
    (item,) = typing.get_args(hint)
    return [_coerce_scalar(key, part.strip(), item) for part in raw.split(",") if part.strip()]
  return _coerce_scalar(key, raw, hint)


def _format_value(value: Any) -> str:
  if value is None:
    return ""
  if isinstance(value, bool):
    return "true" if value else "false"
  if isinstance(value, list | tuple):
    return ", ".join(_format_value(v) for v in value)
  return str(value)


@dataclass
class Config:
  """
  Every key a run can be configured with.

  Attributes:
      n: Agent count N (required by commands that build topologies).
      dmax: Degree budget; the generator budget is K = dmax // 2.
      pool: Candidate pool mode ("all", "primes" or "file").
      pool_file: Candidate list for pool mode "file".
      seed: Master seed.
      out: Root output directory.
      label: Run directory name used instead of a timestamp.
      timestamp: Stamp run directories and CSV headers with the UTC time.
      threads: Worker cap (empty = automatic).
      topologies: Builtin names or generator-set JSON paths to simulate/evaluate.
      lam: Average-order shaping weight λ.
      lam_g: Propagation-score shaping weight λ_g.
      eta: Prior coefficient η.
      clip: PPO clip ratio ε.
      lr: Adam learning rate.
      gamma: Discount γ.
      gae_lambda: GAE parameter.
      episodes_per_batch: Episodes per PPO batch.
      epochs: Update epochs per batch.
      batches: Training batches.
      hidden: Hidden width H.
      entropy_coef: Entropy bonus weight.
      log_every: Training progress period in batches.
      link_success: Gossip per-link success probability.
      max_rounds: Gossip round cap.
      trials: Gossip trials per topology.
      thresholds: Coverage thresholds.
      source: Gossip source vertex (empty = random per trial).
      rates: Link-failure rates.
      realizations: Damaged graphs per rate.
      bias_mode: Removal mode for damaged-graph gossip ("random" or "distance").
      lcc_threshold: LCC share for Pr80.
      steps: Communication-load steps.
      inject_prob: Per-agent message origination probability per step.
      inject_until: Last step with new messages (empty = all).
      load_link_success: Delivery probability of a used link.
      broadcast_always_on: Broadcast agents transmit every step.
      broadcast_mode: "collision" or "complete".
      broadcast_q: Collision contention, "persistent" or "adaptive".
      bruteforce_cap: Largest subset count the exhaustive search accepts.
  """

  n: int | None = None
  dmax: int = DEFAULT_DMAX
  pool: str = POOL_ALL
  pool_file: str | None = None
  seed: int = DEFAULT_SEED
  out: str = "out"
  label: str = DEFAULT_LABEL
  timestamp: bool = True
  threads: int | None = None
  topologies: list[str] = field(
    default_factory=lambda: [
      TOPOLOGY_EXPO,
      TOPOLOGY_FIBONACCI,
      TOPOLOGY_PRIME,
      TOPOLOGY_BROADCAST,
    ]
  )

  # Optimizer
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
  hidden: int = DEFAULT_HIDDEN
  entropy_coef: float = 0.0
  log_every: int = 10

  # Gossip
  link_success: float = DEFAULT_LINK_SUCCESS
  max_rounds: int = DEFAULT_MAX_ROUNDS
  trials: int = DEFAULT_TRIALS
  thresholds: list[float] = field(default_factory=lambda: list(DEFAULT_THRESHOLDS))
  source: int | None = 0

  # Link failures
  rates: list[float] = field(default_factory=lambda: list(DEFAULT_FAILURE_RATES))
  realizations: int = DEFAULT_REALIZATIONS
  bias_mode: str = BIAS_RANDOM
  lcc_threshold: float = DEFAULT_LCC_THRESHOLD

  # Communication load
  steps: int = DEFAULT_LOAD_STEPS
  inject_prob: float = DEFAULT_INJECT_PROB
  inject_until: int | None = None
  load_link_success: float = 1.0
  broadcast_always_on: bool = True

  # Broadcast baseline
  broadcast_mode: str = BROADCAST_COLLISION
  broadcast_q: str = BROADCAST_Q_PERSISTENT

  bruteforce_cap: int = DEFAULT_BRUTEFORCE_CAP

  def __post_init__(self) -> None:
    if self.pool not in (POOL_ALL, POOL_PRIMES, POOL_FILE):
      raise ConfigError(f"pool must be one of all, primes, file; got {self.pool!r}")
    if self.dmax < 2:
      raise ConfigError(f"dmax must be >= 2 so that K >= 1, got {self.dmax}")
    if self.n is not None and self.n < 3:
      raise ConfigError(f"n must be >= 3, got {self.n}")

  @property
  def k(self) -> int:
    """Generator budget K = floor(dmax / 2)."""
    return self.dmax // 2

  @classmethod
  def field_types(cls) -> dict[str, Any]:
    hints = typing.get_type_hints(cls)
    return {f.name: hints[f.name] for f in dataclasses.fields(cls)}

  @classmethod
  def from_mapping(cls, raw: dict[str, str]) -> Config:
    """
    Build a Config from raw string values, ignoring unknown keys.

    Raises:
        ConfigError: If a value doesn't parse as its key's type.
    """
    types_ = cls.field_types()
    values: dict[str, Any] = {}
    for key, text in raw.items():
      if key not in types_:
        logger.warning(f"Ignoring unknown config key: {key}")
        continue
      values[key] = _coerce(key, _interpolate_env_vars(text), types_[key])
    return cls(**values)

  @classmethod
  def load_from_file(cls, path: Path) -> Config:
    """
    Load configuration from a key = value file.

    Blank lines and lines starting with # are skipped; a value may reference
    ${VAR} or ${VAR:-default}.

    Args:
        path: Path to the config file.

    Returns:
        Config: Loaded configuration instance.

    Raises:
        FileNotFoundError: If config file doesn't exist.
        ConfigError: On malformed lines or values.
    """
    if not path.exists():
      raise FileNotFoundError(f"Config file not found: {path}")
    raw: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
      stripped = line.strip()
      if not stripped or stripped.startswith("#"):
        continue
      match = _LINE_PATTERN.match(stripped)
      if match is None:
        raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
      raw[match.group(1)] = match.group(2)
    return cls.from_mapping(raw)

  def with_overrides(self, **overrides: Any) -> Config:
    """Return a copy with every non-None override applied."""
    present = {k: v for k, v in overrides.items() if v is not None}
    return dataclasses.replace(self, **present)

  def to_lines(self) -> list[str]:
    return [
      f"{key} = {_format_value(value)}"
      for key, value in sorted(dataclasses.asdict(self).items())
    ]

  def save_to_file(self, path: Path) -> Path:
    """
    Save configuration as sorted key = value lines.

    Raises:
        OSError: If file cannot be written.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(self.to_lines()) + "\n", encoding="utf-8")
    return path

  def require_n(self) -> int:
    if self.n is None:
      raise ConfigError("N is required (--n or config key 'n')")
    return self.n

  def train_config(self) -> TrainConfig:
    return TrainConfig(
      k=self.k,
      lam=self.lam,
      lam_g=self.lam_g,
      eta=self.eta,
      clip=self.clip,
      lr=self.lr,
      gamma=self.gamma,
      gae_lambda=self.gae_lambda,
      episodes_per_batch=self.episodes_per_batch,
      epochs=self.epochs,
      batches=self.batches,
      seed=self.seed,
      hidden=self.hidden,
      entropy_coef=self.entropy_coef,
      threads=self.threads,
      log_every=self.log_every,
    )

  def gossip_config(self) -> GossipConfig:
    return GossipConfig(
      link_success=self.link_success,
      max_rounds=self.max_rounds,
      trials=self.trials,
      thresholds=tuple(self.thresholds),
      source=self.source,
    )

  def failure_config(self) -> FailureConfig:
    return FailureConfig(
      rates=tuple(self.rates),
      realizations=self.realizations,
      bias_mode=self.bias_mode,
      lcc_threshold=self.lcc_threshold,
    )

  def load_config(self) -> LoadConfig:
    return LoadConfig(
      inject_prob=self.inject_prob,
      inject_until=self.inject_until,
      link_success=self.load_link_success,
      broadcast_always_on=self.broadcast_always_on,
    )

  def broadcast_config(self) -> BroadcastConfig:
    return BroadcastConfig(mode=self.broadcast_mode, contention=self.broadcast_q)
