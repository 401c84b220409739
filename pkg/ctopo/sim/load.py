"""Event-driven communication-load accounting per step."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from ..constants import DEFAULT_INJECT_PROB
from ..types import LoadRow
from ..types import LoadSummaryRow
from ..validators import ValidationError
from ..validators import validate_positive
from ..validators import validate_probability
from .broadcast import BroadcastChannel
from .topology import Topology

logger = logging.getLogger("ctopo.sim.load")


@dataclass(frozen=True)
class LoadConfig:
  """
  Message schedule for the load simulation.

  Attributes:
      inject_prob: Per-agent, per-step probability of originating a message.
      inject_until: Last step with injections (None = every step).
      link_success: Delivery probability of a used link (or broadcast receiver).
      origins: Fixed originators of one message each at step 1; replaces the
          random schedule when given.
      broadcast_always_on: Broadcast agents transmit every step (N−1 units each)
          instead of only while holding undelivered messages.
  """

  inject_prob: float = DEFAULT_INJECT_PROB
  inject_until: int | None = None
  link_success: float = 1.0
  origins: tuple[int, ...] | None = None
  broadcast_always_on: bool = True

  def __post_init__(self) -> None:
    validate_probability(self.inject_prob, "inject_prob", allow_zero=True)
    validate_probability(self.link_success, "load_link_success")
    if self.inject_until is not None and self.inject_until < 0:
      raise ValidationError(f"inject_until must be >= 0, got {self.inject_until}")


@dataclass(eq=False)
class LoadSeries:
  """
  Per-step bandwidth units and their summary.

  Attributes:
      topology: Display name.
      per_step: Units used at steps 1..T.
      messages: Messages originated.
      delivered_fraction: Share of (message, agent) pairs delivered at the end.
  """

  topology: str
  per_step: np.ndarray = field(repr=False)
  messages: int = 0
  delivered_fraction: float = 1.0

  @property
  def cumulative(self) -> np.ndarray:
    return np.cumsum(self.per_step)

  @property
  def total(self) -> int:
    return int(self.per_step.sum())

  @property
  def mean(self) -> float:
    return float(self.per_step.mean())

  @property
  def std(self) -> float:
    return float(self.per_step.std())

  @property
  def range(self) -> int:
    return int(self.per_step.max() - self.per_step.min())

  def rows(self) -> list[LoadRow]:
    return [
      {"topology": self.topology, "step": i + 1, "load": int(load), "cumulative": int(cum)}
      for i, (load, cum) in enumerate(zip(self.per_step, self.cumulative, strict=True))
    ]

  def summary_row(self) -> LoadSummaryRow:
    return {
      "topology": self.topology,
      "steps": int(self.per_step.size),
      "mean": self.mean,
      "std": self.std,
      "range": self.range,
      "total": self.total,
      "delivered_fraction": self.delivered_fraction,
    }


class _Inbox:
  """Agent × message possession matrix that grows as messages are originated."""

  def __init__(self, n: int) -> None:
    self.n = n
    self.has = np.zeros((n, 0), dtype=bool)

  @property
  def messages(self) -> int:
    return self.has.shape[1]

  def originate(self, origins: np.ndarray) -> None:
    if origins.size == 0:
      return
    fresh = np.zeros((self.n, origins.size), dtype=bool)
    fresh[origins, np.arange(origins.size)] = True
    self.has = np.concatenate([self.has, fresh], axis=1)

  def delivered_fraction(self) -> float:
    if self.messages == 0:
      return 1.0
    return float(self.has.mean())


def _origins(
  n: int, step: int, cfg: LoadConfig, rng: np.random.Generator
) -> np.ndarray:
  if cfg.origins is not None:
    if step != 1:
      return np.zeros(0, dtype=np.int64)
    origins = np.asarray(cfg.origins, dtype=np.int64)
    if origins.size and (origins.min() < 0 or origins.max() >= n):
      raise ValidationError(f"Message origins outside [0, {n}): {cfg.origins}")
    return origins
  if cfg.inject_until is not None and step > cfg.inject_until:
    return np.zeros(0, dtype=np.int64)
  return np.flatnonzero(rng.random(n) < cfg.inject_prob)


def _graph_step(
  graph: Topology, inbox: _Inbox, cfg: LoadConfig, rng: np.random.Generator
) -> int:
  """One step on a graph: an arc is used iff its tail holds a message its head lacks."""
  if inbox.messages == 0 or graph.edge_count == 0:
    return 0
  src, dst = graph.arcs[:, 0], graph.arcs[:, 1]
  has = inbox.has
  used = np.any(has[src] & ~has[dst], axis=1)
  load = int(np.count_nonzero(used))
  if cfg.link_success < 1.0:
    used &= rng.random(used.size) < cfg.link_success
  updated = has.copy()
  # Messages are bundled: a delivered arc carries everything the tail holds
  np.logical_or.at(updated, dst[used], has[src[used]])
  inbox.has = updated
  return load


def _broadcast_step(
  channel: BroadcastChannel, inbox: _Inbox, cfg: LoadConfig, rng: np.random.Generator
) -> int:
  """One step on the broadcast channel; every transmission costs N−1 units."""
  n = channel.n
  if inbox.messages == 0:
    return n * channel.unit_cost if cfg.broadcast_always_on else 0
  has = inbox.has
  pending = ~has.all(axis=0)
  senders = np.flatnonzero(np.any(has[:, pending], axis=1))
  updated = has.copy()
  for u in senders:
    receivers = np.ones(n, dtype=bool)
    if cfg.link_success < 1.0:
      receivers = rng.random(n) < cfg.link_success
    updated[np.ix_(receivers, has[u])] = True
  inbox.has = updated
  transmitting = n if cfg.broadcast_always_on else senders.size
  return int(transmitting * channel.unit_cost)


def comm_load_sim(
  topology: Topology | BroadcastChannel,
  steps: int,
  cfg: LoadConfig,
  rng: np.random.Generator,
) -> LoadSeries:
  """
  Simulate the on-demand message schedule and count bandwidth units per step.

  Each step, new messages are originated first; then every link whose tail
  holds a message the head lacks carries one unit (all such messages bundled).
  The broadcast channel charges N−1 units per transmitting agent.

  Args:
      topology: Graph or broadcast channel.
      steps: Number of steps T (>= 1).
      cfg: Message schedule.
      rng: Generator owned by this run.

  Returns:
      LoadSeries: Per-step units with cumulative and summary views.

  Raises:
      ValidationError: If steps < 1 or origins are out of range.
  """
  validate_positive(steps, "steps")
  # Separate streams keep the injection schedule identical across topologies
  inject_rng, link_rng = rng.spawn(2)
  inbox = _Inbox(topology.n)
  per_step = np.zeros(steps, dtype=np.int64)
  for step in range(1, steps + 1):
    inbox.originate(_origins(topology.n, step, cfg, inject_rng))
    if isinstance(topology, BroadcastChannel):
      per_step[step - 1] = _broadcast_step(topology, inbox, cfg, link_rng)
    else:
      per_step[step - 1] = _graph_step(topology, inbox, cfg, link_rng)
  series = LoadSeries(topology.name, per_step, inbox.messages, inbox.delivered_fraction())
  logger.info(
    f"{series.topology}: mean load {series.mean:.1f}/step (std {series.std:.1f}, "
    f"range {series.range}), {series.messages} messages, "
    f"delivered {series.delivered_fraction:.3f}"
  )
  return series
