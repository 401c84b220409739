"""Broadcast baseline: slotted shared-collision channel or plain gossip on K_N."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..constants import BROADCAST_COLLISION
from ..constants import BROADCAST_COMPLETE
from ..constants import BROADCAST_Q_ADAPTIVE
from ..constants import BROADCAST_Q_PERSISTENT
from ..constants import TOPOLOGY_BROADCAST
from ..validators import ValidationError
from .gossip import GossipConfig
from .gossip import GossipTrial
from .gossip import TrialClock
from .topology import Topology

logger = logging.getLogger("ctopo.sim.broadcast")

BROADCAST_MODES = (BROADCAST_COLLISION, BROADCAST_COMPLETE)
CONTENTION_MODES = (BROADCAST_Q_PERSISTENT, BROADCAST_Q_ADAPTIVE)


@dataclass(frozen=True)
class BroadcastConfig:
  """
  Broadcast baseline model.

  Attributes:
      mode: "collision" (shared slotted channel) or "complete" (gossip on K_N).
      contention: "persistent" (every informed agent sends each round) or
          "adaptive" (each sends with probability 1 / informed count).
  """

  mode: str = BROADCAST_COLLISION
  contention: str = BROADCAST_Q_PERSISTENT

  def __post_init__(self) -> None:
    if self.mode not in BROADCAST_MODES:
      raise ValidationError(f"Unknown broadcast mode {self.mode!r}; expected {BROADCAST_MODES}")
    if self.contention not in CONTENTION_MODES:
      raise ValidationError(
        f"Unknown contention {self.contention!r}; expected {CONTENTION_MODES}"
      )


class BroadcastChannel:
  """
  Single shared channel: a round delivers only when exactly one agent sends.

  A lone transmission reaches each uninformed agent independently with the
  gossip link-success probability. Every transmission occupies the channel for
  all N−1 receivers and is charged N−1 units.
  """

  def __init__(
    self, n: int, config: BroadcastConfig | None = None, name: str = TOPOLOGY_BROADCAST
  ) -> None:
    if n < 1:
      raise ValidationError(f"Agent count must be >= 1, got {n}")
    self.n = n
    self.config = config or BroadcastConfig()
    self.name = name

  @property
  def unit_cost(self) -> int:
    return self.n - 1

  def senders(self, informed_count: int, rng: np.random.Generator) -> int:
    """Number of agents transmitting this round."""
    if self.config.contention == BROADCAST_Q_PERSISTENT:
      return informed_count
    return int(rng.binomial(informed_count, 1.0 / max(1, informed_count)))

  def run_trial(
    self, source: int, cfg: GossipConfig, rng: np.random.Generator
  ) -> GossipTrial:
    """
    Simulate one dissemination over the channel.

    Returns:
        GossipTrial: Transmissions are reported in bandwidth units.
    """
    n = self.n
    if not 0 <= source < n:
      raise ValidationError(f"Source vertex {source} outside [0, {n})")
    informed = np.zeros(n, dtype=bool)
    informed[source] = True
    count = 1
    clock = TrialClock(n, cfg.thresholds)
    clock.observe(count, 0)
    units = 0
    round_ = 0
    while count < n and round_ < cfg.max_rounds:
      if self.config.contention == BROADCAST_Q_PERSISTENT and count > 1:
        # Every later round collides
        units += count * self.unit_cost * (cfg.max_rounds - round_)
        round_ = cfg.max_rounds
        break
      round_ += 1
      sending = self.senders(count, rng)
      units += sending * self.unit_cost
      if sending == 1:
        waiting = np.flatnonzero(~informed)
        if cfg.link_success < 1.0:
          waiting = waiting[rng.random(waiting.size) < cfg.link_success]
        informed[waiting] = True
        count = int(np.count_nonzero(informed))
      clock.observe(count, round_)
    return clock.finish(cfg, source, units, round_, count / n)


def broadcast_baseline(
  n: int, config: BroadcastConfig | None = None
) -> BroadcastChannel | Topology:
  """
  Build the simulatable broadcast baseline.

  Args:
      n: Agent count.
      config: Model selection (collision channel by default).

  Returns:
      BroadcastChannel for "collision", or the complete graph for "complete".
  """
  config = config or BroadcastConfig()
  logger.debug(f"Broadcast baseline N={n}: {config.mode}/{config.contention}")
  if config.mode == BROADCAST_COMPLETE:
    return Topology.complete(n, name=TOPOLOGY_BROADCAST)
  return BroadcastChannel(n, config)
