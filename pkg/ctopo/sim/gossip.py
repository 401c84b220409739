"""Push-gossip dissemination: per-trial simulation and multi-trial statistics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Protocol

import numpy as np

from ..constants import DEFAULT_LINK_SUCCESS
from ..constants import DEFAULT_MAX_ROUNDS
from ..constants import DEFAULT_THRESHOLDS
from ..constants import DEFAULT_TRIALS
from ..types import DisseminationRow
from ..types import TrialRow
from ..utils import derive_rng
from ..utils import parallel_map
from ..validators import ValidationError
from ..validators import validate_positive
from ..validators import validate_probability
from .topology import Topology
from .topology import component_labels

logger = logging.getLogger("ctopo.sim.gossip")

T90 = 0.9
T100 = 1.0


@dataclass(frozen=True)
class GossipConfig:
  """
  Push-gossip protocol parameters.

  Attributes:
      link_success: Per-attempt success probability p in (0, 1].
      max_rounds: Round cap; unreached thresholds are censored at this value.
      trials: Independent trials per topology.
      thresholds: Coverage fractions to time (must include 0.9 and 1.0).
      source: Fixed source vertex, or None for a uniformly random source per trial.
  """

  link_success: float = DEFAULT_LINK_SUCCESS
  max_rounds: int = DEFAULT_MAX_ROUNDS
  trials: int = DEFAULT_TRIALS
  thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
  source: int | None = 0

  def __post_init__(self) -> None:
    validate_probability(self.link_success, "link_success")
    validate_positive(self.max_rounds, "max_rounds")
    validate_positive(self.trials, "trials")
    for thr in self.thresholds:
      validate_probability(thr, "threshold")
    if T90 not in self.thresholds or T100 not in self.thresholds:
      raise ValidationError(f"Thresholds must include 0.9 and 1.0, got {self.thresholds}")
    if self.source is not None and self.source < 0:
      raise ValidationError(f"Source vertex must be >= 0, got {self.source}")


@dataclass(frozen=True)
class GossipTrial:
  """
  Result of one dissemination trial.

  Attributes:
      source: Source vertex.
      rounds: Threshold -> first round with coverage >= threshold (cap if censored).
      censored: Threshold -> True when the cap was hit first.
      transmissions: Link attempts over the whole trial, failures included.
      rounds_run: Rounds until full coverage or the cap.
      final_fraction: Informed share at the end.
  """

  source: int
  rounds: dict[float, int]
  censored: dict[float, bool]
  transmissions: int
  rounds_run: int
  final_fraction: float

  @property
  def t90(self) -> int:
    return self.rounds[T90]

  @property
  def t100(self) -> int:
    return self.rounds[T100]

  def to_row(self, topology: str, trial: int) -> TrialRow:
    return {
      "topology": topology,
      "trial": trial,
      "source": self.source,
      "t90": self.t90,
      "t100": self.t100,
      "transmissions": self.transmissions,
      "censored": self.censored[T100],
    }


class Disseminator(Protocol):
  """Anything that can run one dissemination trial (graphs, broadcast channels)."""

  n: int
  name: str

  def run_trial(
    self, source: int, cfg: GossipConfig, rng: np.random.Generator
  ) -> GossipTrial: ...


def _coverage_target(n: int, threshold: float) -> int:
  """Smallest informed count whose fraction reaches the threshold."""
  return max(1, math.ceil(threshold * n - 1e-9))


class TrialClock:
  """Records the first round each coverage target is met."""

  def __init__(self, n: int, thresholds: tuple[float, ...]) -> None:
    self.targets = {thr: _coverage_target(n, thr) for thr in thresholds}
    self.reached: dict[float, int] = {}

  def observe(self, informed_count: int, round_: int) -> None:
    for thr, target in self.targets.items():
      if thr not in self.reached and informed_count >= target:
        self.reached[thr] = round_

  def done(self) -> bool:
    return len(self.reached) == len(self.targets)

  def finish(
    self, cfg: GossipConfig, source: int, transmissions: int, rounds_run: int, fraction: float
  ) -> GossipTrial:
    rounds = {thr: self.reached.get(thr, cfg.max_rounds) for thr in self.targets}
    censored = {thr: thr not in self.reached for thr in self.targets}
    return GossipTrial(source, rounds, censored, transmissions, rounds_run, fraction)


def push_gossip_trial(
  graph: Topology, source: int, cfg: GossipConfig, rng: np.random.Generator
) -> GossipTrial:
  """
  Run one push-gossip trial.

  Each round every informed vertex attempts every incident link; an attempt
  succeeds with probability p and each attempt counts as one transmission.
  Vertices informed in round r start transmitting in round r + 1. Once the
  source's component is saturated the remaining rounds up to the cap are
  charged their (constant) attempt count without further sampling.

  Args:
      graph: Undirected graph (intact or damaged).
      source: Source vertex in [0, N).
      cfg: Protocol parameters.
      rng: Generator owned by this trial.

  Returns:
      GossipTrial: Rounds per threshold and transmission count.

  Raises:
      ValidationError: If source is out of range.
  """
  n = graph.n
  if not 0 <= source < n:
    raise ValidationError(f"Source vertex {source} outside [0, {n})")
  arcs = graph.arcs
  src, dst = arcs[:, 0], arcs[:, 1]
  informed = np.zeros(n, dtype=bool)
  informed[source] = True
  count = 1
  clock = TrialClock(n, cfg.thresholds)
  clock.observe(count, 0)

  _, labels = component_labels(graph)
  reachable = int(np.count_nonzero(labels == labels[source]))

  transmissions = 0
  round_ = 0
  while count < n and round_ < cfg.max_rounds:
    if count == reachable:
      # Nothing left to inform; every remaining round repeats the same attempts
      per_round = int(graph.degrees[informed].sum())
      transmissions += per_round * (cfg.max_rounds - round_)
      round_ = cfg.max_rounds
      break
    round_ += 1
    active = informed[src]
    attempts = int(np.count_nonzero(active))
    transmissions += attempts
    targets = dst[active]
    if cfg.link_success < 1.0:
      targets = targets[rng.random(attempts) < cfg.link_success]
    informed[targets] = True
    count = int(np.count_nonzero(informed))
    clock.observe(count, round_)

  return clock.finish(cfg, source, transmissions, round_, count / n)


@dataclass(eq=False)
class DisseminationStats:
  """
  Aggregated gossip statistics for one topology.

  Censored trials contribute the round cap to the means.
  """

  topology: str
  cfg: GossipConfig
  trials: list[GossipTrial] = field(default_factory=list)

  def mean_rounds(self, threshold: float) -> float:
    if not self.trials:
      return math.nan
    return float(np.mean([t.rounds[threshold] for t in self.trials]))

  def censored_count(self, threshold: float) -> int:
    return sum(1 for t in self.trials if t.censored[threshold])

  @property
  def t90(self) -> float:
    return self.mean_rounds(T90)

  @property
  def t100(self) -> float:
    return self.mean_rounds(T100)

  @property
  def avg_tx(self) -> float:
    if not self.trials:
      return math.nan
    return float(np.mean([t.transmissions for t in self.trials]))

  def to_row(self) -> DisseminationRow:
    return {
      "topology": self.topology,
      "trials": len(self.trials),
      "t90": self.t90,
      "t100": self.t100,
      "avg_tx": self.avg_tx,
      "censored_t90": self.censored_count(T90),
      "censored_t100": self.censored_count(T100),
    }

  def trial_rows(self) -> list[TrialRow]:
    return [t.to_row(self.topology, i) for i, t in enumerate(self.trials)]

  def to_dict(self) -> dict[str, object]:
    return {
      "topology": self.topology,
      "trials": len(self.trials),
      "mean_rounds": {str(thr): self.mean_rounds(thr) for thr in self.cfg.thresholds},
      "censored": {str(thr): self.censored_count(thr) for thr in self.cfg.thresholds},
      "avg_tx": self.avg_tx,
    }


class PushGossip:
  """Disseminator adapter running push gossip over a Topology."""

  def __init__(self, graph: Topology) -> None:
    self.graph = graph
    self.n = graph.n
    self.name = graph.name

  def run_trial(
    self, source: int, cfg: GossipConfig, rng: np.random.Generator
  ) -> GossipTrial:
    return push_gossip_trial(self.graph, source, cfg, rng)


def pick_source(n: int, cfg: GossipConfig, rng: np.random.Generator) -> int:
  if cfg.source is None:
    return int(rng.integers(n))
  if cfg.source >= n:
    raise ValidationError(f"Source vertex {cfg.source} outside [0, {n})")
  return cfg.source


def dissemination_stats(
  topology: Topology | Disseminator,
  cfg: GossipConfig,
  seed: int,
  threads: int | None = None,
) -> DisseminationStats:
  """
  Run cfg.trials independent trials and aggregate them.

  Trial i draws from derive_rng(seed, i) (source choice included), so the result
  does not depend on the thread count.

  Args:
      topology: Graph or broadcast channel.
      cfg: Protocol parameters.
      seed: Master seed.
      threads: Worker cap.

  Returns:
      DisseminationStats: Per-trial records and their means.
  """
  runner: Disseminator = PushGossip(topology) if isinstance(topology, Topology) else topology

  def run(index: int) -> GossipTrial:
    rng = derive_rng(seed, index)
    return runner.run_trial(pick_source(runner.n, cfg, rng), cfg, rng)

  trials = parallel_map(run, range(cfg.trials), threads)
  stats = DisseminationStats(runner.name, cfg, trials)
  logger.info(
    f"{runner.name}: T90={stats.t90:.2f} T100={stats.t100:.2f} "
    f"AvgTX={stats.avg_tx:.1f} (censored T100 {stats.censored_count(T100)}/{cfg.trials})"
  )
  return stats
