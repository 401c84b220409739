"""Link-failure robustness: LCC statistics and damaged-graph dissemination."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace

import numpy as np

from ..constants import BIAS_DISTANCE
from ..constants import BIAS_RANDOM
from ..constants import DEFAULT_FAILURE_RATES
from ..constants import DEFAULT_LCC_THRESHOLD
from ..constants import DEFAULT_REALIZATIONS
from ..types import RobustnessRow
from ..types import TrialRow
from ..utils import derive_rng
from ..utils import parallel_map
from ..validators import ValidationError
from ..validators import validate_positive
from ..validators import validate_probability
from .gossip import T90
from .gossip import Disseminator
from .gossip import GossipConfig
from .gossip import pick_source
from .gossip import push_gossip_trial
from .topology import BIAS_MODES
from .topology import Topology
from .topology import largest_connected_component
from .topology import remove_edges

logger = logging.getLogger("ctopo.sim.robustness")


@dataclass(frozen=True)
class FailureConfig:
  """
  Link-failure experiment parameters.

  Attributes:
      rates: Edge failure rates to sweep.
      realizations: Damaged graphs drawn per rate and bias mode.
      bias_mode: Removal mode of the graph the gossip trial runs on.
      lcc_threshold: LCC share counted as "still connected" for Pr80.
  """

  rates: tuple[float, ...] = DEFAULT_FAILURE_RATES
  realizations: int = DEFAULT_REALIZATIONS
  bias_mode: str = BIAS_RANDOM
  lcc_threshold: float = DEFAULT_LCC_THRESHOLD

  def __post_init__(self) -> None:
    if not self.rates:
      raise ValidationError("At least one failure rate is required")
    for rate in self.rates:
      if not 0 <= rate <= 1:
        raise ValidationError(f"Failure rate must lie in [0, 1], got {rate}")
    validate_positive(self.realizations, "realizations")
    validate_probability(self.lcc_threshold, "lcc_threshold")
    if self.bias_mode not in BIAS_MODES:
      raise ValidationError(f"Unknown bias mode {self.bias_mode!r}; expected {BIAS_MODES}")


@dataclass(frozen=True)
class Realization:
  """One damaged-graph draw at a given rate."""

  rate: float
  index: int
  lcc_random: float
  lcc_distance: float
  source: int
  t90: int
  censored: bool
  transmissions: int


@dataclass(frozen=True)
class RateRecord:
  """
  Aggregates over all realizations at one rate.

  Attributes:
      rate: Failure rate.
      t90: Mean rounds to 90% coverage on the damaged graph (cap if censored).
      lcc_random: Mean LCC share under uniform removal.
      lcc_distance: Mean LCC share under distance-biased removal.
      pr80_r: Share of uniform realizations with LCC >= threshold.
      pr80_d: Same under distance-biased removal.
      censored: Realizations whose gossip never reached 90%.
  """

  rate: float
  t90: float
  lcc_random: float
  lcc_distance: float
  pr80_r: float
  pr80_d: float
  censored: int


@dataclass(eq=False)
class RobustnessResult:
  """
  Per-rate records and raw realizations for one topology.

  topology_independent marks a shared channel: it has no links to fail, so
  its LCC shares are 1 at every rate and T90 never depends on the rate.
  """

  topology: str
  topology_independent: bool = False
  records: list[RateRecord] = field(default_factory=list)
  realizations: list[Realization] = field(default_factory=list)

  def rows(self) -> list[RobustnessRow]:
    return [
      {
        "topology": self.topology,
        "rate": r.rate,
        "t90": r.t90,
        "lcc_random": r.lcc_random,
        "lcc_distance": r.lcc_distance,
        "pr80_r": r.pr80_r,
        "pr80_d": r.pr80_d,
        "topology_independent": self.topology_independent,
      }
      for r in self.records
    ]

  def realization_rows(self) -> list[TrialRow]:
    return [
      {
        "topology": self.topology,
        "trial": z.index,
        "rate": z.rate,
        "source": z.source,
        "t90": z.t90,
        "transmissions": z.transmissions,
        "censored": z.censored,
        "lcc_fraction": z.lcc_random,
      }
      for z in self.realizations
    ]

  def t90_curve(self) -> list[tuple[float, float]]:
    """(rate, mean T90) pairs for plotting."""
    return [(r.rate, r.t90) for r in self.records]


def run_realization(
  graph: Topology,
  rate: float,
  rate_index: int,
  index: int,
  failure_cfg: FailureConfig,
  gossip_cfg: GossipConfig,
  seed: int,
) -> Realization:
  """
  Draw one uniform and one distance-biased damaged graph and gossip on one of them.

  Streams: (seed, rate_index, index, 0) uniform removal, (.., 1) gossip,
  (.., 2) biased removal.
  """
  damaged_r = remove_edges(graph, rate, BIAS_RANDOM, derive_rng(seed, rate_index, index, 0))
  damaged_d = remove_edges(graph, rate, BIAS_DISTANCE, derive_rng(seed, rate_index, index, 2))
  _, lcc_r = largest_connected_component(damaged_r)
  _, lcc_d = largest_connected_component(damaged_d)

  target = damaged_r if failure_cfg.bias_mode == BIAS_RANDOM else damaged_d
  rng = derive_rng(seed, rate_index, index, 1)
  source = pick_source(graph.n, gossip_cfg, rng)
  trial = push_gossip_trial(target, source, gossip_cfg, rng)
  return Realization(
    rate=rate,
    index=index,
    lcc_random=lcc_r,
    lcc_distance=lcc_d,
    source=source,
    t90=trial.t90,
    censored=trial.censored[T90],
    transmissions=trial.transmissions,
  )


def run_channel_realization(
  channel: Disseminator,
  rate: float,
  rate_index: int,
  index: int,
  gossip_cfg: GossipConfig,
  seed: int,
) -> Realization:
  """
  One dissemination over a channel without links; the failure rate has no effect.

  Uses the gossip stream (seed, rate_index, index, 1) of run_realization.
  """
  rng = derive_rng(seed, rate_index, index, 1)
  source = pick_source(channel.n, gossip_cfg, rng)
  trial = channel.run_trial(source, gossip_cfg, rng)
  return Realization(
    rate=rate,
    index=index,
    lcc_random=1.0,
    lcc_distance=1.0,
    source=source,
    t90=trial.t90,
    censored=trial.censored[T90],
    transmissions=trial.transmissions,
  )


def robustness_eval(
  graph: Topology | Disseminator,
  failure_cfg: FailureConfig,
  gossip_cfg: GossipConfig,
  seed: int,
  threads: int | None = None,
) -> RobustnessResult:
  """
  Sweep failure rates and summarize connectivity and dissemination.

  Damaged graphs break vertex-transitivity, so gossip runs from a uniformly
  random source per realization regardless of gossip_cfg.source. A
  disseminator that is not a Topology (the collision channel) has no links:
  its result is flagged topology_independent with full LCC at every rate.

  Args:
      graph: Intact topology or a link-free channel.
      failure_cfg: Rates, realizations and Pr80 threshold.
      gossip_cfg: Protocol for the damaged-graph trials.
      seed: Master seed.
      threads: Worker cap.

  Returns:
      RobustnessResult: One record per rate plus the raw realizations.
  """
  gossip_cfg = replace(gossip_cfg, source=None)
  linked = isinstance(graph, Topology)
  result = RobustnessResult(graph.name, topology_independent=not linked)
  for rate_index, rate in enumerate(failure_cfg.rates):

    def run(index: int, rate: float = rate, rate_index: int = rate_index) -> Realization:
      if isinstance(graph, Topology):
        return run_realization(
          graph, rate, rate_index, index, failure_cfg, gossip_cfg, seed
        )
      return run_channel_realization(graph, rate, rate_index, index, gossip_cfg, seed)

    draws = parallel_map(run, range(failure_cfg.realizations), threads)
    lcc_r = np.array([z.lcc_random for z in draws])
    lcc_d = np.array([z.lcc_distance for z in draws])
    threshold = failure_cfg.lcc_threshold - 1e-12
    record = RateRecord(
      rate=rate,
      t90=float(np.mean([z.t90 for z in draws])),
      lcc_random=float(lcc_r.mean()),
      lcc_distance=float(lcc_d.mean()),
      pr80_r=float(np.mean(lcc_r >= threshold)),
      pr80_d=float(np.mean(lcc_d >= threshold)),
      censored=sum(1 for z in draws if z.censored),
    )
    result.records.append(record)
    result.realizations.extend(draws)
    logger.info(
      f"{graph.name} rate={rate:.2f}: LCC={record.lcc_random:.3f} "
      f"Pr80-R={record.pr80_r:.2f} Pr80-D={record.pr80_d:.2f} T90={record.t90:.2f}"
    )
  return result
