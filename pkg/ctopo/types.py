"""Type definitions for emitted records and serialized artifacts."""

from __future__ import annotations

from typing import TypedDict


class GeneratorSetJSON(TypedDict):
  """Serialized generator set: {"n": N, "offsets": [...]}, canonical offsets."""

  n: int
  offsets: list[int]


class EvaluationRow(TypedDict):
  """Structural metrics of one topology."""

  topology: str
  n: int
  offsets: str
  degree: int
  diameter: float
  avg_path_length: float
  g_score: float
  moore_bound: int
  moore_gap: float


class HistoryRow(TypedDict):
  """One row of the training history."""

  batch: int
  mean_return: float
  best_diameter: float
  best_apl: float


class TrialRow(TypedDict, total=False):
  """One gossip trial (or one damaged-graph realization)."""

  topology: str
  trial: int
  source: int
  t90: int
  t100: int
  transmissions: int
  censored: bool
  rate: float
  lcc_fraction: float


class DisseminationRow(TypedDict):
  """Aggregated dissemination statistics of one topology."""

  topology: str
  trials: int
  t90: float
  t100: float
  avg_tx: float
  censored_t90: int
  censored_t100: int


class RobustnessRow(TypedDict):
  """Aggregated link-failure statistics for one topology at one rate."""

  topology: str
  rate: float
  t90: float
  lcc_random: float
  lcc_distance: float
  pr80_r: float
  pr80_d: float
  topology_independent: bool


class LoadRow(TypedDict):
  """Per-step communication load."""

  topology: str
  step: int
  load: int
  cumulative: int


class LoadSummaryRow(TypedDict):
  """Summary of a load series (mean, std, range of per-step load)."""

  topology: str
  steps: int
  mean: float
  std: float
  range: int
  total: int
  delivered_fraction: float


class MooreRow(TypedDict):
  """Diameter of a topology against the Moore lower bound at its degree."""

  topology: str
  n: int
  degree: int
  diameter: float
  moore_bound: int
