"""Tests for the link-failure sweep."""

from __future__ import annotations

import pytest

from ctopo.cayley import GeneratorSet
from ctopo.sim.broadcast import BroadcastChannel
from ctopo.sim.broadcast import BroadcastConfig
from ctopo.sim.gossip import GossipConfig
from ctopo.sim.robustness import FailureConfig
from ctopo.sim.robustness import robustness_eval
from ctopo.sim.topology import Topology
from ctopo.validators import ValidationError

GOSSIP = GossipConfig(link_success=1.0, max_rounds=30, trials=1)


def test_intact_and_fully_failed_extremes(expo64: GeneratorSet) -> None:
  """Test rate 0 keeps LCC = 1 and rate 1 leaves 1/N with censored gossip."""
  graph = Topology.from_generators(expo64)
  result = robustness_eval(graph, FailureConfig(rates=(0.0, 1.0), realizations=4), GOSSIP, seed=0)
  intact, failed = result.records

  assert intact.lcc_random == intact.lcc_distance == 1.0
  assert intact.pr80_r == intact.pr80_d == 1.0
  assert intact.censored == 0
  assert intact.t90 <= 6.0

  assert failed.lcc_random == failed.lcc_distance == pytest.approx(1 / 64)
  assert failed.pr80_r == failed.pr80_d == 0.0
  assert failed.t90 == 30.0
  assert failed.censored == 4


def test_rows_and_curve(expo64: GeneratorSet) -> None:
  """Test one row per rate and one realization row per draw."""
  graph = Topology.from_generators(expo64, "expo")
  cfg = FailureConfig(rates=(0.3, 0.5, 0.7), realizations=5)
  result = robustness_eval(graph, cfg, GOSSIP, seed=4)
  rows = result.rows()
  assert [r["rate"] for r in rows] == [0.3, 0.5, 0.7]
  assert all(r["topology"] == "expo" for r in rows)
  assert len(result.realization_rows()) == 15
  assert [rate for rate, _ in result.t90_curve()] == [0.3, 0.5, 0.7]
  lccs = [r.lcc_random for r in result.records]
  assert all(0.0 < x <= 1.0 for x in lccs)


def test_sweep_is_reproducible_across_threads(expo64: GeneratorSet) -> None:
  """Test identical realizations for 1 and 4 worker threads."""
  graph = Topology.from_generators(expo64)
  cfg = FailureConfig(rates=(0.5,), realizations=6)
  gossip = GossipConfig(link_success=0.75, max_rounds=40, trials=1)
  one = robustness_eval(graph, cfg, gossip, seed=9, threads=1)
  four = robustness_eval(graph, cfg, gossip, seed=9, threads=4)
  assert one.realization_rows() == four.realization_rows()
  assert one.rows() == four.rows()


def test_uniform_draws_independent_of_gossip_bias(expo64: GeneratorSet) -> None:
  """Test the LCC draws do not change when gossip runs on the biased graph."""
  graph = Topology.from_generators(expo64)
  rand = robustness_eval(graph, FailureConfig(rates=(0.6,), realizations=5), GOSSIP, seed=1)
  dist = robustness_eval(
    graph, FailureConfig(rates=(0.6,), realizations=5, bias_mode="distance"), GOSSIP, seed=1
  )
  assert [z.lcc_random for z in rand.realizations] == [z.lcc_random for z in dist.realizations]
  assert [z.lcc_distance for z in rand.realizations] == [
    z.lcc_distance for z in dist.realizations
  ]


def test_failure_config_validation() -> None:
  """Test invalid sweep parameters raise."""
  with pytest.raises(ValidationError):
    FailureConfig(rates=())
  with pytest.raises(ValidationError):
    FailureConfig(rates=(1.2,))
  with pytest.raises(ValidationError):
    FailureConfig(realizations=0)
  with pytest.raises(ValidationError):
    FailureConfig(bias_mode="nearest")


def test_collision_channel_rows_are_topology_independent() -> None:
  """Test the link-free channel keeps full LCC and its T90 at every rate."""
  channel = BroadcastChannel(31, BroadcastConfig())
  cfg = FailureConfig(rates=(0.0, 0.9), realizations=3)
  result = robustness_eval(channel, cfg, GOSSIP, seed=2)
  assert result.topology_independent
  assert all(row["topology_independent"] for row in result.rows())
  for record in result.records:
    assert record.lcc_random == record.lcc_distance == 1.0
    assert record.pr80_r == record.pr80_d == 1.0
    assert record.t90 == 1.0
  assert len(result.realization_rows()) == 6


def test_graph_rows_are_not_flagged(expo64: GeneratorSet) -> None:
  """Test circulant sweeps carry topology_independent = False."""
  result = robustness_eval(
    Topology.from_generators(expo64), FailureConfig(rates=(0.5,), realizations=2), GOSSIP, seed=3
  )
  assert not result.topology_independent
  assert result.rows()[0]["topology_independent"] is False
