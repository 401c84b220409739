"""Tests for the shared-channel broadcast baseline."""

from __future__ import annotations

import numpy as np
import pytest

from ctopo.sim.broadcast import BroadcastChannel
from ctopo.sim.broadcast import BroadcastConfig
from ctopo.sim.broadcast import broadcast_baseline
from ctopo.sim.gossip import GossipConfig
from ctopo.sim.gossip import dissemination_stats
from ctopo.sim.topology import Topology
from ctopo.validators import ValidationError


def test_lossless_broadcast_finishes_in_one_round(rng: np.random.Generator) -> None:
  """Test p=1: the lone source reaches everyone at a cost of N−1 units."""
  channel = BroadcastChannel(10)
  trial = channel.run_trial(0, GossipConfig(link_success=1.0, trials=1), rng)
  assert trial.t100 == 1
  assert trial.transmissions == 9
  assert channel.unit_cost == 9


def test_persistent_contention_collides_after_partial_delivery() -> None:
  """Test that once two agents hold the message every round collides."""
  channel = BroadcastChannel(64)
  cfg = GossipConfig(link_success=0.5, max_rounds=20, trials=1)
  trial = channel.run_trial(0, cfg, np.random.default_rng(11))
  informed = round(trial.final_fraction * 64)
  assert 1 < informed < 64
  assert trial.censored[1.0]
  assert trial.t100 == 20
  assert trial.transmissions == 63 + informed * 63 * 19


def test_adaptive_contention_completes() -> None:
  """Test q = 1/informed lets the channel finish under lossy links."""
  channel = BroadcastChannel(16, BroadcastConfig(contention="adaptive"))
  cfg = GossipConfig(link_success=0.5, max_rounds=500, trials=5)
  stats = dissemination_stats(channel, cfg, seed=2)
  assert stats.topology == "broadcast"
  assert stats.censored_count(1.0) == 0
  assert 1.0 <= stats.t90 <= stats.t100 < 500
  # Every transmission is a multiple of N−1 units
  assert all(t.transmissions % 15 == 0 for t in stats.trials)


def test_complete_mode_is_plain_gossip_on_kn() -> None:
  """Test the complete-graph variant of the baseline."""
  baseline = broadcast_baseline(8, BroadcastConfig(mode="complete"))
  assert isinstance(baseline, Topology)
  assert baseline.edge_count == 28
  assert baseline.name == "broadcast"
  assert isinstance(broadcast_baseline(8), BroadcastChannel)


def test_broadcast_config_validation() -> None:
  """Test unknown modes raise."""
  with pytest.raises(ValidationError):
    BroadcastConfig(mode="radio")
  with pytest.raises(ValidationError):
    BroadcastConfig(contention="polite")
  with pytest.raises(ValidationError):
    BroadcastChannel(0)
