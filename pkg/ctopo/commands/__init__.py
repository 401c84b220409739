"""Sub-commands; every module exposes run(ctx) and is discovered by ctopo.core."""

from __future__ import annotations

from pathlib import Path

from ..baselines import BUILTIN_TOPOLOGIES
from ..baselines import complete_generators
from ..baselines import resolve_topology
from ..cayley import GeneratorSet
from ..config import Config
from ..constants import POOL_FILE
from ..constants import TOPOLOGY_BROADCAST
from ..numtheory import CandidatePool
from ..numtheory import build_candidate_pool
from ..numtheory import load_candidate_file
from ..sim.broadcast import BroadcastChannel
from ..sim.broadcast import broadcast_baseline
from ..sim.topology import Topology
from ..validators import ValidationError

__all__ = [
  "bruteforce",
  "evaluate",
  "gossip",
  "layout",
  "load",
  "moore",
  "optimize",
  "robustness",
]


def build_pool(config: Config) -> CandidatePool:
  """Candidate pool for config.n in the configured mode."""
  n = config.require_n()
  if config.pool == POOL_FILE:
    if not config.pool_file:
      raise ValidationError("Pool mode 'file' requires pool_file")
    return build_candidate_pool(n, POOL_FILE, load_candidate_file(Path(config.pool_file)))
  return build_candidate_pool(n, config.pool)


def structural_topology(ref: str, config: Config) -> tuple[str, GeneratorSet]:
  """
  Generator set for a builtin name or JSON path.

  Builtins are built at N = config.n with K = config.k; the broadcast baseline
  is the complete circulant for structural metrics.
  """
  if ref in BUILTIN_TOPOLOGIES:
    n = config.require_n()
    if ref == TOPOLOGY_BROADCAST:
      return ref, complete_generators(n)
    return resolve_topology(ref, n, config.k)
  return resolve_topology(ref, config.n or 0, config.k)


def simulation_target(ref: str, config: Config) -> Topology | BroadcastChannel:
  """Simulatable form of a topology; the broadcast baseline uses its channel model."""
  if ref == TOPOLOGY_BROADCAST:
    return broadcast_baseline(config.require_n(), config.broadcast_config())
  name, gs = structural_topology(ref, config)
  return Topology.from_generators(gs, name)


def require_topologies(config: Config) -> list[str]:
  if not config.topologies:
    raise ValidationError("At least one topology is required (--topology or 'topologies')")
  return list(config.topologies)
