"""layout: plot-ready ring coordinates and edge lists for small topologies."""

from __future__ import annotations

import numpy as np

from ..constants import DEFAULT_LAYOUT_N
from ..context import RunContext
from ..sim.topology import Topology
from . import require_topologies
from . import structural_topology

COMMAND = "layout"

NODE_FIELDS = ("vertex", "x", "y")
EDGE_FIELDS = ("u", "v", "offset")


def ring_coordinates(n: int) -> list[dict[str, float]]:
  """Vertices evenly spaced on the unit circle, vertex 0 at (1, 0)."""
  angles = 2.0 * np.pi * np.arange(n) / n
  return [
    {"vertex": v, "x": float(np.cos(a)), "y": float(np.sin(a))} for v, a in enumerate(angles)
  ]


def edge_rows(graph: Topology) -> list[dict[str, int]]:
  offsets = graph.ring_offsets()
  return [
    {"u": int(u), "v": int(v), "offset": int(s)}
    for (u, v), s in zip(graph.edges, offsets, strict=True)
  ]


def run(ctx: RunContext) -> None:
  """Rendering stays external; this writes nodes_<name>.csv and edges_<name>.csv."""
  config = ctx.config
  if config.n is None:
    config = config.with_overrides(n=DEFAULT_LAYOUT_N)
  layouts = {}
  for ref in require_topologies(config):
    name, gs = structural_topology(ref, config)
    graph = Topology.from_generators(gs, name)
    nodes = ring_coordinates(gs.modulus)
    edges = edge_rows(graph)
    ctx.write_csv(f"nodes_{name}.csv", nodes, NODE_FIELDS)
    ctx.write_csv(f"edges_{name}.csv", edges, EDGE_FIELDS)
    layouts[name] = {"n": gs.modulus, "offsets": list(gs.offsets), "edges": len(edges)}
  ctx.write_json("layout.json", layouts)
  ctx.metadata["layouts"] = layouts
