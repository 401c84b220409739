"""Undirected edge-list view of a topology, edge removal and component sizes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from dataclasses import field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..cayley import GeneratorSet
from ..constants import BIAS_DISTANCE
from ..constants import BIAS_RANDOM
from ..validators import ValidationError

BIAS_MODES = (BIAS_RANDOM, BIAS_DISTANCE)


@dataclass(frozen=True, eq=False)
class Topology:
  """
  Simple undirected graph on vertices 0..N−1.

  Attributes:
      n: Vertex count.
      edges: (E, 2) int array, one row (u, v) with u < v per edge.
      name: Display name.
  """

  n: int
  edges: np.ndarray = field(repr=False)
  name: str = ""

  def __post_init__(self) -> None:
    if self.n < 1:
      raise ValidationError(f"Vertex count must be >= 1, got {self.n}")
    edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (
      edges.min() < 0 or edges.max() >= self.n or np.any(edges[:, 0] >= edges[:, 1])
    ):
      raise ValidationError("Edges must satisfy 0 <= u < v < N")
    object.__setattr__(self, "edges", edges)

  @classmethod
  def from_generators(cls, gs: GeneratorSet, name: str = "") -> Topology:
    """
    Edges {u, u + s mod N} for every vertex u and offset s.

    The half-modulus offset pairs u with u + N/2 once, so only u < N/2 emits it.
    """
    n = gs.modulus
    vertices = np.arange(n, dtype=np.int64)
    chunks = []
    for s in gs.offsets:
      src = vertices[: n // 2] if 2 * s == n else vertices
      dst = (src + s) % n
      chunks.append(np.column_stack([np.minimum(src, dst), np.maximum(src, dst)]))
    return cls(n, np.concatenate(chunks), name or gs.label())

  @classmethod
  def complete(cls, n: int, name: str = "complete") -> Topology:
    u, v = np.triu_indices(n, k=1)
    return cls(n, np.column_stack([u, v]), name)

  @property
  def edge_count(self) -> int:
    return int(self.edges.shape[0])

  @cached_property
  def arcs(self) -> np.ndarray:
    """Directed arcs (E*2, 2): every edge in both directions."""
    return np.concatenate([self.edges, self.edges[:, ::-1]])

  @cached_property
  def degrees(self) -> np.ndarray:
    return np.bincount(self.edges.reshape(-1), minlength=self.n)

  def adjacency(self) -> csr_matrix:
    """Symmetric 0/1 sparse adjacency matrix."""
    arcs = self.arcs
    data = np.ones(arcs.shape[0], dtype=np.int8)
    return coo_matrix((data, (arcs[:, 0], arcs[:, 1])), shape=(self.n, self.n)).tocsr()

  def ring_offsets(self) -> np.ndarray:
    """Canonical ring distance min(|u−v|, N−|u−v|) of every edge."""
    gap = np.abs(self.edges[:, 0] - self.edges[:, 1])
    return np.minimum(gap, self.n - gap)

  def without(self, keep: np.ndarray, name: str | None = None) -> Topology:
    """Subgraph keeping edges where the boolean mask is True."""
    return Topology(self.n, self.edges[keep], self.name if name is None else name)


def remove_edges(
  graph: Topology, rate: float, bias_mode: str, rng: np.random.Generator
) -> Topology:
  """
  Remove floor(rate * |E|) distinct edges.

  Args:
      graph: Intact graph.
      rate: Failure rate in [0, 1]; 1 removes every edge.
      bias_mode: "random" (uniform) or "distance" (weight ∝ ring offset, so
          long-range links fail preferentially).
      rng: Generator owned by this realization.

  Returns:
      Topology: The damaged graph.

  Raises:
      ValidationError: On rate outside [0, 1] or unknown bias mode.
  """
  if not 0 <= rate <= 1:
    raise ValidationError(f"Failure rate must lie in [0, 1], got {rate}")
  if bias_mode not in BIAS_MODES:
    raise ValidationError(f"Unknown bias mode {bias_mode!r}; expected {BIAS_MODES}")
  total = graph.edge_count
  count = math.floor(rate * total + 1e-9)
  if count == 0:
    return graph
  if bias_mode == BIAS_RANDOM:
    removed = rng.choice(total, size=count, replace=False)
  else:
    weights = graph.ring_offsets().astype(np.float64)
    removed = rng.choice(total, size=count, replace=False, p=weights / weights.sum())
  keep = np.ones(total, dtype=bool)
  keep[removed] = False
  return graph.without(keep)


def component_labels(graph: Topology) -> tuple[int, np.ndarray]:
  """Connected-component count and per-vertex labels."""
  count, labels = connected_components(graph.adjacency(), directed=False)
  return int(count), labels


def largest_connected_component(graph: Topology) -> tuple[int, float]:
  """
  Size of the largest connected component and its share of N.

  Isolated vertices are components of size 1, so an edgeless graph gives 1/N.
  """
  _, labels = component_labels(graph)
  size = int(np.bincount(labels).max())
  return size, size / graph.n
