"""evaluate: structural metrics of builtin or file topologies against the Moore bound."""

from __future__ import annotations

import math

from ..cayley import GeneratorSet
from ..cayley import distance_profile
from ..cayley import moore_min_diameter
from ..context import RunContext
from ..propagation import propagation_score
from ..types import EvaluationRow
from ..utils import finite_or_none
from . import require_topologies
from . import structural_topology

COMMAND = "evaluate"

EVALUATION_FIELDS = (
  "topology",
  "n",
  "offsets",
  "degree",
  "diameter",
  "avg_path_length",
  "g_score",
  "moore_bound",
  "moore_gap",
)


def evaluate_generators(name: str, gs: GeneratorSet) -> EvaluationRow:
  """
  Diameter, average path length, degree, g-score and Moore gap of one set.

  The gap is diameter − moore_min_diameter(N, Δ); disconnected sets report inf.
  """
  profile = distance_profile(gs)
  bound = moore_min_diameter(gs.modulus, gs.degree)
  diameter = float(profile.diameter)
  return {
    "topology": name,
    "n": gs.modulus,
    "offsets": " ".join(map(str, gs.offsets)),
    "degree": gs.degree,
    "diameter": diameter,
    "avg_path_length": float(profile.avg_path_length),
    "g_score": propagation_score(gs),
    "moore_bound": bound,
    "moore_gap": diameter - bound if math.isfinite(diameter) else math.inf,
  }


def _json_row(row: EvaluationRow) -> dict[str, object]:
  data: dict[str, object] = dict(row)
  data["diameter"] = finite_or_none(row["diameter"])
  data["avg_path_length"] = finite_or_none(row["avg_path_length"])
  data["moore_gap"] = finite_or_none(row["moore_gap"])
  return data


def run(ctx: RunContext) -> None:
  rows: list[EvaluationRow] = []
  for ref in require_topologies(ctx.config):
    name, gs = structural_topology(ref, ctx.config)
    row = evaluate_generators(name, gs)
    rows.append(row)
    ctx.log(
      f"{name}: N={row['n']} Δ={row['degree']} D={row['diameter']:g} "
      f"L={row['avg_path_length']:.4f} g={row['g_score']:.6f} "
      f"Moore={row['moore_bound']} gap={row['moore_gap']:g}"
    )
    path = ctx.output_dir / f"distances_{name}.csv"
    ctx.register(distance_profile(gs).to_csv(path, ctx.header_comment))
  ctx.write_csv("evaluation.csv", rows, EVALUATION_FIELDS)
  ctx.write_json("evaluation.json", [_json_row(row) for row in rows])
  ctx.metadata["rows"] = rows
