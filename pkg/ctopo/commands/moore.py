"""moore: diameters against the Moore lower bound over a degree sweep."""

from __future__ import annotations

import logging

from ..baselines import BUILTIN_TOPOLOGIES
from ..baselines import resolve_topology
from ..cayley import diameter
from ..cayley import moore_min_diameter
from ..constants import TOPOLOGY_EXPO
from ..constants import TOPOLOGY_FIBONACCI
from ..constants import TOPOLOGY_PRIME
from ..context import RunContext
from ..types import MooreRow
from ..utils import finite_or_none
from ..validators import ValidationError

COMMAND = "moore"

logger = logging.getLogger("ctopo.commands.moore")

MOORE_FIELDS = ("topology", "n", "degree", "diameter", "moore_bound")
SWEEP_BASELINES = (TOPOLOGY_EXPO, TOPOLOGY_FIBONACCI, TOPOLOGY_PRIME)
BOUND_LABEL = "moore"


def degree_sweep(n: int, dmax: int) -> list[MooreRow]:
  """
  Moore bound and baseline diameters for every even degree 2..dmax.

  Baselines that cannot supply K = degree // 2 generators below N are skipped.
  """
  rows: list[MooreRow] = []
  for degree in range(2, dmax + 1, 2):
    bound = moore_min_diameter(n, degree)
    rows.append(
      {"topology": BOUND_LABEL, "n": n, "degree": degree, "diameter": bound, "moore_bound": bound}
    )
    for name in SWEEP_BASELINES:
      try:
        gs = BUILTIN_TOPOLOGIES[name](n, degree // 2)
      except ValidationError as e:
        logger.debug(f"{name} at Δ={degree}: {e}")
        continue
      rows.append(
        {
          "topology": name,
          "n": n,
          "degree": gs.degree,
          "diameter": float(diameter(gs)),
          "moore_bound": moore_min_diameter(n, gs.degree),
        }
      )
  return rows


def run(ctx: RunContext) -> None:
  config = ctx.config
  n = config.require_n()
  rows = degree_sweep(n, config.dmax)
  # Generator-set files are placed at their own degree
  for ref in config.topologies:
    if ref in BUILTIN_TOPOLOGIES:
      continue
    name, gs = resolve_topology(ref, n, config.k)
    rows.append(
      {
        "topology": name,
        "n": gs.modulus,
        "degree": gs.degree,
        "diameter": float(diameter(gs)),
        "moore_bound": moore_min_diameter(gs.modulus, gs.degree),
      }
    )
  bound = moore_min_diameter(n, config.dmax)
  ctx.log(f"Moore lower bound for N={n}, Δ={config.dmax}: D >= {bound}")
  ctx.write_csv("moore.csv", rows, MOORE_FIELDS)
  ctx.write_json(
    "moore.json",
    {
      "n": n,
      "dmax": config.dmax,
      "bound": bound,
      "rows": [{**row, "diameter": finite_or_none(row["diameter"])} for row in rows],
    },
  )
  ctx.metadata["bound"] = bound
  ctx.metadata["rows"] = rows
