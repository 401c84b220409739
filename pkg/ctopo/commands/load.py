"""load: per-step bandwidth under the on-demand message schedule."""

from __future__ import annotations

from ..context import RunContext
from ..sim.load import comm_load_sim
from ..utils import derive_rng
from . import require_topologies
from . import simulation_target

COMMAND = "load"

LOAD_FIELDS = ("topology", "step", "load", "cumulative")
SUMMARY_FIELDS = ("topology", "steps", "mean", "std", "range", "total", "delivered_fraction")


def run(ctx: RunContext) -> None:
  """Every topology replays the same injection schedule (same seed stream)."""
  config = ctx.config
  load_cfg = config.load_config()
  series = [
    comm_load_sim(
      simulation_target(ref, config), config.steps, load_cfg, derive_rng(config.seed)
    )
    for ref in require_topologies(config)
  ]
  ctx.write_csv("load.csv", [row for s in series for row in s.rows()], LOAD_FIELDS)
  ctx.write_csv("load_summary.csv", [s.summary_row() for s in series], SUMMARY_FIELDS)
  ctx.write_json(
    "load.json",
    {
      "steps": config.steps,
      "inject_prob": load_cfg.inject_prob,
      "topologies": {
        s.topology: {**s.summary_row(), "per_step": s.per_step.tolist()} for s in series
      },
    },
  )
  ctx.metadata["series"] = {s.topology: s for s in series}
