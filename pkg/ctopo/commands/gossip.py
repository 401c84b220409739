"""gossip: push-gossip dissemination latency (T90, T100, AvgTX) per topology."""

from __future__ import annotations

from ..context import RunContext
from ..sim.gossip import dissemination_stats
from . import require_topologies
from . import simulation_target

COMMAND = "gossip"

DISSEMINATION_FIELDS = (
  "topology",
  "trials",
  "t90",
  "t100",
  "avg_tx",
  "censored_t90",
  "censored_t100",
)
TRIAL_FIELDS = ("topology", "trial", "source", "t90", "t100", "transmissions", "censored")


def run(ctx: RunContext) -> None:
  """
  Run the dissemination protocol on every configured topology.

  Every topology sees the same master seed, so trial i uses the same stream
  everywhere.
  """
  config = ctx.config
  cfg = config.gossip_config()
  results = []
  for ref in require_topologies(config):
    target = simulation_target(ref, config)
    results.append(dissemination_stats(target, cfg, config.seed, config.threads))

  ctx.write_csv("dissemination.csv", [s.to_row() for s in results], DISSEMINATION_FIELDS)
  ctx.write_csv(
    "trials.csv", [row for s in results for row in s.trial_rows()], TRIAL_FIELDS
  )
  ctx.write_json(
    "dissemination.json",
    {
      "link_success": cfg.link_success,
      "max_rounds": cfg.max_rounds,
      "trials": cfg.trials,
      "topologies": [s.to_dict() for s in results],
    },
  )
  ctx.metadata["stats"] = {s.topology: s for s in results}
