"""robustness: LCC, Pr80 and damaged-graph T90 across link-failure rates."""

from __future__ import annotations

from ..context import RunContext
from ..sim.robustness import robustness_eval
from . import require_topologies
from . import simulation_target

COMMAND = "robustness"

ROBUSTNESS_FIELDS = (
  "topology",
  "rate",
  "t90",
  "lcc_random",
  "lcc_distance",
  "pr80_r",
  "pr80_d",
  "topology_independent",
)
REALIZATION_FIELDS = (
  "topology",
  "rate",
  "trial",
  "lcc_fraction",
  "source",
  "t90",
  "transmissions",
  "censored",
)


def run(ctx: RunContext) -> None:
  config = ctx.config
  failure_cfg = config.failure_config()
  gossip_cfg = config.gossip_config()
  results = []
  for ref in require_topologies(config):
    result = robustness_eval(
      simulation_target(ref, config), failure_cfg, gossip_cfg, config.seed, config.threads
    )
    if result.topology_independent:
      ctx.log(f"{ref}: shared channel without links; rows are topology-independent")
    results.append(result)

  ctx.write_csv("robustness.csv", [row for r in results for row in r.rows()], ROBUSTNESS_FIELDS)
  ctx.write_csv(
    "realizations.csv",
    [row for r in results for row in r.realization_rows()],
    REALIZATION_FIELDS,
  )
  ctx.write_json(
    "robustness.json",
    {
      "realizations": failure_cfg.realizations,
      "lcc_threshold": failure_cfg.lcc_threshold,
      "bias_mode": failure_cfg.bias_mode,
      "topologies": {
        r.topology: {
          "topology_independent": r.topology_independent,
          "records": r.rows(),
          "t90_curve": r.t90_curve(),
        }
        for r in results
      },
    },
  )
  ctx.metadata["results"] = {r.topology: r for r in results}
