"""optimize: PPO search for a low-diameter generator set of size K = dmax // 2."""

from __future__ import annotations

from ..baselines import expo_generators
from ..cayley import distance_profile
from ..context import RunContext
from ..ppo import HISTORY_FIELDS
from ..ppo import TopologyMetrics
from ..ppo import train
from ..utils import finite_or_none
from . import build_pool

COMMAND = "optimize"


def run(ctx: RunContext) -> None:
  """
  Train the policy and write best.json, history.csv and summary.json.

  Args:
      ctx: Run context.
  """
  config = ctx.config
  n = config.require_n()
  pool = build_pool(config)
  train_cfg = config.train_config()
  ctx.log(f"Optimizing N={n} K={train_cfg.k} over {len(pool)} candidates")

  metrics = TopologyMetrics()
  result = train(n, pool, train_cfg, metrics)

  ctx.register(result.best.save(ctx.output_dir / "best.json"))
  ctx.write_csv("history.csv", result.history_rows(), HISTORY_FIELDS)

  summary: dict[str, object] = {
    "n": n,
    "k": train_cfg.k,
    "pool": config.pool,
    "pool_size": len(pool),
    "offsets": list(result.best.offsets),
    "degree": result.best.degree,
    "diameter": finite_or_none(float(result.best_diameter)),
    "avg_path_length": finite_or_none(float(result.best_apl)),
    "episodes": result.episodes,
  }
  if train_cfg.k <= len(expo_generators(n).offsets):
    expo = distance_profile(expo_generators(n, train_cfg.k))
    summary["expo_diameter"] = finite_or_none(float(expo.diameter))
    ctx.log(f"Best D={result.best_diameter} vs expo D={expo.diameter} at K={train_cfg.k}")
  ctx.write_json("summary.json", summary)
  ctx.metadata["best"] = result.best
  ctx.metadata["diameter"] = result.best_diameter
