"""bruteforce: exhaustive optimum over every size-K subset of the pool."""

from __future__ import annotations

from ..context import RunContext
from ..search import exhaustive_search
from ..utils import finite_or_none
from . import build_pool

COMMAND = "bruteforce"


def run(ctx: RunContext) -> None:
  config = ctx.config
  n = config.require_n()
  pool = build_pool(config)
  result = exhaustive_search(n, pool, config.k, config.bruteforce_cap)

  ctx.register(result.best.save(ctx.output_dir / "best.json"))
  ctx.write_json(
    "summary.json",
    {
      "n": n,
      "k": config.k,
      "pool": config.pool,
      "pool_size": len(pool),
      "offsets": list(result.best.offsets),
      "diameter": finite_or_none(float(result.diameter)),
      "avg_path_length": finite_or_none(float(result.avg_path_length)),
      "evaluated": result.evaluated,
      "optimal_count": result.optimal_count,
    },
  )
  ctx.metadata["best"] = result.best
  ctx.metadata["diameter"] = result.diameter
