"""Shared constants for the cayley-topo toolkit."""

from __future__ import annotations

# Builtin topology names
TOPOLOGY_EXPO = "expo"
TOPOLOGY_FIBONACCI = "fibonacci"
TOPOLOGY_PRIME = "prime"
TOPOLOGY_RING = "ring"
TOPOLOGY_COMPLETE = "complete"
TOPOLOGY_BROADCAST = "broadcast"

# Candidate pool modes
POOL_ALL = "all"
POOL_PRIMES = "primes"
POOL_FILE = "file"

# Edge removal modes
BIAS_RANDOM = "random"
BIAS_DISTANCE = "distance"

# Broadcast channel modes
BROADCAST_COLLISION = "collision"
BROADCAST_COMPLETE = "complete"
BROADCAST_Q_PERSISTENT = "persistent"
BROADCAST_Q_ADAPTIVE = "adaptive"

# Gossip defaults (dissemination protocol)
DEFAULT_LINK_SUCCESS = 0.75
DEFAULT_MAX_ROUNDS = 120
DEFAULT_TRIALS = 30
DEFAULT_THRESHOLDS = (0.9, 1.0)

# Link-failure defaults
DEFAULT_FAILURE_RATES = (0.30, 0.50, 0.70, 0.85)
DEFAULT_REALIZATIONS = 20
DEFAULT_LCC_THRESHOLD = 0.8

# Communication-load defaults
DEFAULT_LOAD_STEPS = 50
DEFAULT_INJECT_PROB = 0.02

# PPO defaults
DEFAULT_HIDDEN = 32
DEFAULT_LAMBDA_OMEGA = 1.0
DEFAULT_LAMBDA_G = 1.0
DEFAULT_ETA = 2.0
DEFAULT_CLIP = 0.2
DEFAULT_GAMMA = 1.0
DEFAULT_GAE_LAMBDA = 0.95
DEFAULT_LEARNING_RATE = 3e-3
DEFAULT_EPISODES_PER_BATCH = 64
DEFAULT_EPOCHS = 4
DEFAULT_BATCHES = 200

# Search / cache limits
DEFAULT_BRUTEFORCE_CAP = 1_000_000
DEFAULT_CACHE_SIZE = 65_536

# Run defaults
DEFAULT_SEED = 0
DEFAULT_DMAX = 14
DEFAULT_LABEL = "latest"
DEFAULT_LAYOUT_N = 20

# Thread pool configuration
MAX_WORKER_THREADS = 32  # Maximum concurrent workers
MAX_PROCESS_WORKERS = 8  # Cap for CPU-bound work


def get_optimal_thread_workers(cap: int | None = None) -> int:
  """
  Calculate the worker count for the simulation and rollout thread pools.

  Numpy releases the GIL inside its kernels, so threads scale with cores here.

  Args:
      cap: Optional user-provided upper bound (the --threads flag).

  Returns:
      Number of workers, at least 1.
  """
  import os

  cpu_count = os.cpu_count() or 1
  workers = min(cpu_count, MAX_PROCESS_WORKERS, MAX_WORKER_THREADS)
  if cap is not None:
    workers = min(workers, cap)
  return max(1, workers)
