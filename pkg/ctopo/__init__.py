"""Circulant Cayley graph topology optimizer for multi-agent communication."""

from __future__ import annotations

__version__ = "0.1.0"
__all__ = [
  "baselines",
  "cayley",
  "cli",
  "config",
  "context",
  "core",
  "numtheory",
  "policy",
  "ppo",
  "propagation",
  "search",
  "utils",
  "validators",
]
