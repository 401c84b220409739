"""Experiment simulators: push gossip, link failures, communication load, broadcast."""

from __future__ import annotations

__all__ = [
  "broadcast",
  "gossip",
  "load",
  "robustness",
  "topology",
]
