"""Bayesian estimation of the number of communities in a network."""

import json

from ._core import (
    ConfigError,
    Graph,
    ParseError,
    detectability_graph,
    k_eff,
    log_marginal_likelihood,
    log_prior,
    omega_hat,
    planted_partition,
    powerlaw_graph,
    prior_k_pmf,
    sample_partition_queueing,
)
from ._core import _infer_json

__all__ = [
    "ConfigError",
    "Graph",
    "ParseError",
    "detectability_graph",
    "infer",
    "k_eff",
    "log_marginal_likelihood",
    "log_prior",
    "omega_hat",
    "planted_partition",
    "powerlaw_graph",
    "prior_k_pmf",
    "sample_partition_queueing",
]


def infer(graph, sweeps=2000, burn_in=1000, chains=10, mu=1.0, seed=1, threads=0, initial_labels=None):
    """Sample P(k|A) and return the summary as a dict.

    Keys match the CLI's summary.json, plus ``traces`` with the per-sweep k
    and k_eff of every chain. ``k_histogram`` is keyed by int here.
    """
    doc = json.loads(
        _infer_json(graph, sweeps, burn_in, chains, mu, seed, threads, list(initial_labels or []))
    )
    doc["k_histogram"] = {int(k): p for k, p in doc["k_histogram"].items()}
    return doc
