import math
import os
from pathlib import Path

import pytest

import ncomm

ROOT = Path(os.environ.get("NCOMM_SOURCE_DIR", Path(__file__).resolve().parents[2]))
KARATE = ROOT / "data" / "karate.txt"


def test_triangle_likelihood():
    g = ncomm.Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert (g.num_nodes, g.num_edges) == (3, 3)
    assert g.degrees == [2, 2, 2]
    assert ncomm.log_marginal_likelihood(g, [1, 1, 1]) == pytest.approx(math.log(8748 / 10321920), abs=1e-12)


def test_text_parsing_and_errors():
    g = ncomm.Graph.from_text("# c\na a\n")
    assert g.degrees == [2]
    with pytest.raises(ValueError):
        ncomm.Graph.from_text("1 2 3\n")
    with pytest.raises(ValueError):
        ncomm.Graph.from_text("")


def test_prior_helpers():
    assert ncomm.prior_k_pmf(3, 0.5, 2) == pytest.approx(0.5)
    assert ncomm.k_eff([2, 1, 1]) == pytest.approx(2 ** 1.5)
    g = ncomm.Graph.from_edges(4, [(0, 1)])
    assert ncomm.log_prior(g, [1, 1, 1, 1]) == pytest.approx(math.log(12))
    labels, k = ncomm.sample_partition_queueing(10, 1.0, seed=3)
    assert sorted(set(labels)) == list(range(1, k + 1))


def test_karate_inference():
    g = ncomm.Graph.load(str(KARATE))
    summary = ncomm.infer(g, sweeps=1000, burn_in=500, chains=4, seed=5)
    assert summary["n"] == 34 and summary["m"] == 78
    assert summary["k_mode"] == 2
    assert sum(summary["k_histogram"].values()) == pytest.approx(1.0)
    assert len(summary["traces"]) == 4
    for trace in summary["traces"]:
        assert all(e <= k + 1e-12 for e, k in zip(trace["keff"], trace["k"]))
    again = ncomm.infer(g, sweeps=1000, burn_in=500, chains=4, seed=5)
    assert again["traces"] == summary["traces"]


def test_config_error():
    g = ncomm.Graph.load(str(KARATE))
    with pytest.raises(ValueError):
        ncomm.infer(g, sweeps=10, burn_in=20)


def test_generators_round_trip():
    g, labels = ncomm.planted_partition(400, 4, 20.0, 0.9, seed=2)
    assert g.num_nodes == 400 and len(labels) == 400
    summary = ncomm.infer(g, sweeps=200, burn_in=100, chains=2, initial_labels=labels)
    assert summary["k_mode"] == 4
    omega = ncomm.omega_hat(g, labels)
    assert len(omega) == 4 and omega[0][0] > omega[0][1]
    d, _ = ncomm.detectability_graph(1000, 4, 30.0, 2.0, seed=1)
    assert abs(2 * d.num_edges / 1000 - 30) < 1.0
    p, plabels = ncomm.powerlaw_graph(1000, 40, 0.1, seed=1)
    assert p.num_nodes <= 1000 and len(plabels) == 1000
