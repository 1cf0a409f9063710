import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irgraph import sampler as sampler_mod
from irgraph.prob_model import Homogeneous, ProbabilityAssignment, TwoBlock, build_assignment
from irgraph.rng import RngStream
from irgraph.sampler import (SampledGraph, expansion_statistics, neighborhood_out, sample_bipartite,
                             sample_graph)


def brute_nout(g, S):
    S = set(S)
    return {v for u in range(g.n) for v in range(g.n) if u in S and v not in S and g.has_edge(u, v)}


def test_complete_and_empty():
    g = sample_graph(build_assignment(Homogeneous(1.0), 5), RngStream(0))
    assert g.edge_count == 10
    g = sample_graph(build_assignment(Homogeneous(0.0), 5), RngStream(0))
    assert g.edge_count == 0


@pytest.mark.slow
def test_mean_edge_count_homogeneous():
    a = build_assignment(Homogeneous(0.3), 1000)
    pairs = 1000 * 999 // 2
    counts = [sample_graph(a, RngStream(5, t)).edge_count for t in range(200)]
    sd = math.sqrt(pairs * 0.3 * 0.7 / 200)
    assert abs(np.mean(counts) - 0.3 * pairs) <= 3 * sd


def test_per_pair_unbiased():
    rng = np.random.default_rng(1)
    m = np.triu(rng.uniform(0.05, 0.95, (7, 7)), 1)
    a = ProbabilityAssignment(m + m.T)
    T = 10_000
    hits = np.zeros((7, 7))
    for t in range(T):
        g = sample_graph(a, RngStream(11, t))
        for u, v in g.edges():
            hits[u, v] += 1
    pairs = list(itertools.combinations(range(7), 2))[:20]
    for u, v in pairs:
        p = a.probs[u, v]
        assert abs(hits[u, v] / T - p) <= 4 * math.sqrt(p * (1 - p) / T)


def test_draw_discipline_one_double_per_pair():
    a = build_assignment(Homogeneous(0.4), 9)
    draws = RngStream(3).generator().random(36)
    want = [pair for pair, x in zip(itertools.combinations(range(9), 2), draws) if x < 0.4]
    assert list(sample_graph(a, RngStream(3)).edges()) == want


def test_blocked_draws_equal_single_stream(monkeypatch):
    a = build_assignment(Homogeneous(0.2), 60)
    whole = sample_graph(a, RngStream(8))
    monkeypatch.setattr(sampler_mod, "_BLOCK_PAIRS", 50)
    assert sample_graph(a, RngStream(8)) == whole


def test_skip_sampling_distribution():
    a = build_assignment(Homogeneous(0.05), 400)
    pairs = 400 * 399 // 2
    counts = [sample_graph(a, RngStream(2, t), skip=True).edge_count for t in range(100)]
    sd = math.sqrt(pairs * 0.05 * 0.95 / 100)
    assert abs(np.mean(counts) - 0.05 * pairs) <= 4 * sd
    g = sample_graph(a, RngStream(2), skip=True)
    assert all(u < v for u, v in g.edges())
    with pytest.raises(ValueError):
        sample_graph(build_assignment(TwoBlock(0.3, 0.1), 10), RngStream(0), skip=True)


def test_determinism():
    a = build_assignment(Homogeneous(0.3), 50)
    assert sample_graph(a, RngStream(4, 1)).to_edgelist() == sample_graph(a, RngStream(4, 1)).to_edgelist()


def test_bipartite_complete_cross():
    a = build_assignment(Homogeneous(1.0), 4)
    g = sample_bipartite(a, ((0, 1), (2, 3)), RngStream(0))
    assert sorted(g.edges()) == [(0, 2), (0, 3), (1, 2), (1, 3)]


def test_bipartite_mean_and_determinism():
    z, p = 5, 0.3
    a = build_assignment(Homogeneous(p), 4 * z)
    split = (tuple(range(2 * z)), tuple(range(2 * z, 4 * z)))
    counts = [sample_bipartite(a, split, RngStream(6, t)).edge_count for t in range(2000)]
    sd = math.sqrt(4 * z * z * p * (1 - p) / 2000)
    assert abs(np.mean(counts) - 4 * z * z * p) <= 4 * sd
    assert sample_bipartite(a, split, RngStream(1)) == sample_bipartite(a, split, RngStream(1))


def test_bipartite_rejects_bad_split():
    a = build_assignment(Homogeneous(0.5), 4)
    with pytest.raises(ValueError):
        sample_bipartite(a, ((0, 1), (1, 2, 3)), RngStream(0))
    with pytest.raises(ValueError):
        sample_bipartite(a, ((0,), (1, 2)), RngStream(0))


def test_neighborhood_examples():
    g = SampledGraph.from_edges(3, [(0, 1), (1, 2)])
    assert neighborhood_out(g, {1}) == {0, 2}
    assert neighborhood_out(g, {0, 1, 2}) == set()


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 15), st.integers(0, 2**32 - 1), st.floats(0.0, 1.0))
def test_neighborhood_matches_pair_scan(n, seed, p):
    g = sample_graph(build_assignment(Homogeneous(p), n), RngStream(seed))
    S = np.random.default_rng(seed).choice(n, size=max(1, n // 3), replace=False).tolist()
    assert neighborhood_out(g, S) == brute_nout(g, S)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**32 - 1), st.floats(0.0, 1.0))
def test_edgelist_round_trip(n, seed, p):
    g = sample_graph(build_assignment(Homogeneous(p), n), RngStream(seed))
    text = g.to_edgelist()
    assert text.splitlines()[0] == f"{n} {g.edge_count}"
    assert SampledGraph.from_edgelist(text) == g


def test_without_vertex():
    g = SampledGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    h, labels = g.without_vertex(1)
    assert labels == [0, 2, 3]
    assert sorted((labels[u], labels[v]) for u, v in h.edges()) == [(0, 3), (2, 3)]


def test_expansion_single_vertex_concentrates():
    n, p = 2000, 0.01
    a = build_assignment(Homogeneous(p), n)
    g = sample_graph(a, RngStream(1))
    (row,) = expansion_statistics(a, g, [1], 400, RngStream(2))
    assert abs(row.mean - (n - 1) * p) <= 4 * math.sqrt(n * p / 400)
    assert row.in_regime


def test_expansion_regime_flag():
    a = build_assignment(Homogeneous(0.1), 100)
    g = sample_graph(a, RngStream(1))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        (row,) = expansion_statistics(a, g, [5], 10, RngStream(2))
    assert not row.in_regime and w


@pytest.mark.slow
@pytest.mark.filterwarnings("ignore:s=8 exceeds")
def test_expansion_in_interval_at_scale():
    n = 4096
    p = n ** -0.5
    a = build_assignment(Homogeneous(p), n)
    g = sample_graph(a, RngStream(10))
    rows = expansion_statistics(a, g, [1, 2, 4, 8], 200, RngStream(11))
    for row in rows:
        assert row.in_interval_fraction >= 0.95, row
    # 1/(10p) = 6.4, so the largest size is measured but flagged
    assert [r.in_regime for r in rows] == [True, True, True, False]
