import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irgraph.matching import (Matching, augment_with_pair, bipartite_split, bootstrap_experiment,
                              is_perfect, maximum_matching)
from irgraph.prob_model import Homogeneous, build_assignment
from irgraph.rng import RngStream
from irgraph.sampler import SampledGraph, sample_bipartite

from oracles import brute_max_matching


def random_bipartite(seed, nx=None, ny=None, p=None):
    rng = np.random.default_rng(seed)
    nx = nx or int(rng.integers(1, 7))
    ny = ny or int(rng.integers(1, 7))
    p = float(rng.uniform(0.05, 0.9)) if p is None else p
    n = nx + ny
    X, Y = tuple(range(nx)), tuple(range(nx, n))
    edges = [(x, y) for x in X for y in Y if rng.random() < p]
    return SampledGraph.from_edges(n, edges, (X, Y)), edges


def swap_moves_brute(m, g, w, v):
    """Every result of the allowed moves, found by trying them all."""
    out = []
    if g.has_edge(w, v):
        out.append(set(m.edges) | {(w, v)})
    for u, y in m.edges:
        if g.has_edge(u, v) and g.has_edge(w, y):
            out.append((set(m.edges) - {(u, y)}) | {(u, v), (w, y)})
    return out


def test_complete_3x3_and_empty():
    g = SampledGraph.from_edges(6, [(x, y) for x in range(3) for y in range(3, 6)],
                                ((0, 1, 2), (3, 4, 5)))
    assert len(maximum_matching(g)) == 3
    e = SampledGraph(6, [[] for _ in range(6)], ((0, 1, 2), (3, 4, 5)))
    assert len(maximum_matching(e)) == 0


def test_requires_bipartition():
    with pytest.raises(ValueError):
        maximum_matching(SampledGraph(2, [[1], [0]]))


def test_maximum_matching_matches_brute_force():
    for seed in range(200):
        g, edges = random_bipartite(seed)
        m = maximum_matching(g)
        assert m.is_valid(g)
        assert len(m) == brute_max_matching(g.bipartition[0], g.bipartition[1], edges)
        assert maximum_matching(g) == m


def test_swap_example():
    # u=0, w=1 on the left; y=2, v=3 on the right
    g = SampledGraph.from_edges(4, [(0, 2), (0, 3), (1, 2)], ((0, 1), (2, 3)))
    out = augment_with_pair(Matching(((0, 2),)), g, 1, 3)
    assert out.edges == ((0, 3), (1, 2))


def test_direct_edge():
    g = SampledGraph.from_edges(4, [(0, 2), (1, 3)], ((0, 1), (2, 3)))
    assert augment_with_pair(Matching(((0, 2),)), g, 1, 3).edges == ((0, 2), (1, 3))


def test_augment_rejects_covered_or_wrong_side():
    g = SampledGraph.from_edges(4, [(0, 2), (1, 3)], ((0, 1), (2, 3)))
    m = Matching(((0, 2),))
    with pytest.raises(ValueError):
        augment_with_pair(m, g, 0, 3)
    with pytest.raises(ValueError):
        augment_with_pair(m, g, 3, 1)


def test_maximality_contradiction_and_move_parity():
    checks = 0
    for seed in range(300):
        g, edges = random_bipartite(seed)
        m = maximum_matching(g)
        X, Y = g.bipartition
        free_x = [x for x in X if x not in m.covered]
        free_y = [y for y in Y if y not in m.covered]
        for w, v in itertools.product(free_x, free_y):
            checks += 1
            assert augment_with_pair(m, g, w, v) is None
            assert swap_moves_brute(m, g, w, v) == []
    assert checks > 50


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_augment_on_partial_matchings(seed):
    g, _ = random_bipartite(seed)
    full = maximum_matching(g)
    rng = np.random.default_rng(seed)
    keep = [e for e in full.edges if rng.random() < 0.5]
    m = Matching(tuple(keep))
    X, Y = g.bipartition
    for w in X:
        for v in Y:
            if w in m.covered or v in m.covered:
                continue
            out = augment_with_pair(m, g, w, v)
            moves = swap_moves_brute(m, g, w, v)
            if out is None:
                assert moves == []
            else:
                assert set(out.edges) in moves
                assert len(out) == len(m) + 1 and out.is_valid(g)
                assert {w, v} <= out.covered


@pytest.mark.parametrize("n,size,want", [(4, 2, True), (5, 2, True), (6, 2, False)])
def test_is_perfect(n, size, want):
    m = Matching(tuple((2 * i, 2 * i + 1) for i in range(size)))
    assert is_perfect(m, n) is want


def test_matching_text_round_trip():
    m = Matching(((0, 5), (2, 3)))
    assert m.to_text() == "1 6\n3 4\n"
    assert Matching.from_text(m.to_text()) == m
    with pytest.raises(ValueError):
        Matching(((0, 1), (1, 2)))


def test_bootstrap_extremes():
    r = bootstrap_experiment(build_assignment(Homogeneous(1.0), 12), 5, RngStream(0))
    assert r.e_low["frequency"] == 1.0 and r.perfect["frequency"] == 1.0
    r = bootstrap_experiment(build_assignment(Homogeneous(0.0), 12), 5, RngStream(0))
    assert r.mean_matching_size == 0.0 and r.swap_applies == 0


def test_bootstrap_odd_n_flagged():
    r = bootstrap_experiment(build_assignment(Homogeneous(0.5), 10), 3, RngStream(0))
    assert r.generalized_split and r.z == 2
    assert bipartite_split(5) == ((0, 1, 2), (3, 4))


def test_bootstrap_swap_never_applies_to_maximum():
    r = bootstrap_experiment(build_assignment(Homogeneous(0.1), 40), 20, RngStream(3))
    assert r.pair_checks > 0 and r.swap_applies == 0


def test_bipartite_sampler_feeds_matching():
    a = build_assignment(Homogeneous(0.5), 8)
    g = sample_bipartite(a, bipartite_split(8), RngStream(1))
    assert maximum_matching(g).is_valid(g)
