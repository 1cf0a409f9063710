import math

import numpy as np
import pytest

from irgraph.channel_assign import (ChannelScenario, Exponential, PerPairTable, Uniform,
                                    fading_from_json, gains_to_probabilities, sample_gains,
                                    simulate_assignment, success_probability, survival_matrix,
                                    threshold_graph)
from irgraph.matching import maximum_matching
from irgraph.rng import RngStream


def test_survival_values():
    assert np.all(gains_to_probabilities(Exponential(1.0), 0.0, 4).probs[:4, 4:] == 1.0)
    n = 256
    lam = math.log(math.sqrt(n) / math.log(n))
    s = survival_matrix(Exponential(1.0), lam, n)
    assert s[0, 0] == pytest.approx(math.log(n) / math.sqrt(n), rel=1e-12)
    assert survival_matrix(Uniform(0.0, 1.0), 0.25, 3)[1, 2] == pytest.approx(0.75)


def test_probability_assignment_is_bipartite():
    a = gains_to_probabilities(Exponential(2.0), 0.3, 5)
    assert a.n == 10
    assert np.all(a.probs[:5, :5] == 0) and np.all(a.probs[5:, 5:] == 0)
    assert a.probs[0, 7] == pytest.approx(math.exp(-0.6))


def test_per_pair_table():
    table = ((Exponential(1.0), Uniform(0.0, 2.0)), (Uniform(0.0, 1.0), Exponential(3.0)))
    f = PerPairTable(table)
    s = survival_matrix(f, 0.5, 2)
    np.testing.assert_allclose(s, [[math.exp(-0.5), 0.75], [0.5, math.exp(-1.5)]], rtol=1e-14)
    assert fading_from_json(f.to_json()) == f
    with pytest.raises(ValueError):
        survival_matrix(f, 0.5, 3)
    g = sample_gains(f, 2, RngStream(1))
    assert g.shape == (2, 2) and g[0, 1] <= 2.0


def test_fading_json_and_validation():
    assert fading_from_json('{"kind": "exponential", "rate": 2}') == Exponential(2.0)
    with pytest.raises(ValueError):
        fading_from_json({"kind": "rayleigh"})
    with pytest.raises(ValueError):
        Exponential(0.0)
    with pytest.raises(ValueError):
        ChannelScenario(4, Exponential(), -1.0)
    sc = ChannelScenario(4, Uniform(0.0, 3.0), 1.5)
    assert ChannelScenario.from_json(sc.to_json()) == sc


def test_zero_threshold_matches_everyone():
    r = simulate_assignment(ChannelScenario(16, Exponential(), 0.0), RngStream(3))
    assert r.success and r.matched_count == 16
    assert sorted(r.assignment.values()) == list(range(16))
    est = success_probability(ChannelScenario(8, Exponential(), 0.0), 20, 0)
    assert est["estimate"] == 1.0 and est["wilson95"][1] == 1.0


def test_threshold_above_all_gains():
    r = simulate_assignment(ChannelScenario(8, Uniform(0.0, 1.0), 1.0), RngStream(0))
    assert r.matched_count == 0 and not r.success and math.isnan(r.min_matched_gain)


def test_assignment_uses_gains_above_threshold():
    lam = 0.7
    for t in range(20):
        stream = RngStream(5).child(t)
        r = simulate_assignment(ChannelScenario(20, Exponential(), lam), stream)
        gains = sample_gains(Exponential(), 20, stream)  # same stream, same draws
        assert len(set(r.assignment.values())) == len(r.assignment)
        assert all(gains[u, c] > lam for u, c in r.assignment.items())
        if r.assignment:
            assert r.min_matched_gain > lam


def test_single_user_is_bernoulli():
    lam, T = 0.5, 4000
    est = success_probability(ChannelScenario(1, Exponential(), lam), T, 9)
    s = math.exp(-lam)
    assert abs(est["estimate"] - s) <= 4 * math.sqrt(s * (1 - s) / T)


def test_success_monotone_under_coupling():
    # the same gains thresholded higher give a subgraph, so success cannot return
    lams = [0.5, 1.5, 2.5, 3.0, 3.5]
    for t in range(30):
        gains = sample_gains(Exponential(), 32, RngStream(1).child(t))
        sizes = [len(maximum_matching(threshold_graph(gains, lam))) for lam in lams]
        assert sizes == sorted(sizes, reverse=True)


def test_success_estimate_non_increasing_at_n128():
    lams = [1.0, 2.0, 2.5, 3.0, 3.5]
    ests = [success_probability(ChannelScenario(128, Exponential(), lam), 60, 4) for lam in lams]
    for a, b in zip(ests, ests[1:]):
        assert b["estimate"] <= a["estimate"] or b["wilson95"][0] <= a["wilson95"][1]
