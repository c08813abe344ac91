import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abcnet.errors import InvalidInputError
from abcnet.inet import InfluenceEvent, Layer, undirected_view, window_network
from abcnet.netmetrics import (
    ccdf,
    component_stats,
    destruction_curve,
    diversity_from_areas,
    interaction_diversity,
    weighted_degree,
)

import oracles
from conftest import random_events, random_symmetric

seeds = st.integers(0, 2**32 - 1)


def complete_events(n, t=1):
    return [InfluenceEvent(t, i, j, Layer.EMPLOYED) for i in range(n) for j in range(i)]


def test_weighted_degree_simple():
    assert not weighted_degree(np.zeros((4, 4))).any()
    u = np.zeros((5, 5))
    u[1, 2] = u[2, 1] = 4
    assert weighted_degree(u).tolist() == [0, 4, 4, 0, 0]
    u[3, 3] = 2
    assert weighted_degree(u)[3] == 2


@given(seeds, st.integers(1, 15))
def test_weighted_degree_row_sums(seed, n):
    u = random_symmetric(np.random.default_rng(seed), n)
    expected = [sum(u[i, j] for j in range(n)) for i in range(n)]
    assert weighted_degree(u).tolist() == expected


def test_weighted_degree_rejects_asymmetric():
    with pytest.raises(InvalidInputError):
        weighted_degree(np.array([[0, 1], [0, 0]]))


def test_ccdf_cases():
    assert ccdf([3, 3, 3]) == [(3.0, 1.0)]
    pts = ccdf([1, 2, 3])
    assert [v for v, _ in pts] == [1, 2, 3]
    assert np.allclose([f for _, f in pts], [1, 2 / 3, 1 / 3])
    with pytest.raises(InvalidInputError):
        ccdf([])


@given(st.lists(st.integers(0, 20), min_size=1, max_size=60))
def test_ccdf_counting_oracle(values):
    pts = ccdf(values)
    assert pts[0][1] == 1.0
    assert all(a[1] > b[1] for a, b in zip(pts, pts[1:]))
    for v, frac in pts:
        assert frac == sum(x >= v for x in values) / len(values)


@pytest.mark.parametrize("n", [2, 3, 10, 50])
def test_complete_uniform_graph_area_one(n):
    u = np.ones((n, n)) - np.eye(n)
    curve = destruction_curve(u)
    assert curve.area == 1.0
    assert curve.thresholds.tolist() == [0.0, 1.0]
    assert curve.components_at.tolist() == [1, n]


def test_two_node_edge():
    u = np.array([[0, 3], [3, 0]])
    assert destruction_curve(u).area == 1.0
    assert diversity_from_areas([1.0], 2) == 0.5


def test_empty_graph_is_degenerate():
    curve = destruction_curve(np.zeros((6, 6)))
    assert curve.degenerate and curve.area == 6.0
    # self-loops alone do not connect anything
    curve = destruction_curve(np.diag([1, 2, 0, 0]))
    assert curve.degenerate and curve.area == 4.0


def test_star_unequal_weights_fragment_earlier():
    uniform = np.zeros((5, 5))
    uniform[0, 1:] = uniform[1:, 0] = 2
    heavy = uniform.copy()
    heavy[0, 1] = heavy[1, 0] = 8
    a, b = destruction_curve(uniform).area, destruction_curve(heavy).area
    assert a == 1.0
    assert b > a
    # normalized weights (1, .25, .25, .25): C = 1 on [0, .25), 4 on [.25, 1)
    assert b == pytest.approx(0.25 + 4 * 0.75, abs=1e-15)


def test_threshold_removes_equal_weights():
    u = np.array([[0, 1, 0], [1, 0, 2], [0, 2, 0]])
    curve = destruction_curve(u)
    assert curve.thresholds.tolist() == [0.0, 0.5, 1.0]
    assert curve.components_at.tolist() == [1, 2, 3]


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 20))
def test_destruction_curve_properties(seed, n):
    u = random_symmetric(np.random.default_rng(seed), n, density=0.4)
    curve = destruction_curve(u)
    assert np.all(np.diff(curve.components_at) >= 0)
    assert curve.components_at[-1] == n
    assert curve.thresholds[0] == 0.0 and curve.thresholds[-1] == 1.0
    assert 1.0 <= curve.area <= n
    assert curve.area == pytest.approx(oracles.destruction_area(u), abs=1e-12)
    if curve.degenerate:
        assert curve.area == n
        return
    w = u / u[~np.eye(n, dtype=bool)].max()
    for tau, c in zip(curve.thresholds, curve.components_at):
        assert c == oracles.components_above(w, tau)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 12))
def test_uniform_weights_minimize_area(seed, n):
    rng = np.random.default_rng(seed)
    u = random_symmetric(rng, n, density=0.5, loops=False)
    if not u.any():
        return
    uniform = (u > 0) * u.max()
    assert destruction_curve(uniform).area <= destruction_curve(u).area + 1e-12


def test_component_stats_simple():
    assert component_stats(np.zeros((5, 5))) == (5, 1, 0, 0)
    u = np.zeros((5, 5))
    u[0, 1] = u[1, 0] = 2
    assert component_stats(u) == (4, 2, 1, 2)


def test_component_stats_tie_breaks():
    u = np.zeros((6, 6))
    u[0, 1] = u[1, 0] = 1
    u[4, 5] = u[5, 4] = 3
    assert component_stats(u) == (4, 2, 1, 3)  # heavier pair wins
    u[4, 5] = u[5, 4] = 1
    u[2, 2] = 9  # isolated self-loop node does not beat a pair
    assert component_stats(u) == (4, 2, 1, 1)
    u[0, 0] = 1  # self-loop counted in the giant's edges and weight
    assert component_stats(u) == (4, 2, 2, 2)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 20))
def test_component_stats_oracle(seed, n):
    u = random_symmetric(np.random.default_rng(seed), n, density=0.15)
    assert tuple(component_stats(u)) == oracles.component_stats(u)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 15))
def test_adding_edge_never_increases_components(seed, n):
    rng = np.random.default_rng(seed)
    u = random_symmetric(rng, n, density=0.2)
    before = component_stats(u)
    i, j = rng.choice(n, 2, replace=False)
    u[i, j] += 1
    u[j, i] += 1
    after = component_stats(u)
    assert after.components <= before.components
    assert after.giant_nodes >= before.giant_nodes


def test_id_complete_uniform_graph():
    n = 50
    assert abs(interaction_diversity(complete_events(n), 1, [1], n) - (1 - 1 / n)) <= 1e-12


def test_id_empty_network():
    assert interaction_diversity([], 10, [1, 5, 10], n=7) == 0.0


def test_id_two_nodes():
    events = [InfluenceEvent(1, 0, 1, Layer.EMPLOYED)]
    assert interaction_diversity(events, 1, [1], n=2) == 0.5


def test_id_ignores_scout_self_loops():
    events = [InfluenceEvent(1, i, i, Layer.SCOUT) for i in range(5)]
    assert interaction_diversity(events, 1, [1], n=5) == 0.0


def test_id_averages_over_windows():
    # window 1 at t=2 is empty (A = 3); window 2 holds the complete graph (A = 1)
    events = complete_events(3, t=1)
    assert interaction_diversity(events, 2, [1, 2], n=3) == pytest.approx(1 - (3 + 1) / (3 * 2))


def test_id_precondition():
    with pytest.raises(InvalidInputError):
        interaction_diversity([], 4, [1, 5], n=3)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_id_in_unit_interval(seed):
    rng = np.random.default_rng(seed)
    events = random_events(rng, 8, 15)
    v = interaction_diversity(events, 15, [1, 5, 10], n=8)
    assert 0.0 <= v <= 1 - 1 / 8


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_component_stats_monotone_in_window(seed):
    rng = np.random.default_rng(seed)
    events = random_events(rng, 10, 30, per_iteration=3)
    prev = None
    for tw in (1, 5, 10, 25, 30):
        stats = component_stats(undirected_view(window_network(events, 30, tw, n=10)))
        if prev is not None:
            assert stats.components <= prev.components
            assert stats.giant_nodes >= prev.giant_nodes
        prev = stats
