import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import brute_ball, brute_components, floyd_warshall, random_graph
from padpart.graph import (
    Graph,
    ball,
    boundary_neighbors,
    cluster_diameter,
    connected_components,
    net_on_paths,
    shortest_paths,
)


def path_graph(weights):
    return Graph(len(weights) + 1, [(i, i + 1, w) for i, w in enumerate(weights)])


# --- graph construction -------------------------------------------------

def test_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0, 1.0)])


def test_rejects_duplicate_edge():
    with pytest.raises(ValueError):
        Graph(2, [(0, 1, 1.0), (1, 0, 2.0)])


def test_rejects_bad_weight_and_range():
    with pytest.raises(ValueError):
        Graph(2, [(0, 1, -1.0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2, 1.0)])


def test_edge_weight_lookup():
    g = path_graph([1.0, 2.0])
    assert g.edge_weight(1, 2) == 2.0
    with pytest.raises(KeyError):
        g.edge_weight(0, 2)


# --- shortest paths -----------------------------------------------------

def test_single_vertex_identity():
    g = Graph(1, [])
    dm = shortest_paths(g, [0], [0])
    assert dm.dist[0] == 0.0
    assert dm.path_to(0) == [0]


def test_path_distances():
    g = path_graph([1.0, 2.0])
    dm = shortest_paths(g, [0])
    assert dm.dist.tolist() == [0.0, 1.0, 3.0]
    assert dm.path_to(2) == [0, 1, 2]


def test_four_cycle_against_bruteforce():
    g = Graph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
    dm = shortest_paths(g, [0])
    expected = floyd_warshall(g)[0]
    assert np.allclose(dm.dist, expected)
    assert dm.dist[2] == 2.0


def test_source_outside_restrict_rejected():
    g = path_graph([1.0, 1.0])
    with pytest.raises(ValueError):
        shortest_paths(g, [0], [1, 2])


def test_unreachable_flagged():
    g = path_graph([1.0, 1.0])
    dm = shortest_paths(g, [0], [0, 2])  # vertex 1 removed
    assert not dm.reachable(2)
    with pytest.raises(ValueError):
        dm.path_to(2)


def test_parent_tie_breaks_to_smallest_id():
    # two equal-length routes into vertex 3, via 1 and via 2
    g = Graph(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)])
    dm = shortest_paths(g, [0])
    assert dm.parent[3] == 1


def test_matches_floyd_warshall_on_random_small_graphs():
    for seed in range(40):
        g = random_graph(seed)
        gen = np.random.default_rng(1000 + seed)
        restrict = [
            v for v in range(g.vertex_count) if gen.random() < 0.8
        ] or [0]
        expected = floyd_warshall(g, restrict)
        for s in restrict:
            dm = shortest_paths(g, [s], restrict)
            got = dm.dist[restrict]
            assert np.allclose(got, expected[s, restrict], equal_nan=False), (
                seed,
                s,
            )


# --- components ---------------------------------------------------------

def test_components_empty_restrict():
    g = path_graph([1.0])
    assert connected_components(g, []) == []


def test_components_connected_graph():
    g = path_graph([1.0, 1.0])
    comps = connected_components(g)
    assert len(comps) == 1
    assert comps[0].tolist() == [0, 1, 2]


def test_components_restriction_splits():
    g = path_graph([1.0, 1.0])
    comps = connected_components(g, [0, 2])
    assert [c.tolist() for c in comps] == [[0], [2]]


def test_components_match_bruteforce():
    for seed in range(25):
        g = random_graph(seed, p=0.2)
        gen = np.random.default_rng(seed)
        restrict = [v for v in range(g.vertex_count) if gen.random() < 0.7]
        got = [c.tolist() for c in connected_components(g, restrict)]
        assert got == brute_components(g, restrict)


# --- balls ---------------------------------------------------------------

def test_ball_radius_zero_is_center():
    g = path_graph([1.0, 1.0])
    assert ball(g, [1], 0.0).tolist() == [1]


def test_ball_on_path():
    g = path_graph([1.0, 1.0])
    assert ball(g, [0], 1.0).tolist() == [0, 1]


def test_ball_grid_center():
    # 3x3 unit grid, middle vertex 4: radius 1 reaches its 4 neighbors
    edges = []
    for i in range(3):
        for j in range(3):
            v = 3 * i + j
            if j < 2:
                edges.append((v, v + 1, 1.0))
            if i < 2:
                edges.append((v, v + 3, 1.0))
    g = Graph(9, edges)
    expected = brute_ball(g, [4], 1.0, range(9))
    assert ball(g, [4], 1.0).tolist() == expected == [1, 3, 4, 5, 7]


def test_ball_negative_radius_rejected():
    g = path_graph([1.0])
    with pytest.raises(ValueError):
        ball(g, [0], -0.5)


def test_ball_includes_exact_boundary():
    g = path_graph([1.0, 1.0, 1.0])
    assert ball(g, [0], 2.0).tolist() == [0, 1, 2]


@settings(deadline=None, max_examples=40)
@given(
    seed=st.integers(0, 10**6),
    r1=st.floats(0, 3),
    r2=st.floats(0, 3),
)
def test_ball_monotone_in_radius(seed, r1, r2):
    g = random_graph(seed % 100)
    lo, hi = sorted((r1, r2))
    small = set(ball(g, [0], lo).tolist())
    large = set(ball(g, [0], hi).tolist())
    assert small <= large


# --- boundary neighbors ---------------------------------------------------

def test_boundary_neighbors_path():
    g = path_graph([1.0, 1.0])
    assert boundary_neighbors(g, [0], [1, 2]).tolist() == [1]


def test_boundary_neighbors_full_set():
    g = path_graph([1.0, 1.0])
    got = set(boundary_neighbors(g, range(3), range(3)).tolist())
    assert got - {0, 1, 2} == set()


def test_boundary_neighbors_disconnected():
    g = Graph(6, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)])
    assert boundary_neighbors(g, [0, 1, 2], [3, 4, 5]).size == 0


# --- nets ----------------------------------------------------------------

def test_net_single_vertex_path():
    g = Graph(1, [])
    assert net_on_paths(g, [[0]], 3.0) == [0]


def test_net_unit_path_spacing_three():
    g = path_graph([1.0] * 10)
    net = net_on_paths(g, [list(range(11))], 3.0)
    assert net == [0, 3, 6, 9]


def test_net_shared_root_short_paths():
    g = Graph(5, [(2, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 4, 1.0)])
    net = net_on_paths(g, [[2, 1, 0], [2, 3, 4]], 10.0)
    assert net == [2]


def test_net_rejects_nonpositive_spacing():
    g = path_graph([1.0])
    with pytest.raises(ValueError):
        net_on_paths(g, [[0, 1]], 0.0)


def test_net_zero_weight_run_collapses():
    g = path_graph([0.0, 0.0, 1.0])
    assert net_on_paths(g, [[0, 1, 2, 3]], 0.5) == [0, 3]


@settings(deadline=None, max_examples=40)
@given(weights=st.lists(st.floats(0.1, 4.0), min_size=1, max_size=24),
       spacing=st.floats(0.2, 5.0))
def test_net_packing_and_coverage(weights, spacing):
    g = path_graph(weights)
    path = list(range(len(weights) + 1))
    net = net_on_paths(g, [path], spacing)
    pos = np.concatenate(([0.0], np.cumsum(weights)))
    chosen = sorted(pos[v] for v in net)
    # consecutive selected points at least `spacing` apart in path metric
    assert all(b - a >= spacing - 1e-12 for a, b in zip(chosen, chosen[1:]))
    # every path vertex within `spacing` of a selected point on the path
    for v in path:
        assert min(abs(pos[v] - c) for c in chosen) <= spacing + 1e-12


# --- diameters -------------------------------------------------------------

def test_diameter_singleton():
    g = path_graph([1.0])
    assert cluster_diameter(g, [0], "weak") == 0.0
    assert cluster_diameter(g, [0], "strong") == 0.0


def test_diameter_opposite_cycle_vertices():
    g = Graph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
    assert cluster_diameter(g, [0, 2], "weak") == 2.0
    assert cluster_diameter(g, [0, 2], "strong") == math.inf


def test_diameter_triangle_pair():
    g = Graph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    d = floyd_warshall(g, [0, 2])
    assert cluster_diameter(g, [0, 2], "weak") == 1.0
    assert cluster_diameter(g, [0, 2], "strong") == d[0, 2] == 1.0


def test_diameter_empty_rejected():
    g = path_graph([1.0])
    with pytest.raises(ValueError):
        cluster_diameter(g, [], "weak")


def test_strong_at_least_weak():
    for seed in range(15):
        g = random_graph(seed, p=0.4)
        gen = np.random.default_rng(seed)
        cluster = [v for v in range(g.vertex_count) if gen.random() < 0.6] or [0]
        weak = cluster_diameter(g, cluster, "weak")
        strong = cluster_diameter(g, cluster, "strong")
        assert strong >= weak - 1e-12
