import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypapprox.approximation import (
    branch_point,
    build_approximation,
    check_geodesic_normal_form,
    cone_points,
    default_k_max,
    graph_distance,
    greedy_separated_net,
    is_splitting,
    joined_by_radial_geodesic,
    radial_geodesic,
    splitting_vertices,
    structural_check_suite,
    truncation_level,
)
from hypapprox.errors import (
    DegenerateSpace,
    InvalidParameter,
    NoRadialPath,
)
from hypapprox.fixtures import line_space, ultrametric_space
from hypapprox.metric import space_from_points, validate_metric
from oracles import brute_ball, floyd_warshall, is_separated_net, radial_reachable


def two_point_space(d=1.0):
    return validate_metric(np.array([[0.0, d], [d, 0.0]]), ["a", "b"])


# --- nets and levels ---------------------------------------------------

def test_greedy_net_is_maximal_separated(corpus):
    for sp in corpus.values():
        for a in (0.05, 0.3, 1.0, 5.0):
            net = greedy_separated_net(sp, a)
            assert is_separated_net(sp.dist, net, a)


def test_greedy_net_rejects_bad_separation():
    with pytest.raises(InvalidParameter):
        greedy_separated_net(line_space(3), 0.0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 200), min_size=2, max_size=12, unique=True),
       st.floats(0.01, 50.0))
def test_greedy_net_property(positions, a):
    sp = space_from_points(np.array(positions, dtype=float))
    assert is_separated_net(sp.dist, greedy_separated_net(sp, a), a)


def test_truncation_level_definition(corpus):
    r = 1 / 6
    for sp in corpus.values():
        k = truncation_level(sp, r)
        assert sp.diam < r ** k
        assert sp.diam >= r ** (k + 1)


def test_truncation_level_examples():
    assert truncation_level(two_point_space(5.0), 1 / 6) == -1
    assert truncation_level(two_point_space(1 / 7), 1 / 6) == 1
    with pytest.raises(DegenerateSpace):
        truncation_level(validate_metric(np.zeros((1, 1)), ["a"]), 1 / 6)
    with pytest.raises(InvalidParameter):
        truncation_level(two_point_space(), 0.5)


def test_default_k_max_singleton_balls(corpus):
    r = 1 / 6
    for sp in corpus.values():
        k = default_k_max(sp, r)
        assert 2 * r ** k < sp.min_pos_dist
        assert 2 * r ** (k - 1) >= sp.min_pos_dist


# --- construction ------------------------------------------------------

def test_two_point_space_by_hand():
    g = build_approximation(two_point_space(1.0), 1 / 6)
    # root at level -1 (whole space), level 0 whole-ball vertex, two
    # singletons at level 1
    assert g.k_min == -1 and g.k_max == 1
    assert [len(g.levels[k]) for k in (-1, 0, 1)] == [1, 1, 2]
    assert g.root.ball == frozenset({0, 1})
    top = [g.vertices[v] for v in g.levels[1]]
    assert sorted(len(t.ball) for t in top) == [1, 1]
    kinds = sorted(e.kind for e in g.edges)
    assert kinds == ["radial", "radial", "radial"]  # no horizontal edges
    assert is_splitting(g, g.levels[0][0])
    assert not is_splitting(g, g.root.id)


def test_balls_match_brute_force(corpus_graphs):
    for g in corpus_graphs.values():
        for v in g.vertices:
            assert v.ball == brute_ball(g.space.dist, v.center, 2 * g.r ** v.level)
            assert v.radius == 2 * g.r ** v.level


def test_no_duplicate_balls_per_level(corpus_graphs):
    for g in corpus_graphs.values():
        for ids in g.levels.values():
            balls = [g.vertices[v].ball for v in ids]
            assert len(balls) == len(set(balls))


def test_edges_match_definitions(corpus_graphs):
    for g in corpus_graphs.values():
        horizontal = {frozenset((e.u, e.v)) for e in g.edges
                      if e.kind == "horizontal"}
        radial = {frozenset((e.u, e.v)) for e in g.edges if e.kind == "radial"}
        for u in range(g.n_vertices):
            for v in range(u + 1, g.n_vertices):
                vu, vv = g.vertices[u], g.vertices[v]
                if vu.level == vv.level:
                    expect = not vu.ball.isdisjoint(vv.ball)
                    assert (frozenset((u, v)) in horizontal) == expect
                elif abs(vu.level - vv.level) == 1:
                    lo, hi = (vu, vv) if vu.level < vv.level else (vv, vu)
                    expect = hi.ball <= lo.ball
                    assert (frozenset((u, v)) in radial) == expect
                else:
                    assert frozenset((u, v)) not in horizontal | radial


def test_distance_edge_rule_is_superset(corpus):
    sp = corpus["line25"]
    g_pt = build_approximation(sp, 1 / 6, edge_rule="pointset")
    g_d = build_approximation(sp, 1 / 6, edge_rule="distance")
    h_pt = {frozenset((e.u, e.v)) for e in g_pt.edges if e.kind == "horizontal"}
    h_d = {frozenset((e.u, e.v)) for e in g_d.edges if e.kind == "horizontal"}
    assert h_pt <= h_d
    with pytest.raises(InvalidParameter):
        build_approximation(sp, 1 / 6, edge_rule="nope")


def test_every_vertex_has_radial_parent(corpus_graphs):
    for g in corpus_graphs.values():
        for v in g.vertices:
            if v.level > g.k_min:
                assert g.radial_parents[v.id], v


def test_k_max_override():
    sp = line_space(25)
    g = build_approximation(sp, 1 / 6, k_max_override=0)
    assert g.k_max == 0
    with pytest.raises(InvalidParameter):
        build_approximation(sp, 1 / 6, k_max_override=-10)


def test_vertex_at_and_root(corpus_graphs):
    g = corpus_graphs["line25"]
    for v in g.vertices:
        assert g.vertex_at(v.level, v.center) == v
    assert g.root.level == g.k_min
    with pytest.raises(KeyError):
        g.vertex_at(g.k_min, -5)


# --- distances, splitting, cone points ---------------------------------

def test_graph_distance_matches_floyd_warshall(corpus_graphs):
    for g in corpus_graphs.values():
        oracle = floyd_warshall(g.n_vertices, [(e.u, e.v) for e in g.edges])
        assert np.array_equal(g.distance_matrix, oracle)


def test_graph_is_connected(corpus_graphs):
    for g in corpus_graphs.values():
        assert (g.distance_matrix >= 0).all()


def test_splitting_definition_brute(corpus_graphs):
    for g in corpus_graphs.values():
        split = set(splitting_vertices(g))
        for v in g.vertices:
            if v.level >= g.k_max:
                expect = False
            else:
                expect = any(g.vertices[w].ball < v.ball
                             for w in g.levels[v.level + 1])
            assert (v.id in split) == expect


def test_root_splits_on_line():
    g = build_approximation(line_space(25), 1 / 6)
    assert is_splitting(g, g.root.id)


def test_up_reach_matches_dfs(corpus_graphs):
    for g in corpus_graphs.values():
        for u in (0, g.n_vertices // 2, g.n_vertices - 1):
            mask = g.up_reach[u]
            assert {v for v in range(g.n_vertices) if mask >> v & 1} \
                == radial_reachable(g, u)


def test_cone_and_branch_points(corpus_graphs):
    for g in corpus_graphs.values():
        deep = g.levels[g.k_max]
        u, v = deep[0], deep[-1]
        cones = cone_points(g, [u, v])
        assert g.root.id in cones
        for c in cones:
            reach = radial_reachable(g, c)
            assert u in reach and v in reach
        w = branch_point(g, u, v)
        assert w in cones
        assert g.vertices[w].level == max(g.vertices[c].level for c in cones)
    with pytest.raises(InvalidParameter):
        cone_points(g, [])


def test_radial_geodesic_paths(corpus_graphs):
    for g in corpus_graphs.values():
        top = g.levels[g.k_max][0]
        for tie in ("low", "high"):
            path = radial_geodesic(g, g.root.id, top, tie)
            ids = path.vertex_ids
            assert ids[0] == g.root.id and ids[-1] == top
            levels = [g.vertices[i].level for i in ids]
            assert levels == list(range(g.k_min, g.k_max + 1))
            assert path.length == g.k_max - g.k_min
            for a, b in zip(ids, ids[1:]):
                assert b in g.radial_children[a]


def test_radial_geodesic_rejects_unreachable():
    g = build_approximation(line_space(25), 1 / 6)
    a, b = g.levels[g.k_max][0], g.levels[g.k_max][-1]
    assert not joined_by_radial_geodesic(g, a, b)
    with pytest.raises(NoRadialPath):
        radial_geodesic(g, a, b)


def test_normal_form_check_passes(corpus_graphs):
    for g in corpus_graphs.values():
        rep = check_geodesic_normal_form(g)
        assert rep["passed"], rep


def test_structural_suite_shape(corpus_graphs):
    g = corpus_graphs["ultrametric16"]
    suite = structural_check_suite(g)
    assert set(suite) == {"splitting_ball_diameter", "intersecting_ball_distance",
                          "common_cone_point", "branch_diameter_ratio",
                          "geodesic_normal_form"}
    assert all(rep["passed"] for rep in suite.values())


def test_graph_distance_helper(corpus_graphs):
    g = corpus_graphs["cantor4"]
    assert graph_distance(g, 0, 0) == 0
    assert graph_distance(g, 0, 1) == int(g.distance_matrix[0, 1])
