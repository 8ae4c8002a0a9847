import numpy as np
import pytest

from hypapprox.approximation import build_approximation
from hypapprox.errors import DegenerateLevel, TooLarge
from hypapprox.fixtures import line_space, ultrametric_space
from hypapprox.hyperbolicity import (
    _delta_from_distances,
    delta_four_point,
    fit_visual_constants,
    gromov_product,
    visuality_constant,
)
from hypapprox.metric import validate_metric
from oracles import brute_delta, defect


def small_graphs():
    yield build_approximation(ultrametric_space(depth=2), 1 / 6)
    yield build_approximation(line_space(5), 1 / 6)
    yield build_approximation(
        validate_metric(np.array([[0.0, 1.0], [1.0, 0.0]]), ["a", "b"]), 1 / 6)


def test_gromov_product_definition(corpus_graphs):
    g = corpus_graphs["line25"]
    dm = g.distance_matrix
    for (x, y, o) in [(0, 1, 2), (5, 9, 0), (3, 3, 7)]:
        assert gromov_product(g, x, y, o) == \
            (int(dm[x, o]) + int(dm[y, o]) - int(dm[x, y])) / 2


def test_delta_matches_brute_oracle():
    for g in small_graphs():
        rep = delta_four_point(g, max_exhaustive=None)
        assert rep.exhaustive
        assert rep.delta == brute_delta(g.distance_matrix)


def test_delta_identity_on_plain_matrices():
    # 4-cycle and 5-path distance matrices, not approximation graphs
    c4 = np.array([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
    delta, witness = _delta_from_distances(c4)
    assert delta == brute_delta(c4) == 1.0
    assert defect(c4, *witness) == delta

    path = np.abs(np.subtract.outer(range(5), range(5)))
    delta, _ = _delta_from_distances(path)
    assert delta == brute_delta(path) == 0.0


def test_witness_reevaluates(corpus_graphs):
    for g in corpus_graphs.values():
        rep = delta_four_point(g, max_exhaustive=None)
        assert defect(g.distance_matrix, *rep.witness) == rep.delta


def test_base_sweep_bounded_by_global(corpus_graphs):
    g = corpus_graphs["cantor4"]
    full = delta_four_point(g, max_exhaustive=None).delta
    per_base = max(delta_four_point(g, base=o).delta
                   for o in range(g.n_vertices))
    assert per_base == full


def test_too_large_guard(corpus_graphs):
    g = corpus_graphs["line25"]
    with pytest.raises(TooLarge):
        delta_four_point(g, max_exhaustive=10)
    sampled = delta_four_point(g, max_exhaustive=10, sample=2000, seed=1)
    assert not sampled.exhaustive
    assert sampled.delta <= delta_four_point(g, max_exhaustive=None).delta


def test_sampling_is_deterministic(corpus_graphs):
    g = corpus_graphs["grid5x5"]
    a = delta_four_point(g, max_exhaustive=10, sample=500, seed=7)
    b = delta_four_point(g, max_exhaustive=10, sample=500, seed=7)
    assert a == b


def test_visual_fit_sandwich(corpus_graphs):
    for g in corpus_graphs.values():
        fit = fit_visual_constants(g)
        assert 0 < fit.c1 <= fit.c2
        assert fit.a == 1.0 / g.r
        root = g.root.id
        deepest = g.levels[g.k_max]
        for i, u in enumerate(deepest):
            for v in deepest[i + 1:]:
                cu, cv = g.vertices[u].center, g.vertices[v].center
                if cu == cv:
                    continue
                ratio = g.space.dist[cu, cv] * fit.a ** gromov_product(g, u, v, root)
                assert fit.c1 - 1e-12 <= ratio <= fit.c2 + 1e-12


def test_visual_fit_degenerate_level():
    g = build_approximation(line_space(25), 1 / 6, k_max_override=-2)
    with pytest.raises(DegenerateLevel):
        fit_visual_constants(g)


def test_visuality_constant_nonnegative(corpus_graphs):
    for g in corpus_graphs.values():
        assert visuality_constant(g) >= 0
