import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypapprox.errors import (
    AlphaOutOfRange,
    DuplicatePoint,
    EmptySet,
    NegativeEntry,
    NonzeroDiagonal,
    NotSymmetric,
    TriangleViolation,
)
from hypapprox.metric import (
    FiniteMetricSpace,
    load_space,
    save_space_csv,
    snowflake,
    space_from_points,
    subset_diameter,
    validate_metric,
)
from oracles import brute_subset_diameter


def line_matrix(n):
    idx = np.arange(n, dtype=float)
    return np.abs(idx[:, None] - idx[None, :])


def test_validate_good_matrix():
    sp = validate_metric(line_matrix(5), [str(i) for i in range(5)])
    assert sp.n == 5
    assert sp.diam == 4.0
    assert sp.min_pos_dist == 1.0


def test_not_symmetric_witness():
    m = line_matrix(4)
    m[1, 2] = 9.0
    with pytest.raises(NotSymmetric) as ei:
        validate_metric(m, list("abcd"))
    assert (ei.value.i, ei.value.j) == (1, 2)


def test_negative_entry():
    m = line_matrix(3)
    m[0, 2] = m[2, 0] = -1.0
    with pytest.raises(NegativeEntry):
        validate_metric(m, list("abc"))


def test_nonzero_diagonal():
    m = line_matrix(3)
    m[1, 1] = 0.5
    with pytest.raises(NonzeroDiagonal) as ei:
        validate_metric(m, list("abc"))
    assert ei.value.i == 1


def test_duplicate_points():
    m = line_matrix(3)
    m[0, 1] = m[1, 0] = 0.0
    with pytest.raises(DuplicatePoint) as ei:
        validate_metric(m, list("abc"))
    assert (ei.value.i, ei.value.j) == (0, 1)


def test_triangle_violation_witness_reevaluates():
    m = line_matrix(4)
    m[0, 3] = m[3, 0] = 100.0
    with pytest.raises(TriangleViolation) as ei:
        validate_metric(m, list("abcd"))
    i, j, k = ei.value.i, ei.value.j, ei.value.k
    assert m[i, k] > m[i, j] + m[j, k]


def test_shape_mismatch():
    with pytest.raises(ValueError):
        validate_metric(line_matrix(3), list("ab"))
    with pytest.raises(ValueError):
        validate_metric(np.zeros((2, 3)), list("ab"))


def test_space_is_readonly():
    sp = validate_metric(line_matrix(3), list("abc"))
    with pytest.raises(ValueError):
        sp.dist[0, 1] = 7.0


def test_snowflake_preserves_metric_and_range():
    sp = space_from_points(np.arange(6) / 5.0)
    half = snowflake(sp, 0.5)
    assert np.allclose(half.dist, sp.dist ** 0.5)
    for alpha in (0.0, -1.0, 1.5):
        with pytest.raises(AlphaOutOfRange):
            snowflake(sp, alpha)


def test_subset_diameter_against_oracle():
    sp = space_from_points(np.array([[0, 0], [3, 4], [6, 0], [3, 1]], float))
    for members in ([0], [0, 1], [1, 2, 3], range(4)):
        assert subset_diameter(sp, members) == brute_subset_diameter(sp.dist, members)
    with pytest.raises(EmptySet):
        subset_diameter(sp, [])


def test_space_from_points_norms():
    pts = [[0, 0], [1, 1]]
    assert space_from_points(pts, norm=1).dist[0, 1] == 2.0
    assert space_from_points(pts, norm=np.inf).dist[0, 1] == 1.0
    assert np.isclose(space_from_points(pts).dist[0, 1], np.sqrt(2))
    with pytest.raises(ValueError):
        space_from_points(pts, norm=0.5)


def test_csv_roundtrip(tmp_path):
    sp = space_from_points(np.arange(7) * 1.25)
    path = tmp_path / "sp.csv"
    save_space_csv(sp, path)
    back = load_space(path)
    assert back == sp


def test_json_points_and_matrix(tmp_path):
    import json

    pts = {"points": [{"label": "a", "coords": [0.0]},
                      {"label": "b", "coords": [2.0]}]}
    p1 = tmp_path / "pts.json"
    p1.write_text(json.dumps(pts))
    sp1 = load_space(p1)
    assert sp1.dist[0, 1] == 2.0

    mat = {"labels": ["a", "b"], "matrix": [[0, 2], [2, 0]]}
    p2 = tmp_path / "mat.json"
    p2.write_text(json.dumps(mat))
    assert load_space(p2) == sp1

    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    with pytest.raises(ValueError):
        load_space(bad)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)),
                min_size=2, max_size=10, unique=True))
def test_euclidean_points_always_validate(coords):
    sp = space_from_points(np.array(coords, dtype=float))
    assert isinstance(sp, FiniteMetricSpace)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 100), min_size=2, max_size=8, unique=True),
       st.floats(0.1, 1.0))
def test_snowflake_always_validates(positions, alpha):
    sp = space_from_points(np.array(positions, dtype=float))
    assert isinstance(snowflake(sp, alpha), FiniteMetricSpace)
