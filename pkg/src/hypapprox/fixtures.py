"""Deterministic fixture spaces used by the test corpora and the CLI seeds.

All generators avoid distances sitting near the ball thresholds 2*r**k for
r in {1/6, 1/10}, so exact <=/< comparisons downstream are stable.
"""

from __future__ import annotations

import itertools

import numpy as np

from .metric import FiniteMetricSpace, snowflake, space_from_points, validate_metric


def line_space(n: int = 25, spacing: float = 1.0) -> FiniteMetricSpace:
    """n collinear points, unit spacing by default."""
    pos = np.arange(n) * spacing
    return space_from_points(pos, [str(i) for i in range(n)])


def unit_line_space(n: int = 20) -> FiniteMetricSpace:
    """n equally spaced points spanning [0, 1]."""
    pos = np.arange(n) / (n - 1)
    return space_from_points(pos, [str(i) for i in range(n)])


def grid_space(nx: int = 5, ny: int = 5, spacing: float = 1.0) -> FiniteMetricSpace:
    pts = [(x * spacing, y * spacing) for x in range(nx) for y in range(ny)]
    labels = [f"{x},{y}" for x in range(nx) for y in range(ny)]
    return space_from_points(pts, labels)


def ultrametric_space(depth: int = 3, branching: int = 2,
                      base: float = 2.0) -> FiniteMetricSpace:
    """Leaves of a uniform tree; d(x, y) = base**(-lcp) for distinct leaves."""
    leaves = list(itertools.product(range(branching), repeat=depth))
    n = len(leaves)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            lcp = 0
            while lcp < depth and leaves[i][lcp] == leaves[j][lcp]:
                lcp += 1
            d[i, j] = d[j, i] = base ** (-lcp)
    labels = ["".join(map(str, leaf)) for leaf in leaves]
    return validate_metric(d, labels)


def cantor_space(depth: int = 4) -> FiniteMetricSpace:
    """Left endpoints of the middle-thirds construction, truncated at depth."""
    pts = []
    labels = []
    for digits in itertools.product((0, 2), repeat=depth):
        pts.append(sum(dig * 3.0 ** -(i + 1) for i, dig in enumerate(digits)))
        labels.append("".join("0" if dig == 0 else "1" for dig in digits))
    return space_from_points(pts, labels)


def euclidean_cloud(n: int = 20, dim: int = 2, seed: int = 0) -> FiniteMetricSpace:
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, 10.0, size=(n, dim))
    return space_from_points(pts, [str(i) for i in range(n)])


def snowflaked_line(n: int = 16, alpha: float = 0.5) -> FiniteMetricSpace:
    return snowflake(unit_line_space(n), alpha)


def default_corpus() -> dict[str, FiniteMetricSpace]:
    """Named fixture spaces used by acceptance sweeps and the CLI."""
    return {
        "line25": line_space(25),
        "grid5x5": grid_space(5, 5),
        "ultrametric16": ultrametric_space(depth=4),
        "cantor4": cantor_space(4),
        "unit_line20": unit_line_space(20),
        "cloud20": euclidean_cloud(20, seed=0),
    }
