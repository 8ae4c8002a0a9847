"""Finite metric spaces: validation, snowflaking, subset diameters, loaders.

Distances are float64 throughout. Downstream ball-membership tests compare
against thresholds with exact <= / <, so fixtures should keep distances well
clear of the thresholds 2*r**k. The triangle check alone carries a tiny
relative slack to absorb last-ulp rounding in computed distance matrices
(e.g. collinear Euclidean triples).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlphaOutOfRange,
    DuplicatePoint,
    EmptySet,
    NegativeEntry,
    NonzeroDiagonal,
    NotSymmetric,
    TriangleViolation,
)

# Relative slack for the triangle-inequality check only.
TRIANGLE_SLACK = 1e-12


@dataclass
class FiniteMetricSpace:
    """A finite metric space: ordered point labels plus an exact distance matrix.

    Instances are immutable after construction (the matrix is marked
    read-only) and safe to share across threads.
    """

    labels: tuple[str, ...]
    dist: np.ndarray
    diam: float = field(init=False)
    min_pos_dist: float = field(init=False)

    def __post_init__(self):
        self.dist = np.asarray(self.dist, dtype=float)
        self.dist.setflags(write=False)
        self.labels = tuple(str(x) for x in self.labels)
        n = len(self.labels)
        if self.dist.shape != (n, n):
            raise ValueError("matrix shape does not match label count")
        self.diam = float(self.dist.max()) if n else 0.0
        if n > 1:
            off = self.dist[~np.eye(n, dtype=bool)]
            self.min_pos_dist = float(off.min())
        else:
            self.min_pos_dist = 0.0

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)


def validate_metric(matrix, labels: Sequence[str]) -> FiniteMetricSpace:
    """Check the metric axioms and return a validated space.

    Raises the exception for the first violated axiom, with witness
    indices attached. Axioms are checked in the order: symmetry,
    non-negativity, zero diagonal, distinct points, triangle inequality.
    """
    d = np.asarray(matrix, dtype=float)
    n = len(labels)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if d.shape[0] != n:
        raise ValueError("matrix dimension does not match label count")

    asym = np.argwhere(d != d.T)
    if len(asym):
        i, j = min((int(a), int(b)) for a, b in asym)
        raise NotSymmetric(i, j)
    neg = np.argwhere(d < 0)
    if len(neg):
        i, j = int(neg[0][0]), int(neg[0][1])
        raise NegativeEntry(i, j)
    bad_diag = np.nonzero(np.diag(d) != 0)[0]
    if len(bad_diag):
        raise NonzeroDiagonal(int(bad_diag[0]))
    dup = np.argwhere((d == 0) & ~np.eye(n, dtype=bool))
    if len(dup):
        i, j = sorted((int(dup[0][0]), int(dup[0][1])))
        raise DuplicatePoint(i, j)

    slack = TRIANGLE_SLACK * (d.max() if n else 0.0)
    for j in range(n):
        via = d[:, j][:, None] + d[j, :][None, :]
        viol = np.argwhere(d > via + slack)
        if len(viol):
            i, k = int(viol[0][0]), int(viol[0][1])
            raise TriangleViolation(i, j, k)

    return FiniteMetricSpace(tuple(labels), d)


def snowflake(space: FiniteMetricSpace, alpha: float) -> FiniteMetricSpace:
    """Raise every distance to the power alpha, 0 < alpha <= 1.

    d**alpha is again a metric for alpha <= 1; the result is re-validated.
    """
    if not (0 < alpha <= 1):
        raise AlphaOutOfRange(f"alpha must be in (0, 1], got {alpha}")
    return validate_metric(np.power(space.dist, alpha), space.labels)


def subset_diameter(space: FiniteMetricSpace, members: Iterable[int]) -> float:
    """Max pairwise distance over a non-empty subset of point indices."""
    idx = sorted(set(members))
    if not idx:
        raise EmptySet("subset_diameter of an empty set")
    if len(idx) == 1:
        return 0.0
    sub = space.dist[np.ix_(idx, idx)]
    return float(sub.max())


def space_from_points(coords, labels: Sequence[str] | None = None,
                      norm: float = 2.0) -> FiniteMetricSpace:
    """Build a space from point coordinates under a Minkowski p-norm, p >= 1."""
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if norm < 1:
        raise ValueError("norm must be >= 1")
    diff = np.abs(pts[:, None, :] - pts[None, :, :])
    if math.isinf(norm):
        d = diff.max(axis=-1)
    else:
        d = (diff ** norm).sum(axis=-1) ** (1.0 / norm)
    np.fill_diagonal(d, 0.0)
    # enforce exact symmetry against float pow noise
    d = np.minimum(d, d.T)
    if labels is None:
        labels = [str(i) for i in range(len(pts))]
    return validate_metric(d, labels)


def load_space_csv(path) -> FiniteMetricSpace:
    """CSV distance matrix: first row labels, then n rows of n decimals."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    labels = [c.strip() for c in rows[0] if c.strip() != ""]
    body = [[float(c) for c in row[: len(labels)]] for row in rows[1:] if row]
    return validate_metric(np.array(body), labels)


def load_space_json(path) -> FiniteMetricSpace:
    """JSON space: either {"points": [...], "norm": p} or {"labels", "matrix"}."""
    with open(path) as fh:
        obj = json.load(fh)
    if "points" in obj:
        labels = [p["label"] for p in obj["points"]]
        coords = [p["coords"] for p in obj["points"]]
        return space_from_points(coords, labels, norm=float(obj.get("norm", 2.0)))
    if "matrix" in obj:
        return validate_metric(np.array(obj["matrix"], dtype=float), obj["labels"])
    raise ValueError(f"{path}: expected 'points' or 'matrix' key")


def load_space(path) -> FiniteMetricSpace:
    path = str(path)
    if path.endswith(".json"):
        return load_space_json(path)
    return load_space_csv(path)


def save_space_csv(space: FiniteMetricSpace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(space.labels)
        for row in space.dist:
            w.writerow([repr(float(x)) for x in row])
