"""Gromov products, four-point delta estimation, visual-metric fitting.

Graph distances are integers, so Gromov products are half-integers and all
delta arithmetic below is exact (numerators are kept integral until the
final halving).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .approximation import ApproximationGraph
from .errors import DegenerateLevel, TooLarge


@dataclass(frozen=True)
class HyperbolicityReport:
    delta: float
    witness: tuple[int, int, int, int]  # (o, x, y, z)
    exhaustive: bool

    def as_dict(self) -> dict:
        return {"delta": self.delta, "witness": list(self.witness),
                "exhaustive": self.exhaustive}


@dataclass(frozen=True)
class VisualMetricFit:
    base: int
    a: float
    c1: float
    c2: float
    sample_level: int

    def as_dict(self) -> dict:
        return {"base": self.base, "a": self.a, "c1": self.c1,
                "c2": self.c2, "sample_level": self.sample_level}


def gromov_product(g: ApproximationGraph, x: int, y: int, o: int) -> float:
    dm = g.distance_matrix
    return (int(dm[x, o]) + int(dm[y, o]) - int(dm[x, y])) / 2


def _delta_from_distances(dm: np.ndarray) -> tuple[float, tuple[int, int, int, int]]:
    """Exact four-point delta of an integer distance matrix, with a witness.

    Uses the identity: the worst base-point defect over a quadruple equals
    (largest pair-sum - second largest)/2 for the three pairings of the
    quadruple. The returned witness is a base-point labeling (o, x, y, z)
    attaining the maximum.
    """
    d = dm.astype(np.int64)
    n = d.shape[0]
    best = 0
    best_quad = (0, 0, 0, 0)
    for x in range(n):
        for y in range(x + 1, n):
            s1 = d[x, y] + d  # over (z, w)
            s2 = d[x, :][:, None] + d[y, :][None, :]
            s3 = d[y, :][:, None] + d[x, :][None, :]
            gap = s1 - np.maximum(s2, s3)
            z, w = np.unravel_index(int(np.argmax(gap)), gap.shape)
            if gap[z, w] > best:
                best = int(gap[z, w])
                best_quad = (x, y, int(z), int(w))
    delta = best / 2
    # relabel the best quadruple as (o, x, y, z) with matching defect
    for perm in itertools.permutations(best_quad):
        o, x, y, z = perm
        if _defect_at(d, o, x, y, z) == best:
            return delta, (o, x, y, z)
    return delta, best_quad


def _defect_at(d: np.ndarray, o: int, x: int, y: int, z: int) -> int:
    """Doubled defect min{(x|z)_o,(z|y)_o} - (x|y)_o at base o."""
    pxz = d[x, o] + d[z, o] - d[x, z]
    pzy = d[z, o] + d[y, o] - d[z, y]
    pxy = d[x, o] + d[y, o] - d[x, y]
    return int(min(pxz, pzy) - pxy)


def delta_four_point(g: ApproximationGraph, base: int | None = None,
                     max_exhaustive: int | None = 60,
                     sample: int | None = None,
                     seed: int = 0) -> HyperbolicityReport:
    """Four-point hyperbolicity constant of the graph.

    With base given, sweeps triples at that base point only. Otherwise
    sweeps all quadruples; above max_exhaustive vertices a deterministic
    seeded sample of quadruples is taken (if sample is set) and the report
    is flagged non-exhaustive (a lower bound). Pass max_exhaustive=None to
    force the full sweep at any size.
    """
    dm = g.distance_matrix.astype(np.int64)
    n = dm.shape[0]
    if base is not None:
        best, witness = 0, (base, base, base, base)
        # doubled Gromov products at the base
        p = dm[base][:, None] + dm[base][None, :] - dm
        for z in range(n):
            cand = np.minimum(p[:, z][:, None], p[z, :][None, :]) - p
            x, y = np.unravel_index(int(np.argmax(cand)), cand.shape)
            if cand[x, y] > best:
                best = int(cand[x, y])
                witness = (base, int(x), int(y), z)
        return HyperbolicityReport(best / 2, witness, True)

    if max_exhaustive is not None and n > max_exhaustive:
        if sample is None:
            raise TooLarge(
                f"{n} vertices exceed the exhaustive limit {max_exhaustive}; "
                "pass sample=... or max_exhaustive=None")
        rng = np.random.default_rng(seed)
        best, witness = 0, (0, 0, 0, 0)
        for _ in range(sample):
            q = tuple(int(i) for i in rng.choice(n, 4, replace=False))
            for perm in itertools.permutations(q):
                val = _defect_at(dm, *perm)
                if val > best:
                    best, witness = val, perm
        return HyperbolicityReport(best / 2, witness, False)

    delta, witness = _delta_from_distances(dm)
    return HyperbolicityReport(delta, witness, True)


def fit_visual_constants(g: ApproximationGraph, a: float | None = None) -> VisualMetricFit:
    """Fit the multiplicative sandwich between deepest-level Gromov products
    (at the root) and the space metric on the centers.

    For every deepest-level pair with distinct centers the ratio
    d_Z(centers) * a**(product) is collected; c1/c2 are its min/max, so the
    sandwich holds on the sample by construction.
    """
    if a is None:
        a = 1.0 / g.r
    deepest = g.levels[g.k_max]
    pairs = [(u, v) for i, u in enumerate(deepest) for v in deepest[i + 1:]
             if g.vertices[u].center != g.vertices[v].center]
    if not pairs:
        raise DegenerateLevel("deepest level has fewer than 2 distinct centers")
    root = g.root.id
    ratios = []
    for u, v in pairs:
        prod = gromov_product(g, u, v, root)
        dz = g.space.dist[g.vertices[u].center, g.vertices[v].center]
        ratios.append(dz * a ** prod)
    return VisualMetricFit(root, a, min(ratios), max(ratios), g.k_max)


def visuality_constant(g: ApproximationGraph) -> float:
    """Finite-scale visuality proxy with boundary points ranged over the
    deepest level: max_y [ |o y| - max_w (y|w)_o ] at the root o."""
    root = g.root.id
    dm = g.distance_matrix
    deepest = g.levels[g.k_max]
    worst = 0.0
    for y in range(g.n_vertices):
        best_prod = max(gromov_product(g, y, w, root) for w in deepest)
        worst = max(worst, int(dm[root, y]) - best_prod)
    return worst
