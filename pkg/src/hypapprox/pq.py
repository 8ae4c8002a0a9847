"""Quasi-symmetry and PQ-symmetry checks for maps between finite spaces.

A PQ-symmetric map distorts distance ratios by the power control function
eta(t) = q * max(t**p, t**(1/p)). The checks here are exhaustive sweeps
over point triples, plus the diameter-ratio characterization over nested
set pairs and the constant conversions between the two forms.

Inequality checks carry a 1e-9 relative slack: the sweeps compare float
expressions (powers, quotients) that are exact only up to rounding.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySet, PreconditionViolated, TooFewPoints
from .metric import FiniteMetricSpace, subset_diameter

REL_SLACK = 1e-9


@dataclass(frozen=True)
class PQParams:
    p: float
    q: float

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("PQ constants require p >= 1 and q >= 1")

    def control(self, t):
        return self.q * np.maximum(t ** self.p, t ** (1.0 / self.p))


@dataclass(frozen=True)
class DiamRatioParams:
    lam: float
    A: float

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError("lambda must be >= 1")
        if not (0 < self.A <= 1):
            raise ValueError("A must be in (0, 1]")


@dataclass(frozen=True)
class ViolationReport:
    passed: bool
    worst_ratio: float
    witness: tuple | None
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "worst_ratio": self.worst_ratio,
                "witness": list(self.witness) if self.witness is not None else None,
                **self.detail}


@dataclass
class MapSpec:
    """A bijection between the points of two finite metric spaces."""

    source: FiniteMetricSpace
    target: FiniteMetricSpace
    assignment: tuple[int, ...]  # source index -> target index

    def __post_init__(self):
        self.assignment = tuple(int(i) for i in self.assignment)
        n = self.source.n
        if self.target.n != n or len(self.assignment) != n:
            raise ValueError("assignment must be a bijection of equal-size spaces")
        if sorted(self.assignment) != list(range(n)):
            raise ValueError("assignment is not a bijection")

    @classmethod
    def identity(cls, source: FiniteMetricSpace,
                 target: FiniteMetricSpace | None = None) -> "MapSpec":
        return cls(source, target if target is not None else source,
                   tuple(range(source.n)))

    @classmethod
    def from_pairs(cls, source: FiniteMetricSpace, target: FiniteMetricSpace,
                   pairs: Iterable[tuple[str, str]]) -> "MapSpec":
        assignment = [-1] * source.n
        for src_label, dst_label in pairs:
            assignment[source.index(str(src_label))] = target.index(str(dst_label))
        if -1 in assignment:
            raise ValueError("map does not cover every source point")
        return cls(source, target, tuple(assignment))

    @classmethod
    def load(cls, path, source: FiniteMetricSpace,
             target: FiniteMetricSpace) -> "MapSpec":
        with open(path) as fh:
            obj = json.load(fh)
        return cls.from_pairs(source, target, obj["pairs"])

    def inverse(self) -> "MapSpec":
        inv = [0] * len(self.assignment)
        for i, j in enumerate(self.assignment):
            inv[j] = i
        return MapSpec(self.target, self.source, tuple(inv))

    def image_indices(self, members: Iterable[int]) -> frozenset[int]:
        return frozenset(self.assignment[i] for i in members)

    def preimage_indices(self, members: Iterable[int]) -> frozenset[int]:
        members = set(members)
        return frozenset(i for i, j in enumerate(self.assignment) if j in members)

    @property
    def target_dist(self) -> np.ndarray:
        """Target distances pulled back to source indices."""
        idx = np.asarray(self.assignment)
        return self.target.dist[np.ix_(idx, idx)]


def check_pq(f: MapSpec, params: PQParams) -> ViolationReport:
    """Exhaustive triple sweep of |f(x)f(a)| <= eta(|xa|/|xb|) * |f(x)f(b)|.

    worst_ratio is the largest LHS/RHS over triples with x distinct from
    a and b; the witness (x, a, b) re-evaluates to it.
    """
    n = f.source.n
    if n < 3:
        raise TooFewPoints("PQ check needs at least 3 points")
    ds, dt = f.source.dist, f.target_dist
    worst = 0.0
    witness = None
    for x in range(n):
        others = np.array([i for i in range(n) if i != x])
        t = ds[x, others][:, None] / ds[x, others][None, :]
        rhs = params.control(t) * dt[x, others][None, :]
        ratio = dt[x, others][:, None] / rhs
        ai, bi = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        if ratio[ai, bi] > worst:
            worst = float(ratio[ai, bi])
            witness = (x, int(others[ai]), int(others[bi]))
    return ViolationReport(worst <= 1 + REL_SLACK, worst, witness)


def fit_pq(f: MapSpec, p_grid: Sequence[float]) -> tuple[PQParams, ViolationReport]:
    """Minimal q over the exponent grid; ties go to the smaller p."""
    n = f.source.n
    if n < 3:
        raise TooFewPoints("PQ fit needs at least 3 points")
    if not p_grid or any(p < 1 for p in p_grid):
        raise ValueError("p_grid must be non-empty with every p >= 1")
    ds, dt = f.source.dist, f.target_dist
    best: tuple[PQParams, ViolationReport] | None = None
    for p in sorted(p_grid):
        q_needed = 0.0
        for x in range(n):
            others = np.array([i for i in range(n) if i != x])
            t = ds[x, others][:, None] / ds[x, others][None, :]
            denom = np.maximum(t ** p, t ** (1.0 / p)) * dt[x, others][None, :]
            q_needed = max(q_needed, float((dt[x, others][:, None] / denom).max()))
        q = max(1.0, q_needed)
        if best is None or q < best[0].q * (1 - REL_SLACK):
            params = PQParams(p, q)
            best = (params, check_pq(f, params))
    assert best is not None
    return best


def pq_to_diam(p: float, q: float) -> DiamRatioParams:
    """(p, q) control constants to (lambda, A) diameter-ratio constants."""
    if p < 1 or q < 1:
        raise ValueError("require p, q >= 1")
    return DiamRatioParams(p, 1.0 / max(2 * q * 4 ** p, 2 * q * 6 ** (1.0 / p)))


def diam_to_pq(lam: float, A: float) -> PQParams:
    """(lambda, A) diameter-ratio constants to (p, q) control constants."""
    params = DiamRatioParams(lam, A)  # validates ranges
    return PQParams(params.lam, max(2 ** lam / A, 2 ** lam / A ** 2))


# --- nested-pair families ----------------------------------------------

def ball_pair_family(space: FiniteMetricSpace, r: float = 1 / 6):
    """Default family: 2-point inner sets nested in the approximation-ball
    family of the space (plus the whole space)."""
    from .approximation import build_approximation

    g = build_approximation(space, r)
    outers = {v.ball for v in g.vertices if len(v.ball) >= 2}
    outers.add(frozenset(range(space.n)))
    for outer in sorted(outers, key=lambda s: (len(s), sorted(s))):
        pts = sorted(outer)
        for a, b in itertools.combinations(pts, 2):
            yield frozenset((a, b)), outer


def pair_triple_family(space: FiniteMetricSpace):
    """All 2-point sets nested in their 3-point supersets."""
    for a, b, c in itertools.combinations(range(space.n), 3):
        triple = frozenset((a, b, c))
        for inner in ((a, b), (a, c), (b, c)):
            yield frozenset(inner), triple


def powerset_family(space: FiniteMetricSpace):
    """Every nested pair of non-trivial subsets; only for tiny spaces."""
    if space.n > 12:
        raise TooFewPoints("power-set family is limited to <= 12 points")
    pts = list(range(space.n))
    subsets = []
    for size in range(2, space.n + 1):
        subsets.extend(frozenset(c) for c in itertools.combinations(pts, size))
    for outer in subsets:
        for inner in subsets:
            if inner < outer or inner == outer:
                yield inner, outer


def check_diam_ratio(f: MapSpec, params: DiamRatioParams,
                     family=None) -> ViolationReport:
    """Verify both diameter-ratio inequalities on a family of nested pairs:

        A * t**lam <= diam f(B2)/diam f(B1) <= (1/A) * t**(1/lam),

    t = diam B2 / diam B1. worst_ratio is the largest multiplicative
    violation of either side (1.0 means tight, > 1 means failed).
    """
    if f.source.n < 3:
        raise TooFewPoints("diameter-ratio check needs at least 3 points")
    if family is None:
        family = ball_pair_family(f.source)
    worst = 0.0
    witness = None
    checked = 0
    for inner, outer in family:
        checked += 1
        t = subset_diameter(f.source, inner) / subset_diameter(f.source, outer)
        img = (subset_diameter(f.target, f.image_indices(inner))
               / subset_diameter(f.target, f.image_indices(outer)))
        lo = params.A * t ** params.lam
        hi = (1.0 / params.A) * t ** (1.0 / params.lam)
        violation = max(lo / img, img / hi)
        if violation > worst:
            worst = violation
            witness = (sorted(inner), sorted(outer))
    return ViolationReport(worst <= 1 + REL_SLACK, worst, witness,
                           {"pairs_checked": checked})


def check_metrically_proper(f: MapSpec, ball_family=None) -> ViolationReport:
    """Finite-scale properness rendering: preimage diameters of target balls,
    bucketed by ball diameter.

    On finite spaces every preimage of a bijection is bounded, so the check
    passes whenever singleton balls pull back to singletons; the value of
    the report is the bucket table (max preimage diameter per ball-diameter
    bucket), which should shrink with the ball diameter for any map
    satisfying the diameter-ratio inequalities.
    """
    from .approximation import build_approximation

    if ball_family is None:
        g = build_approximation(f.target, 1 / 6)
        ball_family = [v.ball for v in g.vertices]
    buckets: dict[float, float] = {}
    worst_pair = None
    passed = True
    for ball in ball_family:
        if not ball:
            raise EmptySet("empty ball in family")
        dia = subset_diameter(f.target, ball)
        pre = subset_diameter(f.source, f.preimage_indices(ball))
        buckets[dia] = max(buckets.get(dia, 0.0), pre)
        if dia == 0 and pre > 0:
            passed = False
            worst_pair = (sorted(ball), pre)
    table = [[dia, buckets[dia]] for dia in sorted(buckets)]
    ratio = max((pre for _, pre in table), default=0.0)
    scale = f.source.diam or 1.0
    return ViolationReport(passed, ratio / scale, worst_pair,
                           {"bucket_table": table})


def union_diameter_check(space: FiniteMetricSpace, A1, D1, A2, D2,
                      a: float) -> bool:
    """diam(D1 u D2) < (4a + 2) * diam(A1 u A2) for nested bounded sets with
    diam Di <= a * diam Ai. Raises PreconditionViolated when the hypothesis
    fails (a generator bug, not a counterexample)."""
    A1, D1, A2, D2 = map(frozenset, (A1, D1, A2, D2))
    if a <= 1:
        raise PreconditionViolated("requires a > 1")
    if not (A1 <= D1 and A2 <= D2):
        raise PreconditionViolated("A_i must be contained in D_i")
    dA1, dA2 = subset_diameter(space, A1), subset_diameter(space, A2)
    dD1, dD2 = subset_diameter(space, D1), subset_diameter(space, D2)
    if dD1 > a * dA1 * (1 + REL_SLACK) or dD2 > a * dA2 * (1 + REL_SLACK):
        raise PreconditionViolated("diam D_i exceeds a * diam A_i")
    d_union_a = subset_diameter(space, A1 | A2)
    if d_union_a == 0:
        raise PreconditionViolated("diam(A1 u A2) must be positive")
    return subset_diameter(space, D1 | D2) < (4 * a + 2) * d_union_a
