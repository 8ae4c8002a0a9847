"""Truncated hyperbolic approximation graphs of finite metric spaces.

The graph is leveled: level k carries a maximal r**k-separated net of the
space, each net point v owning the closed ball of radius 2*r**k around it.
Same-level vertices with identical ball point-sets are identified. Edges
are horizontal (same level, balls intersect) or radial (adjacent levels,
upper ball contained in the lower one). Levels run from the truncation
level k_min (single whole-space vertex) up to k_max (all balls singletons
by default).

All ball-membership comparisons are exact float comparisons: no epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateSpace, InvalidParameter, NoRadialPath
from .metric import FiniteMetricSpace, subset_diameter


@dataclass(frozen=True)
class Vertex:
    id: int
    level: int
    center: int
    ball: frozenset[int]
    radius: float


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    kind: str  # "horizontal" | "radial"


@dataclass(frozen=True)
class GeodesicPath:
    vertex_ids: tuple[int, ...]
    horizontal_edge_count: int = 0

    @property
    def length(self) -> int:
        return len(self.vertex_ids) - 1


def greedy_separated_net(space: FiniteMetricSpace, a: float) -> list[int]:
    """Maximal a-separated subset, greedy in point-index order.

    Every chosen pair is >= a apart and every point of the space lies
    strictly within a of some chosen point.
    """
    if a <= 0:
        raise InvalidParameter(f"separation must be positive, got {a}")
    d = space.dist
    chosen: list[int] = []
    for i in range(space.n):
        if all(d[i, c] >= a for c in chosen):
            chosen.append(i)
    return chosen


def truncation_level(space: FiniteMetricSpace, r: float) -> int:
    """Largest integer k with diam < r**k (the level of the single root)."""
    _check_r(r)
    if space.n < 2:
        raise DegenerateSpace("truncation level undefined for a 1-point space")
    diam = space.diam
    k = int(math.floor(math.log(diam) / math.log(r)))
    while diam < r ** (k + 1):
        k += 1
    while not diam < r ** k:
        k -= 1
    return k


def _check_r(r: float) -> None:
    if not (0 < r <= 1 / 6):
        raise InvalidParameter(f"parameter r must be in (0, 1/6], got {r}")


@dataclass
class ApproximationGraph:
    """Immutable leveled graph; queries are read-only and cache lazily."""

    space: FiniteMetricSpace
    r: float
    k_min: int
    k_max: int
    edge_rule: str
    vertices: list[Vertex]
    edges: list[Edge]
    levels: dict[int, list[int]] = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        return [sorted(a) for a in adj]

    @cached_property
    def radial_children(self) -> list[list[int]]:
        """For each vertex, radial neighbors one level up, ascending id."""
        ch: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            if e.kind == "radial":
                lo, hi = sorted((e.u, e.v), key=lambda i: self.vertices[i].level)
                ch[lo].append(hi)
        return [sorted(c) for c in ch]

    @cached_property
    def radial_parents(self) -> list[list[int]]:
        par: list[list[int]] = [[] for _ in self.vertices]
        for v, kids in enumerate(self.radial_children):
            for c in kids:
                par[c].append(v)
        return [sorted(p) for p in par]

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """All-pairs graph distances in edge counts (BFS from every vertex)."""
        n = self.n_vertices
        adj = self.neighbors
        dm = np.full((n, n), -1, dtype=np.int32)
        for s in range(n):
            dm[s, s] = 0
            frontier = [s]
            dist = 0
            while frontier:
                dist += 1
                nxt = []
                for u in frontier:
                    for w in adj[u]:
                        if dm[s, w] < 0:
                            dm[s, w] = dist
                            nxt.append(w)
                frontier = nxt
        return dm

    @cached_property
    def up_reach(self) -> list[int]:
        """Bitmask per vertex of all vertices reachable by upward radial paths.

        Bit v is set in up_reach[u] iff there is a monotone-level radial
        path from u to v (v itself included).
        """
        order = sorted(range(self.n_vertices),
                       key=lambda i: -self.vertices[i].level)
        masks = [0] * self.n_vertices
        for u in order:
            m = 1 << u
            for c in self.radial_children[u]:
                m |= masks[c]
            masks[u] = m
        return masks

    @cached_property
    def ball_intersects(self) -> np.ndarray:
        n = self.n_vertices
        npts = self.space.n
        rows = np.zeros((n, npts), dtype=bool)
        for v in self.vertices:
            rows[v.id, list(v.ball)] = True
        return rows @ rows.T > 0

    def vertex_at(self, level: int, center: int) -> Vertex:
        for vid in self.levels[level]:
            if self.vertices[vid].center == center:
                return self.vertices[vid]
        raise KeyError((level, center))

    @property
    def root(self) -> Vertex:
        return self.vertices[self.levels[self.k_min][0]]


def default_k_max(space: FiniteMetricSpace, r: float) -> int:
    """Smallest level at which every ball is a singleton."""
    k = truncation_level(space, r)
    while 2 * r ** k >= space.min_pos_dist:
        k += 1
    return k


def build_approximation(space: FiniteMetricSpace, r: float,
                        k_max_override: int | None = None,
                        edge_rule: str = "pointset") -> ApproximationGraph:
    """Build the truncated approximation graph of a finite space.

    edge_rule selects the horizontal-edge test: "pointset" (closed balls
    share at least one point of the space, the default) or "distance"
    (centers within 4*r**k).
    """
    _check_r(r)
    if space.n < 2:
        raise DegenerateSpace("cannot approximate a 1-point space")
    if edge_rule not in ("pointset", "distance"):
        raise InvalidParameter(f"unknown edge_rule {edge_rule!r}")

    k_min = truncation_level(space, r)
    k_max = default_k_max(space, r) if k_max_override is None else int(k_max_override)
    if k_max < k_min:
        raise InvalidParameter(f"k_max {k_max} below truncation level {k_min}")

    d = space.dist
    vertices: list[Vertex] = []
    levels: dict[int, list[int]] = {}
    for k in range(k_min, k_max + 1):
        net = greedy_separated_net(space, r ** k)
        radius = 2 * r ** k
        seen: dict[frozenset[int], int] = {}
        ids: list[int] = []
        for c in net:
            ball = frozenset(np.nonzero(d[c] <= radius)[0].tolist())
            if ball in seen:
                continue  # identified with an earlier equal-ball vertex
            vid = len(vertices)
            seen[ball] = vid
            vertices.append(Vertex(vid, k, c, ball, radius))
            ids.append(vid)
        levels[k] = ids

    edges: list[Edge] = []
    for k in range(k_min, k_max + 1):
        ids = levels[k]
        for a_pos, u in enumerate(ids):
            for v in ids[a_pos + 1:]:
                vu, vv = vertices[u], vertices[v]
                if edge_rule == "pointset":
                    touch = not vu.ball.isdisjoint(vv.ball)
                else:
                    touch = d[vu.center, vv.center] <= 4 * r ** k
                if touch:
                    edges.append(Edge(u, v, "horizontal"))
        if k + 1 <= k_max:
            for u in ids:
                for v in levels[k + 1]:
                    if vertices[v].ball <= vertices[u].ball:
                        edges.append(Edge(u, v, "radial"))

    return ApproximationGraph(space, r, k_min, k_max, edge_rule,
                              vertices, edges, levels)


def graph_distance(g: ApproximationGraph, u: int, v: int) -> int:
    return int(g.distance_matrix[u, v])


def is_splitting(g: ApproximationGraph, v: int) -> bool:
    """True iff some next-level ball is a proper subset of B(v).

    Vertices at k_max report False: there is no upper level inside the
    truncated graph to witness the split.
    """
    vert = g.vertices[v]
    if vert.level >= g.k_max:
        return False
    return any(g.vertices[w].ball < vert.ball for w in g.levels[vert.level + 1])


def splitting_vertices(g: ApproximationGraph) -> list[int]:
    return [v.id for v in g.vertices if is_splitting(g, v.id)]


def cone_points(g: ApproximationGraph, vs) -> list[int]:
    """Vertices at or below min level of vs reaching all of vs radially."""
    vs = list(vs)
    if not vs:
        raise InvalidParameter("cone_points of an empty vertex set")
    min_l = min(g.vertices[v].level for v in vs)
    target = 0
    for v in vs:
        target |= 1 << v
    masks = g.up_reach
    return [u for u in range(g.n_vertices)
            if g.vertices[u].level <= min_l and masks[u] & target == target]


def branch_point(g: ApproximationGraph, v: int, v2: int) -> int:
    """Cone point of maximal level for {v, v2}; ties to the lowest id."""
    best = None
    min_l = min(g.vertices[v].level, g.vertices[v2].level)
    masks = g.up_reach
    target = (1 << v) | (1 << v2)
    for u in range(g.n_vertices):
        vu = g.vertices[u]
        if vu.level > min_l or masks[u] & target != target:
            continue
        if best is None or vu.level > g.vertices[best].level:
            best = u
    assert best is not None, "truncated root is always a cone point"
    return best


def joined_by_radial_geodesic(g: ApproximationGraph, u: int, v: int) -> bool:
    lo, hi = sorted((u, v), key=lambda i: g.vertices[i].level)
    return bool(g.up_reach[lo] >> hi & 1)


def radial_geodesic(g: ApproximationGraph, v_low: int, v_high: int,
                    tie_break: str = "low") -> GeodesicPath:
    """Monotone-level radial path from v_low up to v_high.

    At each step the lowest-id (or highest-id, per tie_break) radial child
    still reaching v_high is taken.
    """
    lv_low = g.vertices[v_low].level
    lv_high = g.vertices[v_high].level
    if lv_low > lv_high or not g.up_reach[v_low] >> v_high & 1:
        raise NoRadialPath(f"no monotone radial path {v_low} -> {v_high}")
    path = [v_low]
    cur = v_low
    while cur != v_high:
        options = [c for c in g.radial_children[cur]
                   if g.up_reach[c] >> v_high & 1]
        cur = options[0] if tie_break == "low" else options[-1]
        path.append(cur)
    return GeodesicPath(tuple(path))


def check_geodesic_normal_form(g: ApproximationGraph) -> dict:
    """Verify every vertex pair admits a geodesic with at most one
    horizontal edge lying at the lowest level of the path.

    Searches down-radial / (one horizontal) / up-radial paths of length
    equal to the graph distance. Returns a report dict; the first failing
    pair, if any, is the counterexample.
    """
    dm = g.distance_matrix
    masks = g.up_reach
    lv = [v.level for v in g.vertices]
    horizontal = [(e.u, e.v) for e in g.edges if e.kind == "horizontal"]
    n = g.n_vertices
    checked = 0
    for a in range(n):
        for b in range(a + 1, n):
            checked += 1
            dist = int(dm[a, b])
            ok = False
            # purely radial normal form through a low cone vertex
            for w in range(n):
                if masks[w] >> a & 1 and masks[w] >> b & 1:
                    if (lv[a] - lv[w]) + (lv[b] - lv[w]) == dist:
                        ok = True
                        break
            if not ok:
                # exactly one horizontal edge, at the lowest level
                for (w, w2) in horizontal:
                    m = lv[w]
                    if (lv[a] - m) + (lv[b] - m) + 1 != dist:
                        continue
                    if (masks[w] >> a & 1 and masks[w2] >> b & 1) or \
                       (masks[w2] >> a & 1 and masks[w] >> b & 1):
                        ok = True
                        break
            if not ok:
                return {"passed": False, "pairs_checked": checked,
                        "counterexample": [a, b], "distance": dist}
    return {"passed": True, "pairs_checked": checked, "counterexample": None}


# --- structural property sweeps ---------------------------------------

def check_splitting_ball_diameter(g: ApproximationGraph) -> dict:
    """At every splitting vertex of level k: r**(k+1) <= diam B <= 4*r**k."""
    slack = 1e-12 * max(g.space.diam, 1.0)
    worst = None
    for v in splitting_vertices(g):
        vert = g.vertices[v]
        dia = subset_diameter(g.space, vert.ball)
        lo, hi = g.r ** (vert.level + 1), 4 * g.r ** vert.level
        if not (lo <= dia <= hi + slack):
            return {"passed": False, "witness": v, "diameter": dia,
                    "bounds": [lo, hi]}
        margin = min(dia - lo, hi - dia)
        if worst is None or margin < worst:
            worst = margin
    return {"passed": True, "witness": None, "worst_margin": worst}


def check_intersecting_ball_distance(g: ApproximationGraph) -> dict:
    """Pairs with intersecting balls are within |level gap| + 1 edges."""
    dm = g.distance_matrix
    inter = g.ball_intersects
    lv = np.array([v.level for v in g.vertices])
    gap = np.abs(lv[:, None] - lv[None, :]) + 1
    bad = np.argwhere(inter & (dm > gap))
    if len(bad):
        u, v = int(bad[0][0]), int(bad[0][1])
        return {"passed": False, "witness": [u, v],
                "distance": int(dm[u, v]), "bound": int(gap[u, v])}
    return {"passed": True, "witness": None}


def check_common_cone_point(g: ApproximationGraph) -> dict:
    """For triples v, v2, low with B(low) meeting both balls and l(low)
    minimal among the three: a common cone point exists one level below
    l(low), whenever that level exists in the truncation."""
    masks = g.up_reach
    inter = g.ball_intersects
    lv = np.array([v.level for v in g.vertices])
    n = g.n_vertices
    checked = 0
    for low in range(n):
        m = int(lv[low])
        if m - 1 < g.k_min:
            continue
        cands = [u for u in g.levels[m - 1] if masks[u] >> low & 1]
        if not cands:
            return {"passed": False, "witness": [low], "reason": "no cone level"}
        # cover[v] = some candidate reaches v radially
        reach = np.zeros((len(cands), n), dtype=bool)
        for i, u in enumerate(cands):
            mask = masks[u]
            reach[i] = [(mask >> v) & 1 for v in range(n)]
        pair_ok = reach.T @ reach.astype(np.int32) > 0
        elig = np.nonzero((lv >= m) & inter[low])[0]
        for i, a in enumerate(elig):
            for b in elig[i:]:
                checked += 1
                if not pair_ok[a, b]:
                    return {"passed": False, "witness": [int(a), int(b), low]}
    return {"passed": True, "witness": None, "triples_checked": checked}


def check_branch_diameter_ratio(g: ApproximationGraph) -> dict:
    """diam(B(v1) u B(v2)) / diam(B(w)) >= r**2 / 4 at every branch point w
    with non-degenerate ball."""
    bound = g.r ** 2 / 4
    worst = None
    for v1 in range(g.n_vertices):
        for v2 in range(v1 + 1, g.n_vertices):
            w = branch_point(g, v1, v2)
            bw = g.vertices[w].ball
            dw = subset_diameter(g.space, bw)
            if dw == 0:
                continue
            union = g.vertices[v1].ball | g.vertices[v2].ball
            ratio = subset_diameter(g.space, union) / dw
            if ratio < bound:
                return {"passed": False, "witness": [v1, v2, w],
                        "ratio": ratio, "bound": bound}
            if worst is None or ratio < worst:
                worst = ratio
    return {"passed": True, "witness": None, "worst_ratio": worst,
            "bound": bound}


def structural_check_suite(g: ApproximationGraph) -> dict[str, dict]:
    """All exhaustive structural sweeps, keyed by check name."""
    return {
        "splitting_ball_diameter": check_splitting_ball_diameter(g),
        "intersecting_ball_distance": check_intersecting_ball_distance(g),
        "common_cone_point": check_common_cone_point(g),
        "branch_diameter_ratio": check_branch_diameter_ratio(g),
        "geodesic_normal_form": check_geodesic_normal_form(g),
    }
