"""Vertex-to-vertex extension of a PQ-symmetric map between two spaces to a
quasi-isometric map between their approximation graphs, plus the derived
constants controlling its quality and the empirical checks against them.

The construction is case-split by vertex type:

  * splitting vertices map to a deepest target vertex whose ball contains
    the image of their ball (maximality forced, ties broken by id);
  * non-splitting vertices with a non-degenerate, non-whole-space ball are
    interpolated along a radial geodesic between the images of the nearest
    splitting vertices below and above;
  * singleton-ball vertices ride an isometric radial ray toward the image
    point, level-shifted to match the image of their last non-degenerate
    ancestor;
  * whole-space vertices (the root and any non-splitting copies of it) map
    to the target root.

Both graphs must share the parameter r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .approximation import (
    ApproximationGraph,
    is_splitting,
    joined_by_radial_geodesic,
    radial_geodesic,
    splitting_vertices,
)
from .errors import InvalidParameter, ParameterMismatch, SpaceMismatch
from .pq import MapSpec, ViolationReport


@dataclass(frozen=True)
class DerivedConstants:
    """Constants of the quasi-isometry bound, derived from (r, lambda, A).

    C1..C3 and C0 come from the level-shift bound on nested splitting
    pairs; C4 bounds the branch-point displacement; C extends the additive
    constant to arbitrary splitting pairs; C5/C6 control branch points
    under degenerate endpoints; Cprime is the additive constant on all
    vertices and C7 the net constant of the image.
    """

    r: float
    lam: float
    A: float
    C1: float
    C2: float
    C3: float
    C0: float
    C4: float
    C: float
    C6: float
    C5: float
    Cprime: float
    C7: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("r", "lam", "A", "C1", "C2", "C3", "C0", "C4", "C",
                 "C6", "C5", "Cprime", "C7")}


def derived_constants(r: float, lam: float, A: float) -> DerivedConstants:
    """Derive the quasi-isometry constants from the diameter-ratio
    constants (lambda, A) of the boundary map and the graph parameter r.

    C1, C2 are logarithms base r of the endpoints of the level-shift
    sandwich; C4 and C6 are dominating rearrangements (sum instead of max)
    of the branch-point inequality chains, so empirical values are checked
    only against the <= direction.
    """
    if not (0 < r <= 1 / 6):
        raise InvalidParameter(f"r must be in (0, 1/6], got {r}")
    if lam < 1 or not (0 < A <= 1):
        raise InvalidParameter("require lambda >= 1 and A in (0, 1]")

    def log_r(x: float) -> float:
        return math.log(x) / math.log(r)

    C1 = log_r(A * (r / 4) ** (1 + lam))
    C2 = log_r((1 / A) * (4 / r) ** (1 + 1 / lam))
    C3 = max(abs(C1), abs(C2))
    C0 = C3 + 1
    # branch displacement: level-gap bounds from the two diameter chains,
    # plus one edge for the ball intersection
    C4 = abs(log_r(A * (r ** 2 / 4) ** lam * (r / 4))) \
        + abs(log_r(r ** 2 / (4 * (16 + 2 * r)))) + 1
    C = C0 + 2 * C4
    C6 = abs(log_r((r / 4) * A * (r ** 4 / 16) ** lam * (r / 4))) + C4
    C5 = C6 + 1
    Cprime = C + 2 * C5 + 1
    C7 = lam + Cprime + 1
    return DerivedConstants(r, lam, A, C1, C2, C3, C0, C4, C, C6, C5,
                            Cprime, C7)


@dataclass(frozen=True)
class QIEstimate:
    lambda_used: float
    C_emp: float
    net_const: float

    def as_dict(self) -> dict:
        return {"lambda_used": self.lambda_used, "C_emp": self.C_emp,
                "net_const": self.net_const}


@dataclass
class ExtensionMap:
    source: ApproximationGraph
    target: ApproximationGraph
    f: MapSpec
    vertex_map: list[int]
    provenance: list[str]  # splitting | interpolated | degenerate-ray | root
    clamped: set[int] = field(default_factory=set)
    tie_break: str = "low"

    def as_dict(self) -> dict:
        return {
            "vertex_map": [[i, j] for i, j in enumerate(self.vertex_map)],
            "provenance": list(self.provenance),
            "clamped": sorted(self.clamped),
            "tie_break": self.tie_break,
        }


def deepest_containing_vertex(gt: ApproximationGraph, image_points: frozenset[int],
                 tie_break: str = "low") -> int:
    """Deepest target vertex whose ball contains the given point set.

    The target root qualifies (its ball is the whole space), so the result
    always exists. Ties at the maximal level break by vertex id.
    """
    for level in range(gt.k_max, gt.k_min - 1, -1):
        cands = [v for v in gt.levels[level]
                 if image_points <= gt.vertices[v].ball]
        if cands:
            return cands[0] if tie_break == "low" else cands[-1]
    raise AssertionError("target root ball must contain every point set")


def _pick(options: list[int], tie_break: str) -> int:
    return min(options) if tie_break == "low" else max(options)


def build_extension(gs: ApproximationGraph, gt: ApproximationGraph,
                    f: MapSpec, tie_break: str = "low") -> ExtensionMap:
    """Construct the vertex map of the extension, deterministically.

    tie_break selects the id used wherever the construction allows any
    qualifying vertex; "high" is the alternate map used by the stability
    check.
    """
    if gs.r != gt.r:
        raise ParameterMismatch(f"graphs built with r={gs.r} and r={gt.r}")
    if f.source != gs.space:
        raise SpaceMismatch("map source does not match the source graph space")
    if f.target != gt.space:
        raise SpaceMismatch("map target does not match the target graph space")

    n = gs.n_vertices
    vmap: list[int | None] = [None] * n
    prov: list[str | None] = [None] * n
    clamped: set[int] = set()
    all_points = frozenset(range(gs.space.n))
    splitting = set(splitting_vertices(gs))
    root = gs.root.id
    t_root = gt.root.id

    # whole-space and splitting vertices
    for v in range(n):
        ball = gs.vertices[v].ball
        if v == root or (ball == all_points and v not in splitting):
            vmap[v] = t_root
            prov[v] = "root"
        elif v in splitting:
            vmap[v] = deepest_containing_vertex(gt, f.image_indices(ball), tie_break)
            prov[v] = "splitting"

    # interpolated vertices
    for v in range(n):
        if vmap[v] is not None or len(gs.vertices[v].ball) < 2:
            continue
        _map_interpolated(gs, gt, f, v, vmap, prov, clamped, splitting,
                          tie_break)

    # degenerate (singleton-ball) rays, one ray per point
    _map_degenerate_rays(gs, gt, f, vmap, prov, clamped, tie_break)

    assert all(x is not None for x in vmap)
    return ExtensionMap(gs, gt, f, [int(x) for x in vmap],
                        [str(p) for p in prov], clamped, tie_break)


def _map_interpolated(gs, gt, f, v, vmap, prov, clamped, splitting,
                      tie_break) -> None:
    ball = gs.vertices[v].ball
    level = gs.vertices[v].level

    # upper anchor: the (unique per level) splitting vertex above v whose
    # ball still equals B(v); the equal-ball chain is contiguous upward
    cur = v
    v2 = None
    while True:
        if gs.vertices[cur].level >= gs.k_max:
            break
        nxt = [w for w in gs.levels[gs.vertices[cur].level + 1]
               if gs.vertices[w].ball == ball]
        if not nxt:
            break
        cur = nxt[0]
        if cur in splitting:
            v2 = cur
            break
    if v2 is None:
        # equal-ball chain hits the truncation ceiling (only possible with
        # a k_max override); fall back to the containment image
        vmap[v] = deepest_containing_vertex(gt, f.image_indices(ball), tie_break)
        prov[v] = "interpolated"
        clamped.add(v)
        return

    # lower anchor: deepest splitting vertex radially below v
    anchors = [u for u in range(gs.n_vertices)
               if u != v and u in splitting
               and gs.vertices[u].level < level
               and gs.up_reach[u] >> v & 1]
    if not anchors:
        # no splitting vertex below: B(v) never properly grows, so v sits
        # over the root chain; anchor at the root
        v1 = gs.root.id
    else:
        top = max(gs.vertices[u].level for u in anchors)
        v1 = _pick([u for u in anchors if gs.vertices[u].level == top],
                   tie_break)

    v1i, v2i = vmap[v1], vmap[v2]
    assert v1i is not None and v2i is not None
    l1, l2 = gt.vertices[v1i].level, gt.vertices[v2i].level
    if v1i == v2i or l1 >= l2:
        vmap[v] = v2i
        prov[v] = "interpolated"
        return

    # pivot at the level of the lower image, radially below the upper image
    ancestors = [u for u in gt.levels[l1] if gt.up_reach[u] >> v2i & 1]
    if v1i in ancestors:
        w1 = v1i
    else:
        adj = set(gt.neighbors[v1i])
        touching = [u for u in ancestors if u in adj]
        w1 = _pick(touching, tie_break) if touching else _pick(ancestors, tie_break)

    t = (gs.vertices[v2].level - level) / (gs.vertices[v2].level - gs.vertices[v1].level)
    level_real = t * gt.vertices[w1].level + (1 - t) * l2
    target_level = math.floor(level_real + 0.5)  # ties round toward v2's image
    path = radial_geodesic(gt, w1, v2i, tie_break)
    idx = target_level - gt.vertices[w1].level
    vmap[v] = path.vertex_ids[idx]
    prov[v] = "interpolated"


def _map_degenerate_rays(gs, gt, f, vmap, prov, clamped, tie_break) -> None:
    # group singleton vertices by their point
    chains: dict[int, list[int]] = {}
    for v in range(gs.n_vertices):
        ball = gs.vertices[v].ball
        if len(ball) == 1 and vmap[v] is None:
            chains.setdefault(next(iter(ball)), []).append(v)

    for z, verts in chains.items():
        verts.sort(key=lambda u: gs.vertices[u].level)
        m_z = gs.vertices[verts[0]].level
        # last non-degenerate ancestor level: m_z - 1 always exists
        u_cands = [u for u in gs.levels[m_z - 1] if z in gs.vertices[u].ball]
        u = _pick(u_cands, tie_break)
        fu = vmap[u]
        assert fu is not None, "ancestor must be mapped before the ray"
        k_f = gt.vertices[fu].level + 1

        fz = f.assignment[z]
        deep = [w for w in gt.levels[gt.k_max] if fz in gt.vertices[w].ball]
        min_size = min(len(gt.vertices[w].ball) for w in deep)
        s = _pick([w for w in deep if len(gt.vertices[w].ball) == min_size],
                  tie_break)
        start_level = min(max(k_f, gt.k_min), gt.k_max)
        starts = [w for w in gt.levels[start_level] if gt.up_reach[w] >> s & 1]
        start = _pick(starts, tie_break)
        path = radial_geodesic(gt, start, s, tie_break)

        for v in verts:
            wanted = gs.vertices[v].level - m_z + k_f
            lo, hi = start_level, gt.k_max
            lvl = min(max(wanted, lo), hi)
            if lvl != wanted:
                clamped.add(v)
            vmap[v] = path.vertex_ids[lvl - start_level]
            prov[v] = "degenerate-ray"


# --- checks over a finished extension ----------------------------------

def verify_image_maximality(em: ExtensionMap) -> ViolationReport:
    """Re-verify, from the graphs alone, that every splitting vertex maps to
    a deepest target vertex containing the image of its ball."""
    gs, gt, f = em.source, em.target, em.f
    for v in range(gs.n_vertices):
        if em.provenance[v] != "splitting":
            continue
        img = f.image_indices(gs.vertices[v].ball)
        fv = em.vertex_map[v]
        if not img <= gt.vertices[fv].ball:
            return ViolationReport(False, math.inf, (v, fv),
                                   {"reason": "image not contained"})
        flv = gt.vertices[fv].level
        for w in range(gt.n_vertices):
            if gt.vertices[w].level > flv and img <= gt.vertices[w].ball:
                return ViolationReport(False, math.inf, (v, fv, w),
                                       {"reason": "deeper container exists"})
    return ViolationReport(True, 0.0, None)


def estimate_qi(em: ExtensionMap, lam: float) -> QIEstimate:
    """Empirical additive constant of the two-sided distance distortion at
    multiplicative constant lam, plus the net constant of the image."""
    if lam < 1:
        raise InvalidParameter("lambda must be >= 1")
    ds = em.source.distance_matrix.astype(float)
    dt = em.target.distance_matrix.astype(float)
    idx = np.asarray(em.vertex_map)
    dimg = dt[np.ix_(idx, idx)]
    upper = float((dimg - lam * ds).max())
    lower = float((ds / lam - dimg).max())
    c_emp = max(0.0, upper, lower)
    net = float(dt[:, sorted(set(em.vertex_map))].min(axis=1).max())
    return QIEstimate(lam, c_emp, net)


def boundary_trace_check(em: ExtensionMap) -> ViolationReport:
    """Every source point stays inside the image balls along its splitting
    vertices: z in B(v) implies f(z) in B(F(v))."""
    gs, gt, f = em.source, em.target, em.f
    for v in range(gs.n_vertices):
        if not is_splitting(gs, v):
            continue
        fv = em.vertex_map[v]
        target_ball = gt.vertices[fv].ball
        for z in gs.vertices[v].ball:
            if f.assignment[z] not in target_ball:
                return ViolationReport(False, math.inf, (int(z), v, fv))
    return ViolationReport(True, 0.0, None)


def branch_distance_check(em: ExtensionMap,
                          constants: DerivedConstants | None = None) -> ViolationReport:
    """Branch points commute with the extension up to a bounded distance:
    for splitting pairs not joined by a radial geodesic, compare the image
    of the source branch point with the branch point of the images.

    With constants given, passes iff the worst distance is <= C4.
    """
    from .approximation import branch_point

    gs, gt = em.source, em.target
    dt = gt.distance_matrix
    split = [v for v in splitting_vertices(gs)]
    worst = 0
    witness = None
    checked = 0
    for i, v1 in enumerate(split):
        for v2 in split[i + 1:]:
            if joined_by_radial_geodesic(gs, v1, v2):
                continue
            checked += 1
            w = branch_point(gs, v1, v2)
            w_img = branch_point(gt, em.vertex_map[v1], em.vertex_map[v2])
            dist = int(dt[em.vertex_map[w], w_img])
            if dist > worst:
                worst = dist
                witness = (v1, v2, w, w_img)
    bound = constants.C4 if constants is not None else None
    passed = True if bound is None else worst <= bound
    return ViolationReport(passed, float(worst), witness,
                           {"bound": bound, "pairs_checked": checked})


def stability_gap(em_low: ExtensionMap, em_high: ExtensionMap) -> int:
    """Max displacement between two tie-break variants of the extension."""
    dt = em_low.target.distance_matrix
    return max(int(dt[a, b]) for a, b in
               zip(em_low.vertex_map, em_high.vertex_map))
