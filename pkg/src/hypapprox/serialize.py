"""Export formats: graph JSON/DOT, extension JSON, report writing.

All JSON is emitted with sorted keys and no timestamps so identical inputs
produce byte-identical artifacts.
"""

from __future__ import annotations

import json

from .approximation import ApproximationGraph
from .extension import ExtensionMap


def graph_to_dict(g: ApproximationGraph) -> dict:
    return {
        "r": g.r,
        "k_min": g.k_min,
        "k_max": g.k_max,
        "edge_rule": g.edge_rule,
        "labels": list(g.space.labels),
        "vertices": [
            {"id": v.id, "level": v.level, "center": v.center,
             "ball": sorted(v.ball), "radius": v.radius}
            for v in g.vertices
        ],
        "edges": [{"u": e.u, "v": e.v, "kind": e.kind} for e in g.edges],
    }


def graph_to_dot(g: ApproximationGraph) -> str:
    """DOT export: vertices ranked by level, radial edges solid,
    horizontal edges dashed."""
    lines = ["graph hyperbolic_approximation {", "  rankdir=BT;"]
    for k in range(g.k_min, g.k_max + 1):
        ids = g.levels[k]
        names = " ".join(f"v{i};" for i in ids)
        lines.append(f"  {{ rank=same; {names} }}")
        for i in ids:
            v = g.vertices[i]
            label = f"L{v.level} c={g.space.labels[v.center]} |B|={len(v.ball)}"
            lines.append(f'  v{i} [label="{label}"];')
    for e in g.edges:
        style = "solid" if e.kind == "radial" else "dashed"
        lines.append(f"  v{e.u} -- v{e.v} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def extension_to_dict(em: ExtensionMap, constants=None, qi=None,
                      checks: dict | None = None) -> dict:
    out = em.as_dict()
    if constants is not None:
        out["derived_constants"] = constants.as_dict()
    if qi is not None:
        out["qi_estimate"] = qi.as_dict()
    if checks:
        out["checks"] = checks
    return out


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
