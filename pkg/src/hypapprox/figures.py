"""Matplotlib figure rendering for the CLI report path.

Figures are written to files next to the JSON/CSV reports; nothing here is
needed by the library API.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .approximation import ApproximationGraph
from .extension import ExtensionMap


def save_graph_figure(g: ApproximationGraph, path) -> None:
    """Leveled layout: x by center index, y by level; radial edges solid,
    horizontal edges dashed."""
    xs = np.array([v.center for v in g.vertices], dtype=float)
    ys = np.array([v.level for v in g.vertices], dtype=float)
    # spread identified centers sharing an x within a level
    fig, ax = plt.subplots(figsize=(8, 5))
    for e in g.edges:
        style = "-" if e.kind == "radial" else "--"
        color = "tab:blue" if e.kind == "radial" else "tab:gray"
        ax.plot([xs[e.u], xs[e.v]], [ys[e.u], ys[e.v]], style,
                color=color, lw=0.8, zorder=1)
    sizes = np.array([len(v.ball) for v in g.vertices], dtype=float)
    ax.scatter(xs, ys, s=10 + 4 * sizes, c=ys, cmap="viridis", zorder=2)
    ax.set_xlabel("center point index")
    ax.set_ylabel("level")
    ax.set_yticks(range(g.k_min, g.k_max + 1))
    ax.set_title(f"approximation graph (r={g.r:g}, {g.n_vertices} vertices)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_qi_figure(em: ExtensionMap, lam: float, c_emp: float, path) -> None:
    """Scatter of source vs image distances against the two-sided envelope."""
    ds = em.source.distance_matrix
    dt = em.target.distance_matrix
    idx = np.asarray(em.vertex_map)
    dimg = dt[np.ix_(idx, idx)]
    iu = np.triu_indices(ds.shape[0], k=1)
    x, y = ds[iu], dimg[iu]
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(x, y, s=8, alpha=0.4, zorder=2)
    grid = np.linspace(0, x.max() if len(x) else 1, 50)
    ax.plot(grid, lam * grid + c_emp, "r--", lw=1,
            label=f"upper: {lam:g}·d + {c_emp:g}")
    ax.plot(grid, np.maximum(grid / lam - c_emp, 0), "g--", lw=1,
            label=f"lower: d/{lam:g} − {c_emp:g}")
    ax.set_xlabel("source graph distance")
    ax.set_ylabel("image graph distance")
    ax.legend()
    ax.set_title("quasi-isometry envelope")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_control_figure(t_vals, ratio_vals, p: float, q: float, path) -> None:
    """Distance-ratio scatter against the fitted power control function."""
    t_vals = np.asarray(t_vals)
    ratio_vals = np.asarray(ratio_vals)
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.loglog(t_vals, ratio_vals, ".", ms=4, alpha=0.4, zorder=2)
    grid = np.geomspace(max(t_vals.min(), 1e-9), t_vals.max(), 200)
    ax.loglog(grid, q * np.maximum(grid ** p, grid ** (1 / p)), "r--",
              lw=1, label=f"η(t) = {q:g}·max(t^{p:g}, t^{{1/{p:g}}})")
    ax.set_xlabel("source ratio t = |xa|/|xb|")
    ax.set_ylabel("image ratio |f(x)f(a)|/|f(x)f(b)|")
    ax.legend()
    ax.set_title("quasi-symmetry control")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
