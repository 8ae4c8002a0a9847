"""Command-line front end.

Commands: validate, build, analyze, check-pq, extend, pipeline. Reports go
to --out as JSON plus a delimited summary CSV; the report path also renders
matplotlib figures unless --no-figures is given. Exit status: 0 when every
requested check passes, 1 on a check failure (with a machine-readable
violation report on disk), 2 on input or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .approximation import build_approximation, structural_check_suite
from .errors import HypApproxError, MetricValidationError
from .extension import (
    boundary_trace_check,
    branch_distance_check,
    build_extension,
    derived_constants,
    estimate_qi,
    verify_image_maximality,
)
from .hyperbolicity import delta_four_point, fit_visual_constants, visuality_constant
from .metric import load_space
from .pq import MapSpec, check_diam_ratio, check_pq, diam_to_pq, fit_pq, pq_to_diam
from .serialize import dump_json, extension_to_dict, graph_to_dict, graph_to_dot

DELTA_BOUND = 1.5
DEFAULT_P_GRID = (1.0, 1.5, 2.0, 3.0, 4.0)


def parse_r(text: str) -> float:
    return float(Fraction(text))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypapprox", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_map=False):
        p.add_argument("--input", required=True, help="source space (CSV or JSON)")
        if needs_map:
            p.add_argument("--map", required=True, help="map JSON {pairs: [[src,dst],...]}")
            p.add_argument("--target", required=True, help="target space (CSV or JSON)")
        p.add_argument("--r", default="1/6", help="graph parameter, e.g. 1/6")
        p.add_argument("--k-max", type=int, default=None, dest="k_max")
        p.add_argument("--edge-rule", choices=["pointset", "distance"],
                       default="pointset", dest="edge_rule")
        p.add_argument("--p-grid", default=",".join(str(p_) for p_ in DEFAULT_P_GRID),
                       dest="p_grid")
        p.add_argument("--lambda", type=float, default=None, dest="lam")
        p.add_argument("--format", choices=["json", "dot", "text"], default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--no-figures", action="store_true")
        p.add_argument("--max-exhaustive", type=int, default=500,
                       dest="max_exhaustive")

    common(sub.add_parser("validate", help="check the metric axioms"))
    common(sub.add_parser("build", help="build and export the graph"))
    common(sub.add_parser("analyze", help="delta, structural sweeps, visual fit"))
    common(sub.add_parser("check-pq", help="PQ-symmetry and diameter-ratio checks"),
           needs_map=True)
    common(sub.add_parser("extend", help="build the extension map and check it"),
           needs_map=True)
    common(sub.add_parser("pipeline", help="everything for a (space, map, space) triple"),
           needs_map=True)
    return ap


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_summary_csv(path: Path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["check", "passed", "value", "bound"])
        for row in rows:
            w.writerow(row)


def _fmt(x):
    return "" if x is None else x


# --- command bodies ----------------------------------------------------

def cmd_validate(args) -> int:
    out = _out_dir(args)
    try:
        space = load_space(args.input)
    except MetricValidationError as exc:
        report = {"command": "validate", "passed": False,
                  "violation": type(exc).__name__, "detail": str(exc)}
        dump_json(report, out / "validate.json")
        print(f"validate: FAIL ({exc})")
        return 1
    report = {"command": "validate", "passed": True, "n_points": space.n,
              "diam": space.diam, "min_pos_dist": space.min_pos_dist,
              "labels": list(space.labels)}
    dump_json(report, out / "validate.json")
    print(f"validate: OK  n={space.n} diam={space.diam:g}")
    return 0


def cmd_build(args) -> int:
    out = _out_dir(args)
    space = load_space(args.input)
    g = build_approximation(space, parse_r(args.r), args.k_max, args.edge_rule)
    dump_json(graph_to_dict(g), out / "graph.json")
    (out / "graph.dot").write_text(graph_to_dot(g))
    if args.format == "text":
        for k in range(g.k_min, g.k_max + 1):
            print(f"level {k}: {len(g.levels[k])} vertices")
    print(f"build: OK  {g.n_vertices} vertices, levels {g.k_min}..{g.k_max}")
    return 0


def _analyze_graph(g, args, prefix, out: Path, rows, report):
    if g.n_vertices <= args.max_exhaustive:
        delta = delta_four_point(g, max_exhaustive=None)
    else:
        delta = delta_four_point(g, max_exhaustive=args.max_exhaustive,
                                 sample=200_000, seed=args.seed)
    suite = structural_check_suite(g)
    delta_ok = delta.delta <= DELTA_BOUND
    report[f"{prefix}delta"] = delta.as_dict()
    report[f"{prefix}structural_checks"] = suite
    rows.append([f"{prefix}four_point_delta", delta_ok, delta.delta, DELTA_BOUND])
    for name, res in suite.items():
        rows.append([f"{prefix}{name}", res["passed"],
                     _fmt(res.get("worst_ratio", res.get("worst_margin"))),
                     _fmt(res.get("bound"))])
    try:
        fit = fit_visual_constants(g)
        report[f"{prefix}visual_fit"] = fit.as_dict()
        rows.append([f"{prefix}visual_fit_spread", True, fit.c2 / fit.c1, ""])
    except HypApproxError as exc:
        report[f"{prefix}visual_fit"] = {"skipped": str(exc)}
    vis = visuality_constant(g)
    report[f"{prefix}visuality_constant"] = vis
    rows.append([f"{prefix}visuality_constant", True, vis, ""])
    if not args.no_figures:
        from .figures import save_graph_figure
        save_graph_figure(g, out / f"{prefix}graph.png")
    return delta_ok and all(res["passed"] for res in suite.values())


def cmd_analyze(args) -> int:
    out = _out_dir(args)
    space = load_space(args.input)
    g = build_approximation(space, parse_r(args.r), args.k_max, args.edge_rule)
    dump_json(graph_to_dict(g), out / "graph.json")
    (out / "graph.dot").write_text(graph_to_dot(g))
    report: dict = {"command": "analyze", "r": g.r,
                    "n_vertices": g.n_vertices}
    rows: list = []
    ok = _analyze_graph(g, args, "", out, rows, report)
    report["passed"] = ok
    dump_json(report, out / "analyze.json")
    _write_summary_csv(out / "analyze.csv", rows)
    print(f"analyze: {'OK' if ok else 'FAIL'}  delta={report['delta']['delta']}")
    return 0 if ok else 1


def _load_triple(args):
    source = load_space(args.input)
    target = load_space(args.target)
    f = MapSpec.load(args.map, source, target)
    return source, target, f


def _p_grid(args):
    return [float(Fraction(p)) for p in args.p_grid.split(",") if p.strip()]


def _pq_section(f, args, out: Path, rows, report, prefix=""):
    params, fit_report = fit_pq(f, _p_grid(args))
    diam_params = pq_to_diam(params.p, params.q)
    pq_report = check_pq(f, params)
    dr_report = check_diam_ratio(f, diam_params)
    back = diam_to_pq(diam_params.lam, diam_params.A)
    report[f"{prefix}pq"] = {
        "fitted": {"p": params.p, "q": params.q},
        "check": pq_report.as_dict(),
        "constants_in": {"p": params.p, "q": params.q},
        "constants_out": {"lambda": diam_params.lam, "A": diam_params.A,
                          "p_back": back.p, "q_back": back.q},
        "diam_ratio_check": dr_report.as_dict(),
    }
    rows.append([f"{prefix}pq_control", pq_report.passed, pq_report.worst_ratio, 1.0])
    rows.append([f"{prefix}diam_ratio", dr_report.passed, dr_report.worst_ratio, 1.0])
    if not args.no_figures:
        import numpy as np

        from .figures import save_control_figure
        ds, dt = f.source.dist, f.target_dist
        ts, ratios = [], []
        n = f.source.n
        for x in range(n):
            for a in range(n):
                for b in range(n):
                    if x in (a, b) or a == b:
                        continue
                    ts.append(ds[x, a] / ds[x, b])
                    ratios.append(dt[x, a] / dt[x, b])
        save_control_figure(np.array(ts), np.array(ratios), params.p,
                            params.q, out / f"{prefix}pq_control.png")
    return params, diam_params, pq_report.passed and dr_report.passed


def cmd_check_pq(args) -> int:
    out = _out_dir(args)
    _, _, f = _load_triple(args)
    report: dict = {"command": "check-pq"}
    rows: list = []
    _, _, ok = _pq_section(f, args, out, rows, report)
    report["passed"] = ok
    dump_json(report, out / "pqcheck.json")
    _write_summary_csv(out / "pqcheck.csv", rows)
    print(f"check-pq: {'OK' if ok else 'FAIL'}")
    return 0 if ok else 1


def _extend_section(args, f, out: Path, rows, report, prefix=""):
    r = parse_r(args.r)
    gs = build_approximation(f.source, r, args.k_max, args.edge_rule)
    gt = build_approximation(f.target, r, args.k_max, args.edge_rule)
    params, _ = fit_pq(f, _p_grid(args))
    diam_params = pq_to_diam(params.p, params.q)
    consts = derived_constants(r, diam_params.lam, diam_params.A)
    em = build_extension(gs, gt, f)
    lam = args.lam if args.lam is not None else consts.lam
    qi = estimate_qi(em, lam)
    maximality = verify_image_maximality(em)
    trace = boundary_trace_check(em)
    branch = branch_distance_check(em, consts)
    checks = {
        "image_maximality": maximality.as_dict(),
        "boundary_trace": trace.as_dict(),
        "branch_distance": branch.as_dict(),
        "qi_additive_within_bound": qi.C_emp <= consts.Cprime,
        "net_within_bound": qi.net_const <= consts.C7,
    }
    report[f"{prefix}extension"] = extension_to_dict(em, consts, qi, checks)
    rows.append([f"{prefix}image_maximality", maximality.passed, "", ""])
    rows.append([f"{prefix}boundary_trace", trace.passed, "", ""])
    rows.append([f"{prefix}branch_distance", branch.passed,
                 branch.worst_ratio, consts.C4])
    rows.append([f"{prefix}qi_additive", checks["qi_additive_within_bound"],
                 qi.C_emp, consts.Cprime])
    rows.append([f"{prefix}qi_net", checks["net_within_bound"],
                 qi.net_const, consts.C7])
    if not args.no_figures:
        from .figures import save_qi_figure
        save_qi_figure(em, lam, qi.C_emp, out / f"{prefix}qi.png")
    ok = (maximality.passed and trace.passed and branch.passed
          and checks["qi_additive_within_bound"] and checks["net_within_bound"])
    return gs, gt, ok


def cmd_extend(args) -> int:
    out = _out_dir(args)
    _, _, f = _load_triple(args)
    report: dict = {"command": "extend"}
    rows: list = []
    _, _, ok = _extend_section(args, f, out, rows, report)
    report["passed"] = ok
    dump_json(report, out / "extension.json")
    _write_summary_csv(out / "extension.csv", rows)
    print(f"extend: {'OK' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_pipeline(args) -> int:
    out = _out_dir(args)
    source, target, f = _load_triple(args)
    r = parse_r(args.r)
    report: dict = {"command": "pipeline", "r": r}
    rows: list = []
    ok = True

    gs = build_approximation(source, r, args.k_max, args.edge_rule)
    gt = build_approximation(target, r, args.k_max, args.edge_rule)
    dump_json(graph_to_dict(gs), out / "source_graph.json")
    dump_json(graph_to_dict(gt), out / "target_graph.json")
    (out / "source_graph.dot").write_text(graph_to_dot(gs))
    (out / "target_graph.dot").write_text(graph_to_dot(gt))
    ok &= _analyze_graph(gs, args, "source_", out, rows, report)
    ok &= _analyze_graph(gt, args, "target_", out, rows, report)
    _, _, pq_ok = _pq_section(f, args, out, rows, report)
    ok &= pq_ok
    _, _, ext_ok = _extend_section(args, f, out, rows, report)
    ok &= ext_ok

    report["passed"] = bool(ok)
    dump_json(report, out / "pipeline.json")
    _write_summary_csv(out / "pipeline.csv", rows)
    print(f"pipeline: {'OK' if ok else 'FAIL'}")
    return 0 if ok else 1


COMMANDS = {
    "validate": cmd_validate,
    "build": cmd_build,
    "analyze": cmd_analyze,
    "check-pq": cmd_check_pq,
    "extend": cmd_extend,
    "pipeline": cmd_pipeline,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except MetricValidationError as exc:
        # validation failures outside the validate command are check failures
        print(f"error: invalid metric input: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
