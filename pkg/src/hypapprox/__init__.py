"""Hyperbolic approximation graphs of finite metric spaces.

Build the truncated approximation graph of a finite metric space, measure
its four-point hyperbolicity, check PQ-symmetry of maps between spaces,
and extend such maps to quasi-isometries between the graphs.
"""

from .approximation import (
    ApproximationGraph,
    Edge,
    Vertex,
    branch_point,
    build_approximation,
    check_geodesic_normal_form,
    cone_points,
    default_k_max,
    graph_distance,
    is_splitting,
    radial_geodesic,
    splitting_vertices,
    structural_check_suite,
    truncation_level,
)
from .errors import HypApproxError, MetricValidationError
from .extension import (
    DerivedConstants,
    ExtensionMap,
    build_extension,
    derived_constants,
    estimate_qi,
    stability_gap,
)
from .hyperbolicity import (
    HyperbolicityReport,
    delta_four_point,
    fit_visual_constants,
    gromov_product,
    visuality_constant,
)
from .metric import (
    FiniteMetricSpace,
    load_space,
    snowflake,
    space_from_points,
    subset_diameter,
    validate_metric,
)
from .pq import (
    DiamRatioParams,
    MapSpec,
    PQParams,
    check_diam_ratio,
    check_metrically_proper,
    check_pq,
    diam_to_pq,
    fit_pq,
    pq_to_diam,
)
from .serialize import dump_json, dumps_json, graph_to_dict, graph_to_dot

__version__ = "0.1.0"

__all__ = [
    "ApproximationGraph",
    "DerivedConstants",
    "DiamRatioParams",
    "Edge",
    "ExtensionMap",
    "FiniteMetricSpace",
    "HypApproxError",
    "HyperbolicityReport",
    "MapSpec",
    "MetricValidationError",
    "PQParams",
    "Vertex",
    "branch_point",
    "build_approximation",
    "build_extension",
    "check_diam_ratio",
    "check_geodesic_normal_form",
    "check_metrically_proper",
    "check_pq",
    "cone_points",
    "default_k_max",
    "delta_four_point",
    "derived_constants",
    "diam_to_pq",
    "dump_json",
    "dumps_json",
    "estimate_qi",
    "fit_pq",
    "fit_visual_constants",
    "graph_distance",
    "graph_to_dict",
    "graph_to_dot",
    "gromov_product",
    "is_splitting",
    "load_space",
    "pq_to_diam",
    "radial_geodesic",
    "snowflake",
    "space_from_points",
    "splitting_vertices",
    "stability_gap",
    "structural_check_suite",
    "subset_diameter",
    "truncation_level",
    "validate_metric",
    "visuality_constant",
]
