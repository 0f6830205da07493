"""Exact enumeration of stochastically recurrent sandpile states and lacking
polynomials of sinked graphs, specialized for complete bipartite graphs."""

from .analysis import (
    BoundsReport,
    RootConvergenceError,
    RootReport,
    ScanCell,
    SectorResult,
    SequenceVerdict,
    ViolationWitness,
    bounds_report,
    conjecture_scan,
    convolve,
    is_log_concave,
    is_unimodal,
    partial_sums,
    roots,
    sector_check,
    write_scan_csv,
)
from .errors import BudgetExceededError, UnstableConfigurationError
from .graphs import (
    BipartiteSpec,
    Configuration,
    DisconnectedGraphError,
    DuplicateEdgeError,
    Graph,
    GraphError,
    InvalidSinkError,
    InvalidSpecError,
    InvalidVertexError,
    LoopEdgeError,
    from_edge_list,
    is_stable,
    make_complete_bipartite,
    parse_edge_list_text,
)
from .orientations import (
    CompBox,
    Orientation,
    all_orientations,
    comp_box,
    is_compatible,
    out_degrees,
    sto_by_union,
)
from .polynomials import (
    LackingPolynomial,
    closed_form_2n,
    closed_form_m2,
    from_histogram,
    lacking_polynomial,
    lacking_polynomial_bipartite,
    level,
    polynomial_from_json,
    reverse_coefficients,
)
from .recurrence import (
    LevelHistogram,
    SideMultiset,
    enumerate_side_multisets,
    enumerate_stable,
    hall_condition_check,
    is_stochastically_recurrent,
    stable_count,
    sto_bipartite_symmetric,
    sto_fast,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteSpec",
    "BoundsReport",
    "BudgetExceededError",
    "CompBox",
    "Configuration",
    "DisconnectedGraphError",
    "DuplicateEdgeError",
    "Graph",
    "GraphError",
    "InvalidSinkError",
    "InvalidSpecError",
    "InvalidVertexError",
    "LackingPolynomial",
    "LevelHistogram",
    "LoopEdgeError",
    "Orientation",
    "RootConvergenceError",
    "RootReport",
    "ScanCell",
    "SectorResult",
    "SequenceVerdict",
    "SideMultiset",
    "UnstableConfigurationError",
    "ViolationWitness",
    "all_orientations",
    "bounds_report",
    "closed_form_2n",
    "closed_form_m2",
    "comp_box",
    "conjecture_scan",
    "convolve",
    "enumerate_side_multisets",
    "enumerate_stable",
    "from_edge_list",
    "from_histogram",
    "hall_condition_check",
    "is_compatible",
    "is_log_concave",
    "is_stable",
    "is_stochastically_recurrent",
    "is_unimodal",
    "lacking_polynomial",
    "lacking_polynomial_bipartite",
    "level",
    "make_complete_bipartite",
    "out_degrees",
    "parse_edge_list_text",
    "partial_sums",
    "polynomial_from_json",
    "reverse_coefficients",
    "roots",
    "sector_check",
    "stable_count",
    "sto_bipartite_symmetric",
    "sto_by_union",
    "sto_fast",
    "write_scan_csv",
]
