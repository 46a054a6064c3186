"""circuitpack: noise-aware batching of quantum circuits on one device.

Given a device's coupling map and calibration data plus a workload of
circuits, the package enumerates candidate qubit placements per circuit,
scores them against calibration error rates, builds a compatibility
graph of placements that keep a crosstalk buffer between them, and
partitions the workload into batches that execute simultaneously.
"""
from .circuits import (
    CircuitOp,
    CircuitSet,
    CircuitSpec,
    as_circuit_set,
    circuit_set_document,
    load_circuit_set,
    normalized_areas,
)
from .compat import (
    CompatEdge,
    CompatVertex,
    CompatibilityGraph,
    build_compatibility_graph,
    graph_document,
)
from .errors import DocumentError, ExactSolverLimitError
from .hardware import (
    CalibrationData,
    CouplingMap,
    as_calibration,
    as_coupling_map,
    calibration_document,
    coupling_map_document,
    load_calibration,
    load_coupling_map,
)
from .layouts import (
    DEFAULT_LAYOUT_CAP,
    DistanceCounter,
    Layout,
    LayoutList,
    enumerate_layouts,
    filter_layouts,
    find_boundary,
    has_overlap,
    layout_list_document,
    load_layout_list,
    score_layout,
    scored_layouts,
    validate_layout,
)
from .results import (
    JointCounts,
    classical_fidelity,
    joint_counts_document,
    load_joint_counts,
    marginal_counts_document,
    marginalize,
    spans_for_batch,
)
from .scheduling import (
    Batch,
    DEFAULT_BUFFER,
    DEFAULT_EPSILON,
    DEFAULT_EPSILON_MODE,
    DEFAULT_SOLVER,
    EXACT_SEARCH_LIMIT,
    IlpInstance,
    Schedule,
    batch_objective,
    greedy_maximal_clique,
    layout_list_for,
    load_schedule_document,
    schedule_all,
    schedule_document,
    schedule_dynamic,
    schedule_metrics,
    solve_exact,
    validate_batch,
)

__version__ = "0.1.0"

__all__ = [
    "Batch",
    "CalibrationData",
    "CircuitOp",
    "CircuitSet",
    "CircuitSpec",
    "CompatEdge",
    "CompatVertex",
    "CompatibilityGraph",
    "CouplingMap",
    "DEFAULT_BUFFER",
    "DEFAULT_EPSILON",
    "DEFAULT_EPSILON_MODE",
    "DEFAULT_LAYOUT_CAP",
    "DEFAULT_SOLVER",
    "DistanceCounter",
    "DocumentError",
    "EXACT_SEARCH_LIMIT",
    "ExactSolverLimitError",
    "IlpInstance",
    "JointCounts",
    "Layout",
    "LayoutList",
    "BatchScheduler",
    "Schedule",
    "as_calibration",
    "as_circuit_set",
    "as_coupling_map",
    "batch_objective",
    "build_compatibility_graph",
    "calibration_document",
    "circuit_set_document",
    "classical_fidelity",
    "coupling_map_document",
    "enumerate_layouts",
    "filter_layouts",
    "find_boundary",
    "graph_document",
    "greedy_maximal_clique",
    "has_overlap",
    "joint_counts_document",
    "layout_list_document",
    "layout_list_for",
    "load_calibration",
    "load_circuit_set",
    "load_coupling_map",
    "load_joint_counts",
    "load_layout_list",
    "load_schedule_document",
    "marginal_counts_document",
    "marginalize",
    "normalized_areas",
    "schedule_all",
    "schedule_document",
    "schedule_dynamic",
    "schedule_metrics",
    "score_layout",
    "scored_layouts",
    "solve_exact",
    "spans_for_batch",
    "validate_batch",
    "validate_layout",
]


def __getattr__(name):
    # BatchScheduler pulls in scikit-learn; import it only on first use.
    if name == "BatchScheduler":
        from .estimator import BatchScheduler

        return BatchScheduler
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
