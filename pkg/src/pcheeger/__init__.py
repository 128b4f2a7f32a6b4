"""First Dirichlet eigenpairs of the graph p-Laplacian, exact Cheeger cuts,
and the p -> 1 limit structure."""

from .cheeger import (
    CheegerReport,
    CutRecord,
    cheeger_constant,
    cut_ratio,
    is_cheeger_cut,
    nested_chain_check,
)
from .continuation import SweepReport, default_schedule, extract_and_verify, sweep
from .errors import (
    BracketFailureError,
    DomainTooLargeError,
    NoConvergenceError,
    StructureViolationError,
)
from .fig1 import (
    FIG1_OMEGA,
    ScalarReduction,
    build_fig1,
    convexity_lower_bound_check,
    f_eval,
    reduced_eigenpair,
    solve_xq,
    xhat_closed_form,
)
from .graph import (
    DirichletFunction,
    Domain,
    WeightedGraph,
    boundary_weight,
    graph_to_json_dict,
    is_connected,
    load_graph_json,
    p_norm,
    volume,
)
from .one_laplacian import (
    Decomposition,
    coarea_total,
    decompose_limit,
    superlevel_set,
    verify_eigenfunction_structure,
    verify_lambda11_equals_h,
)
from .spectral import (
    Eigenpair,
    SolverOptions,
    apply_p_laplacian,
    default_epsilon_schedule,
    default_tolerance,
    dirichlet_energy,
    dirichlet_energy_regularized,
    eigen_residual,
    energy_gradient,
    first_eigenpair,
    rayleigh_quotient,
    warm_started,
)

__version__ = "0.1.0"

__all__ = [
    "BracketFailureError",
    "CheegerReport",
    "CutRecord",
    "Decomposition",
    "DirichletFunction",
    "Domain",
    "DomainTooLargeError",
    "Eigenpair",
    "FIG1_OMEGA",
    "NoConvergenceError",
    "ScalarReduction",
    "SolverOptions",
    "StructureViolationError",
    "SweepReport",
    "WeightedGraph",
    "apply_p_laplacian",
    "boundary_weight",
    "build_fig1",
    "cheeger_constant",
    "coarea_total",
    "convexity_lower_bound_check",
    "cut_ratio",
    "decompose_limit",
    "default_epsilon_schedule",
    "default_schedule",
    "default_tolerance",
    "dirichlet_energy",
    "dirichlet_energy_regularized",
    "eigen_residual",
    "energy_gradient",
    "extract_and_verify",
    "f_eval",
    "first_eigenpair",
    "graph_to_json_dict",
    "is_cheeger_cut",
    "is_connected",
    "load_graph_json",
    "nested_chain_check",
    "p_norm",
    "rayleigh_quotient",
    "reduced_eigenpair",
    "solve_xq",
    "superlevel_set",
    "sweep",
    "verify_eigenfunction_structure",
    "verify_lambda11_equals_h",
    "volume",
    "warm_started",
    "xhat_closed_form",
]
