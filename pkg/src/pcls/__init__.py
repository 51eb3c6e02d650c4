"""Least-squares polynomial chaos expansion with optimal sampling strategies."""

from .orthopoly import (
    BasisSpec,
    PolyFamily,
    QuadratureRule,
    basis_cardinality,
    eval_basis_matrix,
    eval_basis_row,
    eval_univariate,
    gauss_rule,
    hermite,
    hermite_basis,
    jacobi,
    laguerre,
    legendre,
    legendre_basis,
    multi_index_set,
)
from .sampling import (
    CoherenceEstimate,
    DiscrepancyReport,
    SampleSet,
    b_value,
    compute_star_discrepancy,
    draw_samples,
    estimate_coherence,
    sample_asymptotic,
    sample_coherence_optimal,
    sample_lhs,
    sample_qmc,
    sample_randomized_quadrature,
    sample_standard,
)
from .design import (
    DesignState,
    criterion_value,
    det_update_ratio,
    fedorov_exchange,
    greedy_design,
    hybrid_design,
    trace_update,
)
from .solver import (
    FitResult,
    StabilityReport,
    fit,
    info_matrix,
    pce_moments,
    stability_report,
    validation_error,
)
from .models import (
    BatteryModel,
    BatteryParams,
    ManufacturedModel,
    RULResult,
    battery_input_map,
    battery_rul,
    duffing_solve,
    duffing_trajectory,
    manufactured_eval,
    manufactured_model,
)

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "BatteryModel",
    "BatteryParams",
    "CoherenceEstimate",
    "DesignState",
    "DiscrepancyReport",
    "FitResult",
    "ManufacturedModel",
    "PolyFamily",
    "QuadratureRule",
    "RULResult",
    "SampleSet",
    "StabilityReport",
    "b_value",
    "basis_cardinality",
    "battery_input_map",
    "battery_rul",
    "compute_star_discrepancy",
    "criterion_value",
    "det_update_ratio",
    "draw_samples",
    "duffing_solve",
    "duffing_trajectory",
    "estimate_coherence",
    "eval_basis_matrix",
    "eval_basis_row",
    "eval_univariate",
    "fedorov_exchange",
    "fit",
    "gauss_rule",
    "greedy_design",
    "hermite",
    "hermite_basis",
    "hybrid_design",
    "info_matrix",
    "jacobi",
    "laguerre",
    "legendre",
    "legendre_basis",
    "manufactured_eval",
    "manufactured_model",
    "multi_index_set",
    "pce_moments",
    "sample_asymptotic",
    "sample_coherence_optimal",
    "sample_lhs",
    "sample_qmc",
    "sample_randomized_quadrature",
    "sample_standard",
    "stability_report",
    "trace_update",
    "validation_error",
    "__version__",
]
