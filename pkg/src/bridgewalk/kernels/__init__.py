from bridgewalk.kernels.diagnostics import (
    GrowthDiagnostics,
    MomentReport,
    RatioDiagnostics,
    Violation,
    growth_diagnostics,
    ratio_diagnostics,
    verify_moment_properties,
)
from bridgewalk.kernels.generating import (
    GeneratingSummary,
    SeriesValue,
    generating_value,
    spectral_radius_estimate,
    with_F_at_rho,
)
from bridgewalk.kernels.sequences import (
    EscapeReport,
    FirstReturnSequence,
    ReturnSequence,
    escape_probability,
    first_return_probabilities,
    renewal_residuals,
    return_probabilities,
)
from bridgewalk.kernels.tree import TreeClosedForms, tree_closed_forms

__all__ = [
    "EscapeReport",
    "FirstReturnSequence",
    "GeneratingSummary",
    "GrowthDiagnostics",
    "MomentReport",
    "RatioDiagnostics",
    "ReturnSequence",
    "SeriesValue",
    "TreeClosedForms",
    "Violation",
    "escape_probability",
    "first_return_probabilities",
    "generating_value",
    "growth_diagnostics",
    "ratio_diagnostics",
    "renewal_residuals",
    "return_probabilities",
    "spectral_radius_estimate",
    "tree_closed_forms",
    "verify_moment_properties",
    "with_F_at_rho",
]
