from bridgewalk.range_stats.exact import exact_bridge_range_mean, exact_unconditioned_range_mean
from bridgewalk.range_stats.experiment import (
    ConvergenceRow,
    ConvergenceTable,
    DistanceQuantiles,
    RangeSummary,
    TrialOutcome,
    convergence_table,
    max_distance_quantiles,
    mc_range_experiment,
    run_trials,
    summarize,
    theoretical_limit,
)
from bridgewalk.range_stats.paths import max_distance_of_path, range_of_path

__all__ = [
    "ConvergenceRow",
    "ConvergenceTable",
    "DistanceQuantiles",
    "RangeSummary",
    "TrialOutcome",
    "convergence_table",
    "exact_bridge_range_mean",
    "exact_unconditioned_range_mean",
    "max_distance_of_path",
    "max_distance_quantiles",
    "mc_range_experiment",
    "range_of_path",
    "run_trials",
    "summarize",
    "theoretical_limit",
]
