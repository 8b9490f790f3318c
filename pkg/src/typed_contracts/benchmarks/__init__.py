"""Profit benchmarks for typed principal-agent problems."""

from .core import (
    BENCHMARK_NAMES,
    BenchmarkResult,
    GapsTable,
    feasible_profiles,
    gaps_table,
    linear_candidates,
    opt_linear,
    opt_menu,
    opt_single,
    opt_single_extreme_points,
    opt_typeaware,
    preference_hyperplanes,
    profile_margins,
    ratio,
    stability_threshold,
    welfare,
)
from .envelope import Breakpoint, UtilityEnvelope, utility_envelope
from .programs import ProgramContext
from .search import DEFAULT_BUDGET, BudgetExceeded, SearchStats, candidate_actions

__all__ = [
    "BENCHMARK_NAMES",
    "BenchmarkResult",
    "Breakpoint",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "GapsTable",
    "ProgramContext",
    "SearchStats",
    "UtilityEnvelope",
    "candidate_actions",
    "feasible_profiles",
    "gaps_table",
    "linear_candidates",
    "opt_linear",
    "opt_menu",
    "opt_single",
    "opt_single_extreme_points",
    "opt_typeaware",
    "preference_hyperplanes",
    "profile_margins",
    "ratio",
    "stability_threshold",
    "utility_envelope",
    "welfare",
]
