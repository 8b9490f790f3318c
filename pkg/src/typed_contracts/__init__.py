"""Exact benchmarks, best responses and instance generators for typed principal-agent problems."""

from .benchmarks import (
    BenchmarkResult,
    BudgetExceeded,
    UtilityEnvelope,
    gaps_table,
    opt_linear,
    opt_menu,
    opt_single,
    opt_single_extreme_points,
    opt_typeaware,
    stability_threshold,
    utility_envelope,
    welfare,
)
from .instance import (
    CostGapProfile,
    Instance,
    InstanceError,
    cost_gap_statistic,
    expected_rewards,
    make_instance,
    normalize,
    perturb_costs,
    sort_instance,
    validate,
)
from .response import (
    Contract,
    LinearContract,
    Menu,
    ResponseReport,
    best_response,
    evaluate_contract,
    evaluate_linear,
    evaluate_menu,
    verify_ic,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkResult",
    "BudgetExceeded",
    "Contract",
    "CostGapProfile",
    "Instance",
    "InstanceError",
    "LinearContract",
    "Menu",
    "ResponseReport",
    "UtilityEnvelope",
    "best_response",
    "cost_gap_statistic",
    "evaluate_contract",
    "evaluate_linear",
    "evaluate_menu",
    "expected_rewards",
    "gaps_table",
    "make_instance",
    "normalize",
    "opt_linear",
    "opt_menu",
    "opt_single",
    "opt_single_extreme_points",
    "opt_typeaware",
    "perturb_costs",
    "sort_instance",
    "stability_threshold",
    "utility_envelope",
    "validate",
    "verify_ic",
    "welfare",
]
