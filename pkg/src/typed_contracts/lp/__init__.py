"""Exact rational linear programming."""

from .kernels import available_backends, set_backend
from .simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    CertificateError,
    LpOutcome,
    LpProblem,
    build_problem,
    solve,
    solve_with_extra_variable,
)

__all__ = [
    "INFEASIBLE",
    "OPTIMAL",
    "UNBOUNDED",
    "CertificateError",
    "LpOutcome",
    "LpProblem",
    "available_backends",
    "build_problem",
    "set_backend",
    "solve",
    "solve_with_extra_variable",
]
