"""Shortest s-t paths on DAGs where repeated edge labels are paid only once."""

from .model import (
    CycleError,
    Edge,
    Instance,
    InvalidPathError,
    PathTrace,
    ValidationReport,
    reuse_length,
    topological_order,
    validate_instance,
    verify_budget,
)
from .solvers import SolveResult, decide, enumerate_paths, solve_bruteforce, solve_labelset

__all__ = [
    "CycleError",
    "Edge",
    "Instance",
    "InvalidPathError",
    "PathTrace",
    "SolveResult",
    "ValidationReport",
    "decide",
    "enumerate_paths",
    "reuse_length",
    "solve_bruteforce",
    "solve_labelset",
    "topological_order",
    "validate_instance",
    "verify_budget",
]
