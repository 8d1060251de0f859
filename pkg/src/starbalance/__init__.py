"""Load redistribution on master-worker star platforms with the initial load on the workers."""

from .core import (
    InvalidPlan,
    InvalidPlatform,
    MovePlan,
    Platform,
    Timeline,
    Violation,
    Worker,
    finish_times,
    makespan,
    simulate,
    validate,
)
from .heuristics import bba, mbbsa, mbbsa_feasible, moore, optimize_makespan, rbsa, rbsa_feasible
from .oracle import BudgetExceeded, brute_force
from .ordering import InfeasibleImbalance, order_redistribution, redistribution_time

__all__ = [
    "BudgetExceeded", "InfeasibleImbalance", "InvalidPlan", "InvalidPlatform", "MovePlan",
    "Platform", "Timeline", "Violation", "Worker", "bba", "brute_force", "finish_times",
    "makespan", "mbbsa", "mbbsa_feasible", "moore", "optimize_makespan", "order_redistribution",
    "rbsa", "rbsa_feasible", "redistribution_time", "simulate", "validate",
]
