"""Separator LP, crossing and angle penalties, and cost composition."""

from spxlayout.penalties.cost import (
    PairState,
    PenaltyMode,
    penalty_gradient,
    penalty_sum,
    refresh_pair_states,
    surrogate_penalty,
    total_cost,
    upward_hinge,
    upward_hinge_gradient,
)
from spxlayout.penalties.separator import (
    Separator,
    SeparatorResult,
    grid_separator,
    separation_value,
    solve_separator,
    solve_separator_lp,
)
from spxlayout.penalties.simplex import SimplexSolution, simplex

__all__ = [
    "PairState",
    "PenaltyMode",
    "Separator",
    "SeparatorResult",
    "SimplexSolution",
    "grid_separator",
    "penalty_gradient",
    "penalty_sum",
    "refresh_pair_states",
    "separation_value",
    "simplex",
    "solve_separator",
    "solve_separator_lp",
    "surrogate_penalty",
    "total_cost",
    "upward_hinge",
    "upward_hinge_gradient",
]
