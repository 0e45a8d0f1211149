"""Gradient descent, initial layouts, the SPX loop and multi-start sweeps."""

from spxlayout.optimizer.descent import (
    GDParams,
    GDState,
    GDVariant,
    default_learning_rate,
    gd_step,
)
from spxlayout.optimizer.init import (
    InitMethod,
    fruchterman_reingold,
    initial_layout,
    random_layout,
)
from spxlayout.optimizer.spx import (
    RunConfig,
    RunResult,
    Selection,
    spx_optimize,
    upward_repair,
)
from spxlayout.optimizer.sweep import (
    SweepCell,
    SweepGrid,
    SweepResult,
    cell_config,
    select_best,
    sweep,
)

__all__ = [
    "GDParams",
    "GDState",
    "GDVariant",
    "InitMethod",
    "RunConfig",
    "RunResult",
    "Selection",
    "SweepCell",
    "SweepGrid",
    "SweepResult",
    "cell_config",
    "default_learning_rate",
    "fruchterman_reingold",
    "gd_step",
    "initial_layout",
    "random_layout",
    "select_best",
    "spx_optimize",
    "sweep",
    "upward_repair",
]
