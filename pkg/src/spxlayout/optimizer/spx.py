"""The stress-plus-penalty optimization loop.

Each outer iteration first refreshes the per-pair separators (phase 1), then
takes `inner_steps` gradient steps on stress + K * penalty with every
separator frozen (phase 2). Upward runs add a hinge on directed edges and
project every iterate with an exact topological repair.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from spxlayout.errors import NonFiniteUpdate, SPXError
from spxlayout.graph.core import (
    DistanceMatrix,
    Graph,
    derive_seed,
    graph_diameter,
    independent_edge_pairs,
    topological_order,
)
from spxlayout.logging.trace import TraceEntry
from spxlayout.metrics import CROSSING_FREE_ANGLE, MetricsReport, report
from spxlayout.optimizer.descent import GDParams, GDState, GDVariant, default_learning_rate, gd_step
from spxlayout.optimizer.init import FR_ITERATIONS, FR_MIN_DISTANCE, InitMethod, initial_layout
from spxlayout.penalties.cost import (
    PairState,
    PenaltyMode,
    penalty_gradient,
    penalty_sum,
    refresh_pair_states,
    upward_hinge,
    upward_hinge_gradient,
)
from spxlayout.penalties.simplex import DEFAULT_PIVOT_BUDGET
from spxlayout.stress import (
    DEFAULT_MAX_ITERS,
    DEFAULT_POLISH_ITERS,
    DEFAULT_TOL,
    Layout,
    as_layout,
    separate_coincident,
    stress_gradient,
    stress_value,
)

logger = logging.getLogger(__name__)


class Selection(StrEnum):
    """How a sweep picks its best run."""

    COST = "cost"
    ANGLE = "angle"
    CROSSINGS = "crossings"


class RunConfig(BaseModel):
    """Parameters of a single optimization run.

    `gd` carries the variant hyperparameters; its learning rate is replaced by
    `learning_rate`, or by the variant default when that is None.
    """

    model_config = ConfigDict(frozen=True)

    k: float = Field(default=1.0, gt=0.0)
    variant: GDVariant = GDVariant.VANILLA
    mode: PenaltyMode = PenaltyMode.CROSSING_ONLY
    init_method: InitMethod = InitMethod.STRESS
    seed: int = Field(default=0, ge=0)
    outer_iters: int = Field(default=100, ge=0)
    inner_steps: int = Field(default=1, ge=1)
    upward: bool = False
    upward_eps: float = Field(default=0.01, gt=0.0)
    upward_mu: float = Field(default=10.0, gt=0.0)
    frozen_theta: bool = False
    keep_best: bool = True
    divergence_factor: float = Field(default=1e3, gt=0.0)
    selection: Selection = Selection.COST
    learning_rate: float | None = Field(default=None, gt=0.0)
    gd: GDParams = Field(default_factory=GDParams)
    pivot_budget: int = Field(default=DEFAULT_PIVOT_BUDGET, ge=1)
    majorization_iters: int = Field(default=DEFAULT_MAX_ITERS, ge=1)
    majorization_tol: float = Field(default=DEFAULT_TOL, gt=0.0)
    polish_iters: int = Field(default=DEFAULT_POLISH_ITERS, ge=0)
    fr_iterations: int = Field(default=FR_ITERATIONS, ge=1)
    fr_min_distance: float = Field(default=FR_MIN_DISTANCE, gt=0.0)


@dataclass
class RunResult:
    """Outcome of `spx_optimize`.

    `selected_iteration` is the trace index of the returned layout, or the
    trace length when it is the layout after the last step. Invalid runs
    keep the trace and the last finite layout reached before the failure;
    a run that failed before its first iteration has an empty layout.
    """

    layout: Layout
    final_cost: float
    config: RunConfig
    trace: list[TraceEntry] = field(default_factory=list)
    valid: bool = True
    error: str | None = None
    report: MetricsReport | None = None
    lp_fallbacks: int = 0
    jitters: int = 0
    skipped_pairs: int = 0
    selected_iteration: int = 0


def upward_repair(layout: Layout, g: Graph, eps: float) -> Layout:
    """Raise y coordinates in topological order until y_v - y_u >= eps on every directed edge.

    Vertices whose in-edges already satisfy the margin keep their position,
    so the repair is idempotent. x coordinates never change.

    Raises:
        NotADag: If the directed edges contain a cycle.
    """
    order = topological_order(g)
    incoming: list[list[int]] = [[] for _ in range(g.n)]
    for edge in g.directed_edges:
        incoming[edge.target].append(edge.source)

    repaired = np.array(layout, dtype=np.float64)
    for v in order:
        sources = incoming[v]
        if not sources:
            continue
        if all(repaired[v, 1] - repaired[u, 1] >= eps for u in sources):
            continue
        y = max(repaired[v, 1], max(repaired[u, 1] + eps for u in sources))
        # y_u + eps - y_u can round below eps; step up to the next float until it holds.
        while any(y - repaired[u, 1] < eps for u in sources):
            y = float(np.nextafter(y, np.inf))
        repaired[v, 1] = y
    return repaired


def _cost(
    layout: Layout, g: Graph, dm: DistanceMatrix, states: list[PairState], cfg: RunConfig
) -> float:
    cost = stress_value(layout, dm) + cfg.k * penalty_sum(states, cfg.mode)
    if cfg.upward:
        cost += upward_hinge(layout, g, cfg.upward_eps, cfg.upward_mu)
    return cost


def _cost_gradient(
    layout: Layout,
    g: Graph,
    dm: DistanceMatrix,
    states: list[PairState],
    cfg: RunConfig,
) -> Layout:
    grad = stress_gradient(layout, dm)
    grad += cfg.k * penalty_gradient(layout, g, states, cfg.mode, frozen_theta=cfg.frozen_theta)
    if cfg.upward:
        grad += upward_hinge_gradient(layout, g, cfg.upward_eps, cfg.upward_mu)
    return grad


def _trace_entry(
    iteration: int,
    layout: Layout,
    g: Graph,
    dm: DistanceMatrix,
    states: list[PairState],
    cfg: RunConfig,
) -> TraceEntry:
    angles = [s.theta for s in states if s.rho and s.theta is not None]
    return TraceEntry(
        iter=iteration,
        crossings=sum(s.rho for s in states),
        stress=stress_value(layout, dm),
        min_angle=math.degrees(min(angles)) if angles else CROSSING_FREE_ANGLE,
        cost=_cost(layout, g, dm, states, cfg),
    )


def _iterate_key(entry: TraceEntry, mode: PenaltyMode) -> tuple[float, float]:
    """Rank of a layout within one run: fewer crossings (or a wider angle) first, then cost."""
    if mode is PenaltyMode.CROSSING_ANGLE:
        return (-entry.min_angle, entry.cost)
    return (float(entry.crossings), entry.cost)


def _check_bounded(layout: Layout, bound: float) -> None:
    radius = float(np.linalg.norm(layout - layout.mean(axis=0), axis=1).max())
    if radius > bound:
        raise NonFiniteUpdate(f"layout diverged: radius {radius:.3g} exceeds {bound:.3g}")


def spx_optimize(
    g: Graph,
    dm: DistanceMatrix,
    cfg: RunConfig,
    init: Layout | None = None,
    on_iteration: Callable[[TraceEntry], None] | None = None,
) -> RunResult:
    """Run the two-phase loop for `cfg.outer_iters` iterations.

    In upward mode every layout the loop visits, the start included, is
    passed through `upward_repair`, so crossings are measured and penalized
    on the geometry that is finally returned. With `cfg.keep_best` the
    result is the best layout reached after at least one step (see
    `_iterate_key`) rather than the last one.

    Args:
        g: Connected graph.
        dm: Its distance matrix.
        cfg: Run parameters.
        init: Starting layout; built from `cfg.init_method` when omitted.
        on_iteration: Called with each trace entry as it is recorded.

    Returns:
        RunResult; errors during the run are caught and reported through
        `valid` and `error`.

    Raises:
        NotADag: If `cfg.upward` is set and the directed edges contain a cycle.
    """
    if cfg.upward:
        topological_order(g)

    try:
        if init is None:
            layout = initial_layout(
                g,
                cfg.init_method,
                derive_seed(cfg.seed, "init"),
                dm=dm,
                majorization_iters=cfg.majorization_iters,
                majorization_tol=cfg.majorization_tol,
                polish_iters=cfg.polish_iters,
                fr_iterations=cfg.fr_iterations,
                fr_min_distance=cfg.fr_min_distance,
            )
        else:
            layout = as_layout(init, g.n)
    except SPXError as e:
        logger.warning("run %s failed during initialization: %s", cfg.seed, e)
        return RunResult(
            layout=np.empty((0, 2)),
            final_cost=math.inf,
            config=cfg,
            valid=False,
            error=str(e),
        )

    if cfg.upward:
        layout = upward_repair(layout, g, cfg.upward_eps)

    pairs = independent_edge_pairs(g)
    diameter = graph_diameter(dm)
    lr = cfg.learning_rate or default_learning_rate(cfg.variant, diameter)
    params = cfg.gd.model_copy(update={"learning_rate": lr})
    bound = cfg.divergence_factor * max(diameter, float(np.sqrt(g.n)), 1.0)
    state = GDState.zeros(g.n)
    result = RunResult(layout=layout, final_cost=math.inf, config=cfg)
    best: tuple[tuple[float, float], int, Layout] | None = None

    try:
        for iteration in range(cfg.outer_iters):
            layout, jitters = separate_coincident(
                layout, derive_seed(cfg.seed, "jitter", iteration, 0)
            )
            result.jitters += jitters
            states = refresh_pair_states(layout, g, pairs, pivot_budget=cfg.pivot_budget)
            result.lp_fallbacks += sum(1 for s in states if s.used_fallback)
            result.skipped_pairs += sum(1 for s in states if s.skipped)

            entry = _trace_entry(iteration, layout, g, dm, states, cfg)
            result.trace.append(entry)
            if on_iteration is not None:
                on_iteration(entry)
            key = _iterate_key(entry, cfg.mode)
            if iteration and (best is None or key < best[0]):
                best = (key, iteration, layout)

            for step in range(cfg.inner_steps):
                if step:
                    layout, jitters = separate_coincident(
                        layout, derive_seed(cfg.seed, "jitter", iteration, step)
                    )
                    result.jitters += jitters
                grad = _cost_gradient(layout, g, dm, states, cfg)
                layout, state = gd_step(layout, grad, state, cfg.variant, params)
                if cfg.upward:
                    layout = upward_repair(layout, g, cfg.upward_eps)
                _check_bounded(layout, bound)
                result.layout = layout
    except SPXError as e:
        logger.warning("run %s aborted after %d iterations: %s", cfg.seed, len(result.trace), e)
        result.valid = False
        result.error = str(e)
        layout = result.layout

    result.selected_iteration = len(result.trace)
    try:
        final_states = refresh_pair_states(layout, g, pairs, pivot_budget=cfg.pivot_budget)
        final_entry = _trace_entry(len(result.trace), layout, g, dm, final_states, cfg)
        final_key = _iterate_key(final_entry, cfg.mode)
        if cfg.keep_best and result.valid and best is not None and best[0] < final_key:
            _, result.selected_iteration, layout = best
            final_states = refresh_pair_states(layout, g, pairs, pivot_budget=cfg.pivot_budget)
        result.layout = layout
        result.final_cost = _cost(layout, g, dm, final_states, cfg)
        result.report = report(layout, g, dm)
    except SPXError as e:
        result.layout = layout
        result.valid = False
        result.error = result.error or str(e)
    return result
