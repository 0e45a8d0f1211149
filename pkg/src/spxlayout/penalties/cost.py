"""Crossing and crossing-angle penalties, their gradients, and the total cost.

Per outer iteration the optimizer calls `refresh_pair_states` once, which
fixes (u, gamma, rho, theta) for every independent edge pair. Between
refreshes the penalty is the surrogate

    sum_i (rho_i / 2) * f_i(C) * hinge_i(C; u_i, gamma_i)

with f_i = 1 (crossing mode) or cos^2 of the current crossing angle (angle
mode; frozen at its refresh value when `frozen_theta` is set).
"""

import logging
import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from spxlayout.errors import SPXError
from spxlayout.geometry import crossing_cosines_many, segments_cross_many
from spxlayout.graph.core import DistanceMatrix, Graph
from spxlayout.penalties.separator import (
    FloatArray,
    Separator,
    hinge_value,
    separating_axes,
    solve_pair,
)
from spxlayout.penalties.simplex import DEFAULT_PIVOT_BUDGET
from spxlayout.stress import Layout, stress_value

logger = logging.getLogger(__name__)


class PenaltyMode(StrEnum):
    """Which pair penalty is minimized."""

    CROSSING_ONLY = "crossing"
    CROSSING_ANGLE = "angle"


@dataclass(frozen=True)
class PairState:
    """Frozen per-pair quantities for one outer iteration.

    `penalty` is rho times the optimal hinge value, so it is zero for every
    pair that does not cross. `theta` is set only for crossing pairs.
    """

    pair: tuple[int, int]
    separator: Separator
    rho: int
    theta: float | None
    penalty: float
    used_fallback: bool = False
    skipped: bool = False


def _pair_endpoints(
    layout: Layout, g: Graph, pairs: list[tuple[int, int]]
) -> tuple[FloatArray, FloatArray]:
    index = np.asarray(pairs, dtype=np.intp).reshape(-1, 2)
    ends = g.endpoints
    a = layout[ends[index[:, 0]]]  # k x 2 x 2
    b = layout[ends[index[:, 1]]]
    return a, b


def refresh_pair_states(
    layout: Layout,
    g: Graph,
    pairs: list[tuple[int, int]],
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> list[PairState]:
    """Recompute rho, theta and the optimal separator for every pair.

    Crossing tests and closed-form separators run vectorized over all pairs;
    only pairs without a strict separating axis go to the LP. A pair whose
    separator cannot be computed is skipped with rho = 0.

    Returns:
        One state per input pair, in input order.
    """
    if not pairs:
        return []

    a, b = _pair_endpoints(layout, g, pairs)
    dir_a = a[:, 1] - a[:, 0]
    dir_b = b[:, 1] - b[:, 0]
    crossing = segments_cross_many(a[:, 0], a[:, 1], b[:, 0], b[:, 1])
    cosines = crossing_cosines_many(dir_a, dir_b)
    degenerate = (np.linalg.norm(dir_a, axis=1) == 0.0) | (np.linalg.norm(dir_b, axis=1) == 0.0)
    u, gamma, found = separating_axes(a, b)

    states: list[PairState] = []
    for k, pair in enumerate(pairs):
        if degenerate[k]:
            logger.warning("pair %s skipped: zero-length edge", pair)
            states.append(PairState(pair, Separator.zero(), 0, None, 0.0, skipped=True))
            continue

        if found[k]:
            separator = Separator(u=(float(u[k, 0]), float(u[k, 1])), gamma=float(gamma[k]))
            value, fallback = 0.0, False
        else:
            try:
                result = solve_pair(a[k], b[k], pivot_budget=pivot_budget)
            except SPXError as e:
                logger.warning("pair %s skipped: %s", pair, e)
                states.append(PairState(pair, Separator.zero(), 0, None, 0.0, skipped=True))
                continue
            separator, value, fallback = result.separator, result.penalty, result.used_fallback

        rho = int(crossing[k])
        theta = math.acos(float(cosines[k])) if rho else None
        states.append(
            PairState(
                pair=pair,
                separator=separator,
                rho=rho,
                theta=theta,
                penalty=rho * value,
                used_fallback=fallback,
            )
        )
    return states


def _angle_factor(state: PairState, mode: PenaltyMode) -> float:
    if mode is PenaltyMode.CROSSING_ONLY or state.theta is None:
        return 1.0
    return math.cos(state.theta) ** 2


def penalty_sum(states: list[PairState], mode: PenaltyMode) -> float:
    """Penalty at the refresh layout: sum of (rho / 2) [cos^2 theta] penalty."""
    total = 0.0
    for state in states:
        if state.rho:
            total += 0.5 * state.rho * _angle_factor(state, mode) * state.penalty
    return total


def _squared_cosine(da: FloatArray, db: FloatArray) -> float:
    norms = float(da @ da) * float(db @ db)
    if norms == 0.0:
        return 0.0
    return float(da @ db) ** 2 / norms


def surrogate_penalty(
    layout: Layout,
    g: Graph,
    states: list[PairState],
    mode: PenaltyMode,
    frozen_theta: bool = False,
) -> float:
    """Penalty at an arbitrary layout with each pair's (u, gamma, rho) held fixed.

    Equals `penalty_sum` at the layout the states were refreshed on.
    """
    ends = g.endpoints
    total = 0.0
    for state in states:
        if not state.rho:
            continue
        a = layout[ends[state.pair[0]]]
        b = layout[ends[state.pair[1]]]
        hinge = hinge_value(a, b, np.asarray(state.separator.u), state.separator.gamma)
        if mode is PenaltyMode.CROSSING_ONLY:
            factor = 1.0
        elif frozen_theta:
            factor = _angle_factor(state, mode)
        else:
            factor = _squared_cosine(a[1] - a[0], b[1] - b[0])
        total += 0.5 * state.rho * factor * hinge
    return total


def penalty_gradient(
    layout: Layout,
    g: Graph,
    states: list[PairState],
    mode: PenaltyMode,
    frozen_theta: bool = False,
) -> Layout:
    """Exact subgradient of `surrogate_penalty` with respect to the layout.

    A hinge term contributes only while strictly positive. In angle mode
    the cos^2 factor is differentiated through both edge directions unless
    `frozen_theta` is set; at perpendicular crossings it and its gradient
    vanish.
    """
    grad = np.zeros_like(layout)
    ends = g.endpoints
    for state in states:
        if not state.rho:
            continue
        ia, ib = ends[state.pair[0]], ends[state.pair[1]]
        a, b = layout[ia], layout[ib]
        u = np.asarray(state.separator.u)
        gamma = state.separator.gamma

        active_a = -(a @ u) - gamma > 0.0
        active_b = b @ u + 1.0 + gamma > 0.0
        hinge_a = np.where(active_a[:, np.newaxis], -u, 0.0)  # 2 x 2, per endpoint
        hinge_b = np.where(active_b[:, np.newaxis], u, 0.0)
        weight = 0.5 * state.rho

        if mode is PenaltyMode.CROSSING_ONLY:
            grad[ia] += weight * hinge_a
            grad[ib] += weight * hinge_b
            continue

        if frozen_theta:
            factor = _angle_factor(state, mode)
            grad[ia] += weight * factor * hinge_a
            grad[ib] += weight * factor * hinge_b
            continue

        da, db = a[1] - a[0], b[1] - b[0]
        na2, nb2 = float(da @ da), float(db @ db)
        dot = float(da @ db)
        factor = dot**2 / (na2 * nb2)
        hinge = hinge_value(a, b, u, gamma)
        scale = 2.0 * dot / (na2 * nb2)
        d_factor_da = scale * (db - (dot / na2) * da)
        d_factor_db = scale * (da - (dot / nb2) * db)

        grad[ia] += weight * factor * hinge_a
        grad[ib] += weight * factor * hinge_b
        # d(da)/d(a_end) = +I, d(da)/d(a_start) = -I
        grad[ia[1]] += weight * hinge * d_factor_da
        grad[ia[0]] -= weight * hinge * d_factor_da
        grad[ib[1]] += weight * hinge * d_factor_db
        grad[ib[0]] -= weight * hinge * d_factor_db
    return grad


def total_cost(
    layout: Layout,
    dm: DistanceMatrix,
    states: list[PairState],
    k: float,
    mode: PenaltyMode,
) -> float:
    """stress + K * penalty_sum."""
    if k <= 0.0:
        raise ValueError(f"K must be positive, got {k}")
    return stress_value(layout, dm) + k * penalty_sum(states, mode)


def upward_hinge(layout: Layout, g: Graph, eps: float, mu: float) -> float:
    """mu * sum over directed edges u->v of max(0, eps - (y_v - y_u))."""
    total = 0.0
    for edge in g.directed_edges:
        total += max(0.0, eps - (layout[edge.target, 1] - layout[edge.source, 1]))
    return mu * total


def upward_hinge_gradient(layout: Layout, g: Graph, eps: float, mu: float) -> Layout:
    grad = np.zeros_like(layout)
    for edge in g.directed_edges:
        if eps - (layout[edge.target, 1] - layout[edge.source, 1]) > 0.0:
            grad[edge.target, 1] -= mu
            grad[edge.source, 1] += mu
    return grad
