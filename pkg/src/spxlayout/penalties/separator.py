"""Per-pair separating-line certificates (u, gamma) and their hinge penalty.

Two segments with endpoint matrices A and B (rows are endpoints) are
strictly separated when some (u, gamma) satisfies

    A u + gamma e >= 0,    B u + (1 + gamma) e <= 0.

The penalty is the smallest total hinge violation

    min_{u, gamma} ||(-A u - gamma e)_+||_1 + ||(B u + (1 + gamma) e)_+||_1,

which is zero exactly when a separating line exists.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from spxlayout.errors import DegenerateSegment, LPFailure
from spxlayout.geometry import Segment
from spxlayout.penalties.simplex import DEFAULT_PIVOT_BUDGET, simplex

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# Relative gap below which a separating axis is treated as touching.
SEPARATION_EPS = 1e-12

GRID_LIMIT = 3.0
GRID_STEP = 0.05


@dataclass(frozen=True)
class Separator:
    """Normal direction `u` of the separating line and offset `gamma`."""

    u: tuple[float, float]
    gamma: float

    @classmethod
    def zero(cls) -> "Separator":
        """The always-feasible certificate u = 0, gamma = -1/2 (penalty 2)."""
        return cls(u=(0.0, 0.0), gamma=-0.5)


class SeparatorResult(NamedTuple):
    separator: Separator
    penalty: float
    used_fallback: bool = False


def endpoint_matrix(segment: Segment) -> FloatArray:
    """2 x 2 matrix whose rows are the segment's endpoints."""
    return np.array([[segment.p.x, segment.p.y], [segment.q.x, segment.q.y]])


def hinge_value(a: FloatArray, b: FloatArray, u: FloatArray, gamma: float) -> float:
    """Total hinge violation of (u, gamma) for endpoint matrices a and b."""
    side_a = np.maximum(0.0, -(a @ u) - gamma)
    side_b = np.maximum(0.0, b @ u + 1.0 + gamma)
    return float(side_a.sum() + side_b.sum())


def _check_segments(a: Segment, b: Segment) -> None:
    if a.length == 0.0 or b.length == 0.0:
        raise DegenerateSegment("separator requested for a zero-length segment")


def separating_axes(a: FloatArray, b: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Closed-form strict separators for k pairs at once.

    Two disjoint segments are separated along one of four axes: the normals
    of either segment or either segment's direction. For each pair the axis
    with the widest normalized gap is scaled so the gap is exactly 1.

    Args:
        a: k x 2 x 2 endpoints of the first segments.
        b: k x 2 x 2 endpoints of the second segments.

    Returns:
        (u, gamma, found): k x 2 normals, k offsets, and a mask of the pairs
        for which a strict separator exists.
    """
    dir_a = a[:, 1] - a[:, 0]
    dir_b = b[:, 1] - b[:, 0]
    perp_a = np.stack([-dir_a[:, 1], dir_a[:, 0]], axis=1)
    perp_b = np.stack([-dir_b[:, 1], dir_b[:, 0]], axis=1)
    axes = np.stack([perp_a, perp_b, dir_a, dir_b], axis=1)  # k x 4 x 2

    proj_a = np.einsum("kpd,kad->kap", a, axes)  # k x 4 x 2
    proj_b = np.einsum("kpd,kad->kap", b, axes)
    # A on the positive side of the axis, or on the negative side.
    gap_pos = proj_a.min(axis=2) - proj_b.max(axis=2)
    gap_neg = proj_b.min(axis=2) - proj_a.max(axis=2)
    gaps = np.concatenate([gap_pos, gap_neg], axis=1)  # k x 8
    signed_axes = np.concatenate([axes, -axes], axis=1)

    norms = np.linalg.norm(signed_axes, axis=2)
    scale = np.maximum(
        np.abs(a).reshape(len(a), -1).max(axis=1, initial=0.0),
        np.abs(b).reshape(len(b), -1).max(axis=1, initial=0.0),
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        normalized = np.where(norms > 0.0, gaps / norms, -np.inf)
    best = np.argmax(normalized, axis=1)
    rows = np.arange(len(a))
    best_gap = gaps[rows, best]
    found = normalized[rows, best] > SEPARATION_EPS * np.maximum(1.0, scale)

    u = np.zeros((len(a), 2))
    gamma = np.zeros(len(a))
    if np.any(found):
        chosen = signed_axes[rows[found], best[found]]
        u[found] = chosen / best_gap[found][:, np.newaxis]
        gamma[found] = -np.einsum("kpd,kd->kp", a[found], u[found]).min(axis=1)
    return u, gamma, found


def _build_program(a: FloatArray, b: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
    # Columns: ux+ ux- uy+ uy- g+ g- | s1 s2 t1 t2 | e1 e2 f1 f2 (surplus)
    matrix = np.zeros((4, 14))
    rhs = np.array([0.0, 0.0, 1.0, 1.0])
    for k in range(2):
        ax, ay = a[k]
        matrix[k, :6] = [ax, -ax, ay, -ay, 1.0, -1.0]
        matrix[k, 6 + k] = 1.0
        matrix[k, 10 + k] = -1.0
        bx, by = b[k]
        matrix[2 + k, :6] = [-bx, bx, -by, by, -1.0, 1.0]
        matrix[2 + k, 8 + k] = 1.0
        matrix[2 + k, 12 + k] = -1.0
    cost = np.zeros(14)
    cost[6:10] = 1.0
    return cost, matrix, rhs


def solve_separator_lp(
    a: FloatArray,
    b: FloatArray,
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> SeparatorResult:
    """Optimal (u, gamma) by simplex over the standard-form program.

    The decision variables are (ux, uy, gamma), split into nonnegative parts,
    plus the four hinge slacks; the slacks form the starting basis (u = 0,
    gamma = 0, objective 2).

    Raises:
        LPFailure: If the simplex exhausts its pivot budget.
    """
    cost, matrix, rhs = _build_program(a, b)
    solution = simplex(cost, matrix, rhs, basis=[6, 7, 8, 9], pivot_budget=pivot_budget)
    x = solution.x
    u = np.array([x[0] - x[1], x[2] - x[3]])
    gamma = float(x[4] - x[5])
    penalty = hinge_value(a, b, u, gamma)
    return SeparatorResult(Separator(u=(float(u[0]), float(u[1])), gamma=gamma), penalty)


def grid_separator(a: FloatArray, b: FloatArray) -> SeparatorResult:
    """Best (u, gamma) over a grid of u in [-3, 3]^2.

    For fixed u the penalty is convex piecewise linear in gamma, so only its
    four breakpoints need checking.
    """
    ticks = np.arange(-GRID_LIMIT, GRID_LIMIT + GRID_STEP / 2, GRID_STEP)
    ux, uy = np.meshgrid(ticks, ticks, indexing="ij")
    grid = np.stack([ux.ravel(), uy.ravel()], axis=1)  # N x 2
    au = grid @ a.T  # N x 2
    bu = grid @ b.T
    breakpoints = np.concatenate([-au, -1.0 - bu], axis=1)  # N x 4

    side_a = np.maximum(0.0, -au[:, :, np.newaxis] - breakpoints[:, np.newaxis, :]).sum(axis=1)
    side_b = np.maximum(0.0, bu[:, :, np.newaxis] + 1.0 + breakpoints[:, np.newaxis, :]).sum(
        axis=1
    )
    values = side_a + side_b  # N x 4
    flat = int(np.argmin(values))
    row, col = divmod(flat, values.shape[1])
    u = grid[row]
    gamma = float(breakpoints[row, col])
    return SeparatorResult(
        Separator(u=(float(u[0]), float(u[1])), gamma=gamma),
        float(values[row, col]),
        used_fallback=True,
    )


def solve_pair(
    a: FloatArray,
    b: FloatArray,
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> SeparatorResult:
    """Separator for one pair of 2 x 2 endpoint matrices (no validation)."""
    u, gamma, found = separating_axes(a[np.newaxis], b[np.newaxis])
    if found[0]:
        separator = Separator(u=(float(u[0, 0]), float(u[0, 1])), gamma=float(gamma[0]))
        return SeparatorResult(separator, 0.0)
    try:
        return solve_separator_lp(a, b, pivot_budget=pivot_budget)
    except LPFailure as e:
        logger.warning("separator LP failed (%s); using grid fallback", e)
        return grid_separator(a, b)


def solve_separator(
    a: Segment,
    b: Segment,
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> SeparatorResult:
    """Minimum-penalty separating line for two segments.

    Disjoint segments get an exact zero-penalty certificate in closed form;
    touching or crossing segments go through the simplex, with a grid search
    as flagged fallback when the pivot budget runs out.

    Raises:
        DegenerateSegment: If either segment has zero length.
    """
    _check_segments(a, b)
    return solve_pair(endpoint_matrix(a), endpoint_matrix(b), pivot_budget=pivot_budget)


def separation_value(a: Segment, b: Segment) -> float:
    """Optimal penalty in closed form, from the dual program.

    The dual maximizes lambda such that lambda * alpha and lambda * beta stay
    below 1, where alpha and beta are the barycentric coordinates of a common
    point of the two segments. Disjoint segments give 0; a crossing gives
    min(1 / max(alpha), 1 / max(beta)), which lies in [1, 2].
    """
    _check_segments(a, b)
    pa, pb = endpoint_matrix(a), endpoint_matrix(b)
    da, db = pa[1] - pa[0], pb[1] - pb[0]
    offset = pb[0] - pa[0]
    denom = da[0] * db[1] - da[1] * db[0]

    def value_at(s: float, t: float) -> float:
        return min(1.0 / max(1.0 - s, s), 1.0 / max(1.0 - t, t))

    if abs(denom) > 1e-12 * np.linalg.norm(da) * np.linalg.norm(db):
        s = (offset[0] * db[1] - offset[1] * db[0]) / denom
        t = (offset[0] * da[1] - offset[1] * da[0]) / denom
        if -1e-12 <= s <= 1.0 + 1e-12 and -1e-12 <= t <= 1.0 + 1e-12:
            return value_at(min(max(s, 0.0), 1.0), min(max(t, 0.0), 1.0))
        return 0.0

    # Parallel: a common point exists only when the segments are collinear and overlap.
    cross_offset = offset[0] * da[1] - offset[1] * da[0]
    if abs(cross_offset) > 1e-12 * max(1.0, float(np.linalg.norm(da) * np.linalg.norm(offset))):
        return 0.0
    length_sq = float(da @ da)
    t0 = float((pb[0] - pa[0]) @ da) / length_sq
    t1 = float((pb[1] - pa[0]) @ da) / length_sq
    low, high = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
    if low > high:
        return 0.0
    best = 0.0
    for s in np.linspace(low, high, 2001):
        t = (s - t0) / (t1 - t0)
        best = max(best, value_at(float(s), float(t)))
    return best
