"""Stress evaluation, its gradient and stress majorization.

Stress here is the weighted-residual form

    stress(C) = sum_{i<j} w_ij (||C_i - C_j|| - d_ij)^2,   w_ij = d_ij^-2,

i.e. the Kamada-Kawai / Gansner formulation.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.optimize import minimize

from spxlayout.errors import CoincidentVertices, SingularSystem
from spxlayout.graph.core import DistanceMatrix, Graph

logger = logging.getLogger(__name__)

Layout = npt.NDArray[np.float64]

JITTER_MAGNITUDE = 1e-9
DEFAULT_MAX_ITERS = 300
DEFAULT_TOL = 1e-6
DEFAULT_POLISH_ITERS = 200


def as_layout(coords: "npt.ArrayLike", n: int | None = None) -> Layout:
    """Copy `coords` into an n x 2 float array, checking shape and finiteness."""
    layout = np.array(coords, dtype=np.float64)
    if layout.ndim != 2 or layout.shape[1] != 2:
        raise ValueError(f"layout must be n x 2, got shape {layout.shape}")
    if n is not None and layout.shape[0] != n:
        raise ValueError(f"layout has {layout.shape[0]} rows, graph has {n} vertices")
    if not np.all(np.isfinite(layout)):
        raise ValueError("layout contains non-finite coordinates")
    return layout


def pairwise_distances(layout: Layout) -> npt.NDArray[np.float64]:
    delta = layout[:, np.newaxis, :] - layout[np.newaxis, :, :]
    return np.asarray(np.linalg.norm(delta, axis=-1), dtype=np.float64)


def stress_value(layout: Layout, dm: DistanceMatrix) -> float:
    """Weighted stress summed over unordered pairs."""
    dist = pairwise_distances(layout)
    upper = np.triu_indices(dm.n, k=1)
    residual = dist[upper] - dm.d[upper]
    return float(np.sum(dm.w[upper] * residual**2))


def coincident_pairs(layout: Layout) -> list[tuple[int, int]]:
    """Vertex pairs (i < j) sharing exactly the same position."""
    dist = pairwise_distances(layout)
    i_idx, j_idx = np.nonzero(np.triu(dist == 0.0, k=1))
    return [(int(i), int(j)) for i, j in zip(i_idx, j_idx, strict=True)]


def separate_coincident(layout: Layout, seed: int) -> tuple[Layout, int]:
    """Nudge coincident vertices apart with seeded jitter.

    The second vertex of each coincident pair moves in a random direction by
    1e-9 times the larger of 1 and its largest absolute coordinate, so the
    nudge survives rounding far from the origin.

    Returns:
        The (possibly) adjusted copy and the number of jitters applied.
    """
    pairs = coincident_pairs(layout)
    if not pairs:
        return layout, 0

    rng = np.random.default_rng(seed)
    adjusted = layout.copy()
    jitters = 0
    # Re-check after each nudge: one move can resolve several pairs.
    for i, j in pairs:
        if np.array_equal(adjusted[i], adjusted[j]):
            angle = rng.uniform(0.0, 2.0 * np.pi)
            scale = JITTER_MAGNITUDE * max(1.0, float(np.abs(adjusted[j]).max()))
            adjusted[j] += scale * np.array([np.cos(angle), np.sin(angle)])
            while np.array_equal(adjusted[i], adjusted[j]):
                adjusted[j, 0] = np.nextafter(adjusted[j, 0], np.inf)
            jitters += 1
    logger.debug("jittered %d coincident vertex pairs", jitters)
    return adjusted, jitters


def stress_gradient(layout: Layout, dm: DistanceMatrix) -> Layout:
    """Analytic gradient of `stress_value` with respect to every coordinate.

    Raises:
        CoincidentVertices: If two vertices share a position (direction undefined).
    """
    pairs = coincident_pairs(layout)
    if pairs:
        raise CoincidentVertices(pairs)

    delta = layout[:, np.newaxis, :] - layout[np.newaxis, :, :]
    dist = np.linalg.norm(delta, axis=-1)
    np.fill_diagonal(dist, 1.0)
    coefficient = 2.0 * dm.w * (dist - dm.d) / dist
    np.fill_diagonal(coefficient, 0.0)
    return np.asarray(np.einsum("ij,ijk->ik", coefficient, delta), dtype=np.float64)


@dataclass
class MajorizationResult:
    """Outcome of a stress majorization run."""

    layout: Layout
    history: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    polished: bool = False


def weighted_laplacian(dm: DistanceMatrix) -> npt.NDArray[np.float64]:
    laplacian = -dm.w.copy()
    np.fill_diagonal(laplacian, 0.0)
    np.fill_diagonal(laplacian, -laplacian.sum(axis=1))
    return laplacian


def polish(layout: Layout, dm: DistanceMatrix, max_iters: int = DEFAULT_POLISH_ITERS) -> Layout:
    """Refine a majorized layout with L-BFGS on the stress function.

    Majorization converges slowly near degenerate optima such as a path
    folding onto a line. The input is returned unchanged if the
    refinement does not lower stress.
    """
    n = layout.shape[0]

    def fun(x: npt.NDArray[np.float64]) -> tuple[float, npt.NDArray[np.float64]]:
        coords = x.reshape(n, 2)
        return stress_value(coords, dm), stress_gradient(coords, dm).ravel()

    try:
        solution = minimize(
            fun,
            layout.ravel(),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": max_iters, "ftol": 1e-15, "gtol": 1e-12},
        )
    except CoincidentVertices:
        logger.debug("polish skipped: line search reached coincident vertices")
        return layout

    refined = np.asarray(solution.x, dtype=np.float64).reshape(n, 2)
    if not np.all(np.isfinite(refined)) or stress_value(refined, dm) >= stress_value(layout, dm):
        return layout
    return refined - refined.mean(axis=0)


def majorize(
    g: Graph,
    dm: DistanceMatrix,
    init: Layout,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    polish_iters: int = DEFAULT_POLISH_ITERS,
) -> MajorizationResult:
    """SMACOF-style stress majorization.

    Each iteration solves L^w X = L^Z(Z) Z for both coordinates. The
    translation null space of L^w is removed by solving with L^w + 11^T/n,
    which yields the centered solution directly. Once the iterations stop,
    `polish` refines the result; its stress is appended to the history
    only when it is lower, so the history never increases.

    Args:
        g: Connected graph.
        dm: Its distance matrix.
        init: Starting layout.
        max_iters: Iteration cap.
        tol: Stop once the relative stress decrease falls below this.
        polish_iters: L-BFGS iteration cap for the final refinement; 0 disables it.

    Returns:
        MajorizationResult with the per-iteration stress history
        (history[0] is the stress of the centered start).

    Raises:
        SingularSystem: If the Laplacian factorization fails.
    """
    n = g.n
    layout = as_layout(init, n)
    layout = layout - layout.mean(axis=0)
    result = MajorizationResult(layout=layout, history=[stress_value(layout, dm)])
    if n == 1:
        result.converged = True
        return result

    system = weighted_laplacian(dm) + np.full((n, n), 1.0 / n)
    try:
        factor = cho_factor(system)
    except LinAlgError as e:
        raise SingularSystem(f"weighted Laplacian is not positive definite: {e}") from e

    off_diagonal = ~np.eye(n, dtype=bool)
    for iteration in range(1, max_iters + 1):
        dist = pairwise_distances(layout)
        b = np.zeros((n, n))
        nonzero = off_diagonal & (dist > 0.0)
        b[nonzero] = -dm.w[nonzero] * dm.d[nonzero] / dist[nonzero]
        np.fill_diagonal(b, -b.sum(axis=1))

        updated = cho_solve(factor, b @ layout)
        if not np.all(np.isfinite(updated)):
            raise SingularSystem("majorization update produced non-finite coordinates")
        layout = updated - updated.mean(axis=0)

        previous = result.history[-1]
        current = stress_value(layout, dm)
        result.history.append(current)
        result.iterations = iteration
        result.layout = layout

        if previous == 0.0 or (previous - current) / previous < tol:
            result.converged = True
            break

    if polish_iters > 0 and result.history[-1] > 0.0 and not coincident_pairs(result.layout):
        refined = polish(result.layout, dm, max_iters=polish_iters)
        if refined is not result.layout:
            result.layout = refined
            result.history.append(stress_value(refined, dm))
            result.polished = True

    return result


def stress_majorize(
    g: Graph,
    dm: DistanceMatrix,
    init: Layout,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    polish_iters: int = DEFAULT_POLISH_ITERS,
) -> Layout:
    """Majorized layout; see `majorize` for the iteration details."""
    return majorize(g, dm, init, max_iters=max_iters, tol=tol, polish_iters=polish_iters).layout
