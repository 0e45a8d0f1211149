"""Starting layouts: stress majorization, Fruchterman-Reingold, uniform random."""

import logging
from enum import StrEnum

import numpy as np

from spxlayout.graph.core import DistanceMatrix, Graph, all_pairs_shortest_paths
from spxlayout.stress import DEFAULT_MAX_ITERS, DEFAULT_POLISH_ITERS, DEFAULT_TOL, Layout, majorize

logger = logging.getLogger(__name__)

FR_ITERATIONS = 500
FR_MIN_DISTANCE = 0.01


class InitMethod(StrEnum):
    STRESS = "stress"
    FORCE = "force"
    RANDOM = "random"


def random_layout(n: int, seed: int) -> Layout:
    """Uniform positions in [0, sqrt(n)]^2."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, np.sqrt(n), size=(n, 2))


def fruchterman_reingold(
    g: Graph,
    seed: int,
    iterations: int = FR_ITERATIONS,
    min_distance: float = FR_MIN_DISTANCE,
) -> Layout:
    """Force-directed layout with linear cooling.

    Starts from uniform positions in the unit square with optimal distance
    k = sqrt(1/n) and initial temperature one tenth of the domain width.
    The result is rescaled so the mean edge length is 1, the scale of hop
    distances.
    """
    n = g.n
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    if n == 1:
        return pos

    adjacency = np.zeros((n, n))
    if g.m:
        adjacency[g.endpoints[:, 0], g.endpoints[:, 1]] = 1.0
        adjacency[g.endpoints[:, 1], g.endpoints[:, 0]] = 1.0

    k = np.sqrt(1.0 / n)
    extent = pos.max(axis=0) - pos.min(axis=0)
    temperature = 0.1 * float(extent.max())
    cooling = temperature / (iterations + 1)

    for _ in range(iterations):
        delta = pos[:, np.newaxis, :] - pos[np.newaxis, :, :]
        distance = np.linalg.norm(delta, axis=-1)
        np.clip(distance, min_distance, None, out=distance)
        # Repulsion k^2/d minus attraction d^2/k along each unit direction.
        force = k * k / distance**2 - adjacency * distance / k
        displacement = np.einsum("ijk,ij->ik", delta, force)
        length = np.linalg.norm(displacement, axis=-1)
        length = np.where(length < min_distance, 0.1, length)
        pos += displacement * (temperature / length)[:, np.newaxis]
        temperature -= cooling

    if g.m:
        edge_lengths = np.linalg.norm(pos[g.endpoints[:, 0]] - pos[g.endpoints[:, 1]], axis=1)
        mean_length = float(edge_lengths.mean())
        if mean_length > 0.0:
            pos = (pos - pos.mean(axis=0)) / mean_length
    return pos


def initial_layout(
    g: Graph,
    method: InitMethod,
    seed: int,
    dm: DistanceMatrix | None = None,
    majorization_iters: int = DEFAULT_MAX_ITERS,
    majorization_tol: float = DEFAULT_TOL,
    polish_iters: int = DEFAULT_POLISH_ITERS,
    fr_iterations: int = FR_ITERATIONS,
    fr_min_distance: float = FR_MIN_DISTANCE,
) -> Layout:
    """Seeded starting layout by the chosen method.

    Raises:
        DisconnectedGraph: For stress majorization on a disconnected graph.
    """
    match method:
        case InitMethod.RANDOM:
            return random_layout(g.n, seed)
        case InitMethod.FORCE:
            return fruchterman_reingold(
                g, seed, iterations=fr_iterations, min_distance=fr_min_distance
            )
        case InitMethod.STRESS:
            if dm is None:
                dm = all_pairs_shortest_paths(g)
            result = majorize(
                g,
                dm,
                random_layout(g.n, seed),
                max_iters=majorization_iters,
                tol=majorization_tol,
                polish_iters=polish_iters,
            )
            logger.debug(
                "majorization finished after %d iterations (converged=%s, stress=%.6g)",
                result.iterations,
                result.converged,
                result.history[-1],
            )
            return result.layout
