"""Dense tableau simplex for tiny standard-form programs.

Solves  min c.x  s.t.  A x = b, x >= 0  from a caller-supplied feasible
basis, using Bland's rule so degenerate pivots cannot cycle.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from spxlayout.errors import LPFailure

FloatArray = npt.NDArray[np.float64]

DEFAULT_PIVOT_BUDGET = 200
PIVOT_EPS = 1e-12
REDUCED_COST_EPS = 1e-11


@dataclass
class SimplexSolution:
    x: FloatArray
    objective: float
    pivots: int
    basis: list[int]


def simplex(
    c: FloatArray,
    a: FloatArray,
    b: FloatArray,
    basis: list[int],
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> SimplexSolution:
    """Minimize c.x over {A x = b, x >= 0} starting from a feasible basis.

    Args:
        c: Cost vector (length n).
        a: Constraint matrix (m x n).
        b: Right-hand side (length m, nonnegative for the start basis).
        basis: m column indices forming a feasible starting basis.
        pivot_budget: Maximum number of pivots.

    Returns:
        SimplexSolution with the optimal vertex.

    Raises:
        LPFailure: If the budget is exhausted, the start basis is
            infeasible or the program is unbounded.
    """
    rows, cols = a.shape
    if len(basis) != rows:
        raise LPFailure(f"basis has {len(basis)} columns, need {rows}")

    # Canonicalize the tableau against the starting basis.
    tableau = np.zeros((rows + 1, cols + 1))
    tableau[:rows, :cols] = a
    tableau[:rows, cols] = b
    try:
        tableau[:rows] = np.linalg.solve(a[:, basis], tableau[:rows])
    except np.linalg.LinAlgError as e:
        raise LPFailure("starting basis is singular") from e
    if np.any(tableau[:rows, cols] < -PIVOT_EPS):
        raise LPFailure("starting basis is infeasible")

    tableau[rows, :cols] = c
    tableau[rows] -= c[basis] @ tableau[:rows]
    basis = list(basis)

    for pivots in range(pivot_budget + 1):
        reduced = tableau[rows, :cols]
        entering = next((j for j in range(cols) if reduced[j] < -REDUCED_COST_EPS), None)
        if entering is None:
            x = np.zeros(cols)
            x[basis] = tableau[:rows, cols]
            return SimplexSolution(
                x=x, objective=float(c @ x), pivots=pivots, basis=basis
            )
        if pivots == pivot_budget:
            break

        column = tableau[:rows, entering]
        candidates = [i for i in range(rows) if column[i] > PIVOT_EPS]
        if not candidates:
            raise LPFailure("objective is unbounded below")
        ratios = {i: tableau[i, cols] / column[i] for i in candidates}
        best = min(ratios.values())
        # Bland: among minimal ratios, leave the lowest-indexed basic variable.
        leaving = min(
            (i for i in candidates if ratios[i] <= best + PIVOT_EPS),
            key=lambda i: basis[i],
        )

        tableau[leaving] /= tableau[leaving, entering]
        for i in range(rows + 1):
            if i != leaving and tableau[i, entering] != 0.0:
                tableau[i] -= tableau[i, entering] * tableau[leaving]
        basis[leaving] = entering

    raise LPFailure(f"simplex exceeded its pivot budget of {pivot_budget}")
