"""Multi-start sweep over K, gradient-descent variants and initial layouts."""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, Field

from spxlayout.errors import SPXError
from spxlayout.graph.core import (
    DistanceMatrix,
    Graph,
    all_pairs_shortest_paths,
    derive_seed,
    topological_order,
)
from spxlayout.optimizer.descent import GDVariant
from spxlayout.optimizer.init import InitMethod
from spxlayout.optimizer.spx import RunConfig, RunResult, Selection, spx_optimize

logger = logging.getLogger(__name__)

DEFAULT_K_EXPONENTS = tuple(range(-5, 6))


class SweepCell(NamedTuple):
    index: int
    k: float
    variant: GDVariant
    init_method: InitMethod
    restart: int


class SweepGrid(BaseModel):
    """Cartesian grid of sweep coordinates."""

    k_values: list[float] = Field(default_factory=lambda: [2.0**e for e in DEFAULT_K_EXPONENTS])
    variants: list[GDVariant] = Field(default_factory=lambda: list(GDVariant))
    init_methods: list[InitMethod] = Field(default_factory=lambda: list(InitMethod))
    restarts: int = Field(default=5, ge=1)

    @classmethod
    def from_exponents(
        cls,
        low: int,
        high: int,
        variants: list[GDVariant] | None = None,
        init_methods: list[InitMethod] | None = None,
        restarts: int = 5,
    ) -> "SweepGrid":
        """Grid with K = 2^low, ..., 2^high."""
        if low > high:
            raise ValueError(f"empty K range {low}..{high}")
        return cls(
            k_values=[2.0**e for e in range(low, high + 1)],
            variants=variants if variants is not None else list(GDVariant),
            init_methods=init_methods if init_methods is not None else list(InitMethod),
            restarts=restarts,
        )

    def cells(self) -> list[SweepCell]:
        """Cells in K-major order; the index is the cell's position in this list."""
        cells: list[SweepCell] = []
        for k in self.k_values:
            for variant in self.variants:
                for method in self.init_methods:
                    for restart in range(self.restarts):
                        cells.append(SweepCell(len(cells), k, variant, method, restart))
        return cells


@dataclass
class SweepResult:
    best: RunResult | None
    runs: list[RunResult] = field(default_factory=list)
    failed: int = 0


def cell_config(base: RunConfig, cell: SweepCell, base_seed: int) -> RunConfig:
    """Run configuration of one cell, seeded from the base seed and its grid coordinates."""
    seed = derive_seed(base_seed, cell.k, cell.variant.value, cell.init_method.value, cell.restart)
    return base.model_copy(
        update={
            "k": cell.k,
            "variant": cell.variant,
            "init_method": cell.init_method,
            "seed": seed,
        }
    )


def _run_cell(g: Graph, dm: DistanceMatrix, cfg: RunConfig) -> RunResult:
    try:
        return spx_optimize(g, dm, cfg)
    except SPXError as e:
        return RunResult(
            layout=np.empty((0, 2)),
            final_cost=math.inf,
            config=cfg,
            valid=False,
            error=str(e),
        )


def _selection_key(selection: Selection) -> Callable[[RunResult], tuple[float, ...]]:
    def key(run: RunResult) -> tuple[float, ...]:
        assert run.report is not None
        match selection:
            case Selection.COST:
                return (run.final_cost,)
            case Selection.ANGLE:
                return (-run.report.min_crossing_angle_deg, run.final_cost)
            case Selection.CROSSINGS:
                return (float(run.report.crossings), run.final_cost)

    return key


def select_best(runs: list[RunResult], selection: Selection) -> RunResult | None:
    """Best valid run by `selection`; ties go to cost, then to the earlier run."""
    candidates = [r for r in runs if r.valid and r.report is not None]
    if not candidates:
        return None
    return min(candidates, key=_selection_key(selection))


def sweep(
    g: Graph,
    grid: SweepGrid,
    base: RunConfig | None = None,
    base_seed: int = 0,
    workers: int = 1,
    dm: DistanceMatrix | None = None,
    on_cell: Callable[[SweepCell, RunResult], None] | None = None,
) -> SweepResult:
    """Run every grid cell and pick the best layout.

    Results are ordered by cell index, so the outcome does not depend on
    `workers`. Failed cells are kept in `runs`, counted in `failed` and
    excluded from selection.

    Args:
        g: Connected graph.
        grid: Sweep coordinates.
        base: Settings shared by all cells (K, variant, init and seed are overridden).
        base_seed: Seed all cell seeds derive from.
        workers: Number of processes; 1 runs in-process.
        dm: Distance matrix, computed when omitted.
        on_cell: Progress callback, called in completion order.

    Raises:
        ValueError: If the grid has no cells.
        NotADag: If `base.upward` is set and the directed edges contain a cycle.
    """
    cells = grid.cells()
    if not cells:
        raise ValueError("sweep grid is empty")
    base = base or RunConfig()
    if base.upward:
        topological_order(g)
    if dm is None:
        dm = all_pairs_shortest_paths(g)
    configs = [cell_config(base, cell, base_seed) for cell in cells]
    slots: list[RunResult | None] = [None] * len(cells)

    if workers <= 1:
        for cell, cfg in zip(cells, configs, strict=True):
            result = _run_cell(g, dm, cfg)
            slots[cell.index] = result
            if on_cell is not None:
                on_cell(cell, result)
    else:
        logger.info("running %d sweep cells on %d workers", len(cells), workers)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            future_to_cell = {
                executor.submit(_run_cell, g, dm, cfg): cell
                for cell, cfg in zip(cells, configs, strict=True)
            }
            for future in as_completed(future_to_cell):
                cell = future_to_cell[future]
                result = future.result()
                slots[cell.index] = result
                if on_cell is not None:
                    on_cell(cell, result)

    runs = [r for r in slots if r is not None]
    failed = sum(1 for r in runs if not r.valid)
    for cell, run in zip(cells, runs, strict=True):
        if not run.valid:
            logger.warning(
                "sweep cell %d (K=%g, %s, %s) failed: %s",
                cell.index,
                cell.k,
                cell.variant,
                cell.init_method,
                run.error,
            )
    return SweepResult(best=select_best(runs, base.selection), runs=runs, failed=failed)
