"""Corpus benchmark: SPX against a single-layout baseline, one CSV row per run."""

import csv
import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

from spxlayout.graph.core import all_pairs_shortest_paths, derive_seed, is_dag
from spxlayout.io.graphfile import read_graph
from spxlayout.metrics import MetricsReport, report
from spxlayout.optimizer.descent import GDVariant
from spxlayout.optimizer.init import InitMethod, initial_layout
from spxlayout.optimizer.spx import RunConfig, upward_repair
from spxlayout.optimizer.sweep import SweepGrid, sweep

logger = logging.getLogger(__name__)

BENCH_FIELDS = ["graph", "method", "valid", *MetricsReport.model_fields]


def default_bench_grid() -> SweepGrid:
    """K in {1, 2, 4}, vanilla and Adam, stress-majorization start, one restart."""
    return SweepGrid(
        k_values=[1.0, 2.0, 4.0],
        variants=[GDVariant.VANILLA, GDVariant.ADAM],
        init_methods=[InitMethod.STRESS],
        restarts=1,
    )


@dataclass
class BenchConfig:
    """Configuration for a benchmark run."""

    corpus_dir: Path
    grid: SweepGrid = field(default_factory=default_bench_grid)
    base: RunConfig = field(default_factory=RunConfig)
    baseline: InitMethod = InitMethod.STRESS
    base_seed: int = 0
    workers: int = 1
    pattern: str = "*.txt"


@dataclass
class BenchRow:
    """Metrics of one (graph, method) combination."""

    graph: str
    method: str
    valid: bool
    metrics: MetricsReport | None = None

    def as_dict(self) -> dict[str, object]:
        row: dict[str, object] = {"graph": self.graph, "method": self.method, "valid": self.valid}
        if self.metrics is not None:
            row.update(self.metrics.model_dump())
        return row


class BenchRunner:
    """Runs SPX and the baseline on every graph file of a corpus directory."""

    def __init__(
        self,
        config: BenchConfig,
        on_row: Callable[[BenchRow], None] | None = None,
    ) -> None:
        self.config = config
        self.on_row = on_row
        self.rows: list[BenchRow] = []

    def graph_files(self) -> list[Path]:
        """Corpus files in name order.

        Raises:
            FileNotFoundError: If the corpus directory does not exist.
        """
        if not self.config.corpus_dir.is_dir():
            raise FileNotFoundError(f"corpus directory not found: {self.config.corpus_dir}")
        return sorted(self.config.corpus_dir.glob(self.config.pattern))

    def run(self) -> list[BenchRow]:
        """Benchmark every graph; graph-level errors propagate."""
        self.rows = []
        for path in self.graph_files():
            self._run_graph(path)
        return self.rows

    def _add(self, row: BenchRow) -> None:
        self.rows.append(row)
        if self.on_row is not None:
            self.on_row(row)

    def _run_graph(self, path: Path) -> None:
        cfg = self.config
        g = read_graph(path)
        dm = all_pairs_shortest_paths(g)
        upward = g.has_directed_edges and is_dag(g)
        base = cfg.base.model_copy(update={"upward": upward})
        logger.info("benchmarking %s (n=%d, m=%d, upward=%s)", path.name, g.n, g.m, upward)

        seed = derive_seed(cfg.base_seed, path.stem, "baseline")
        baseline = initial_layout(
            g,
            cfg.baseline,
            seed,
            dm=dm,
            majorization_iters=base.majorization_iters,
            majorization_tol=base.majorization_tol,
            polish_iters=base.polish_iters,
            fr_iterations=base.fr_iterations,
            fr_min_distance=base.fr_min_distance,
        )
        if upward:
            baseline = upward_repair(baseline, g, base.upward_eps)
        self._add(BenchRow(path.stem, cfg.baseline.value, True, report(baseline, g, dm)))

        result = sweep(
            g,
            cfg.grid,
            base=base,
            base_seed=derive_seed(cfg.base_seed, path.stem),
            workers=cfg.workers,
            dm=dm,
        )
        best = result.best
        if best is None:
            logger.warning("no valid SPX run for %s (%d failed)", path.name, result.failed)
            self._add(BenchRow(path.stem, "spx", False))
        else:
            self._add(BenchRow(path.stem, "spx", True, best.report))


def write_bench_csv(rows: list[BenchRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_dict())
