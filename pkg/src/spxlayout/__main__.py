"""Entry point for the spxlayout CLI."""

import csv
import logging
import re
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from enum import StrEnum
from pathlib import Path
from typing import Annotated

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from spxlayout import __version__
from spxlayout.bench import BenchConfig, BenchRow, BenchRunner, default_bench_grid, write_bench_csv
from spxlayout.config import Config, load_config
from spxlayout.errors import ExitCode, SPXError, exit_code_for
from spxlayout.graph.core import Graph, all_pairs_shortest_paths, derive_seed
from spxlayout.graph.generators import (
    community_corpus,
    generate_binary_tree,
    generate_community_graph,
    generate_random_dag,
    upward_corpus,
)
from spxlayout.io.graphfile import read_graph, save_graph
from spxlayout.io.layoutfile import read_layout, write_layout
from spxlayout.io.svg import SvgOptions, render_svg
from spxlayout.logging.trace import TraceLogger, create_trace_paths
from spxlayout.metrics import MetricsReport, report
from spxlayout.optimizer.descent import GDVariant
from spxlayout.optimizer.init import InitMethod
from spxlayout.optimizer.spx import RunResult, Selection, spx_optimize
from spxlayout.optimizer.sweep import SweepCell, sweep
from spxlayout.penalties.cost import PenaltyMode

app = typer.Typer(
    name="spxlayout",
    help="Stress-plus-X graph layout: crossing, crossing-angle and upward penalties",
)
gen_app = typer.Typer(help="Generate graph corpora")
app.add_typer(gen_app, name="gen")

console = Console()
err_console = Console(stderr=True)

RUN_FIELDS = ["cell", "k", "variant", "init", "restart", "seed", "valid", "final_cost"]
K_GRID_PATTERN = re.compile(r"^(-?\d+)\.\.(-?\d+)$")

ConfigOption = Annotated[
    Path | None,
    typer.Option("--config", "-c", help="Path to config YAML file"),
]
VerboseOption = Annotated[
    bool,
    typer.Option("--verbose", "-v", help="Show debug diagnostics"),
]


def setup_logging(verbose: bool) -> None:
    """Route library logging through rich on stderr."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


@contextmanager
def handle_errors() -> Iterator[None]:
    """Turn library errors into messages and exit codes."""
    try:
        yield
    except ValidationError as e:
        err_console.print(f"[red]Invalid configuration:[/red] {e}")
        raise typer.Exit(ExitCode.USAGE_ERROR) from None
    except (SPXError, FileNotFoundError) as e:
        code = exit_code_for(e)
        label = "Input error" if code == ExitCode.DATA_ERROR else "Runtime failure"
        err_console.print(f"[red]{label}:[/red] {e}")
        raise typer.Exit(code) from None


def parse_k_grid(value: str) -> tuple[int, int]:
    """'lo..hi' exponent range, e.g. '-5..5' for K = 2^-5 ... 2^5."""
    match = K_GRID_PATTERN.match(value.strip())
    if not match:
        raise typer.BadParameter(f"expected 'lo..hi' exponents, got {value!r}")
    low, high = int(match.group(1)), int(match.group(2))
    if low > high:
        raise typer.BadParameter(f"empty K range {value!r}")
    return low, high


def metrics_table(title: str, metrics: MetricsReport) -> Table:
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    for name, value in metrics.model_dump().items():
        table.add_row(name, f"{value:.6g}" if isinstance(value, float) else str(value))
    return table


def write_run_outputs(
    result: RunResult,
    g: Graph,
    output: Path | None,
    svg: Path | None,
    app_config: Config,
) -> None:
    if output:
        write_layout(
            output,
            result.layout,
            metrics=result.report,
            config=result.config.model_dump(mode="json"),
        )
        console.print(f"  Layout: {output}")
    if svg:
        options = SvgOptions(
            scale=app_config.output.svg_scale, padding=app_config.output.svg_padding
        )
        svg.parent.mkdir(parents=True, exist_ok=True)
        svg.write_text(render_svg(result.layout, g, options), encoding="utf-8")
        console.print(f"  SVG: {svg}")


@app.command()
def layout(
    graph_path: Annotated[
        Path,
        typer.Argument(help="Graph file ('n <count>' header, one edge per line)", dir_okay=False),
    ],
    mode: Annotated[
        PenaltyMode | None,
        typer.Option("--mode", help="Penalty: crossing or angle"),
    ] = None,
    upward: Annotated[
        bool,
        typer.Option("--upward", help="Enforce upward directed edges"),
    ] = False,
    k: Annotated[
        float | None,
        typer.Option("-K", "--k", help="Penalty weight K"),
    ] = None,
    variant: Annotated[
        GDVariant | None,
        typer.Option("--variant", help="Gradient-descent variant"),
    ] = None,
    init: Annotated[
        InitMethod | None,
        typer.Option("--init", help="Initial layout: stress, force or random"),
    ] = None,
    seed: Annotated[int, typer.Option("--seed", help="Random seed")] = 0,
    iters: Annotated[
        int | None,
        typer.Option("--iters", help="Outer iterations"),
    ] = None,
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="Write layout JSON here"),
    ] = None,
    svg: Annotated[
        Path | None,
        typer.Option("--svg", help="Write an SVG drawing here"),
    ] = None,
    trace: Annotated[
        Path | None,
        typer.Option("--trace", help="Write the convergence trace CSV here"),
    ] = None,
    save_trace: Annotated[
        bool,
        typer.Option("--save-trace", help="Write traces under the configured trace directory"),
    ] = False,
    config: ConfigOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Run a single SPX optimization."""
    setup_logging(verbose)
    with handle_errors():
        app_config = load_config(config)
        cfg = app_config.run_config(
            k=k,
            variant=variant,
            mode=mode,
            init_method=init,
            seed=seed,
            outer_iters=iters,
            upward=upward,
        )
        g = read_graph(graph_path)
        dm = all_pairs_shortest_paths(g)

        console.print(f"[bold blue]spxlayout[/bold blue] - {graph_path.name} (n={g.n}, m={g.m})")
        console.print(
            f"  K={cfg.k:g}, variant={cfg.variant}, mode={cfg.mode}, init={cfg.init_method}, "
            f"iterations={cfg.outer_iters}"
        )

        csv_path, json_path = trace, None
        if save_trace:
            run_id = f"k{cfg.k:g}_{cfg.variant}_{cfg.init_method}_{cfg.seed}"
            default_csv, default_json = create_trace_paths(
                app_config.output.trace_dir, graph_path.stem, run_id
            )
            csv_path = csv_path or (default_csv if app_config.output.enable_csv else None)
            json_path = default_json if app_config.output.enable_json else None

        with TraceLogger(
            csv_path=csv_path,
            json_path=json_path,
            run_name=graph_path.stem,
            metadata=cfg.model_dump(mode="json"),
        ) as trace_logger:
            result = spx_optimize(g, dm, cfg, on_iteration=trace_logger.log)

        if result.report is not None:
            console.print(metrics_table("Final layout", result.report))
        console.print(
            f"  Final cost: {result.final_cost:.6g}  "
            f"(LP fallbacks: {result.lp_fallbacks}, jitters: {result.jitters})"
        )
        if csv_path:
            console.print(f"  Trace: {csv_path}")
        if not result.valid:
            err_console.print(f"[red]Run failed:[/red] {result.error}")
            if result.layout.size:
                write_run_outputs(result, g, output, svg, app_config)
            raise typer.Exit(ExitCode.RUNTIME_FAILURE)
        write_run_outputs(result, g, output, svg, app_config)


@app.command("sweep")
def sweep_command(
    graph_path: Annotated[
        Path,
        typer.Argument(help="Graph file", dir_okay=False),
    ],
    k_grid: Annotated[
        str | None,
        typer.Option("--k-grid", help="Exponent range lo..hi for K = 2^lo ... 2^hi"),
    ] = None,
    restarts: Annotated[
        int | None,
        typer.Option("--restarts", help="Random starts per grid cell"),
    ] = None,
    select: Annotated[
        Selection | None,
        typer.Option("--select", help="Best-run criterion: cost, angle or crossings"),
    ] = None,
    mode: Annotated[
        PenaltyMode | None,
        typer.Option("--mode", help="Penalty: crossing or angle"),
    ] = None,
    upward: Annotated[
        bool,
        typer.Option("--upward", help="Enforce upward directed edges"),
    ] = False,
    iters: Annotated[
        int | None,
        typer.Option("--iters", help="Outer iterations per run"),
    ] = None,
    seed: Annotated[
        int | None,
        typer.Option("--seed", help="Base seed for all cells"),
    ] = None,
    workers: Annotated[
        int | None,
        typer.Option("--workers", "-j", help="Worker processes"),
    ] = None,
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="Write the best layout JSON here"),
    ] = None,
    all_csv: Annotated[
        Path | None,
        typer.Option("--all-csv", help="Write one CSV row per run here"),
    ] = None,
    svg: Annotated[
        Path | None,
        typer.Option("--svg", help="Write an SVG of the best layout here"),
    ] = None,
    config: ConfigOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Run the multi-start sweep over K, variants and initial layouts."""
    setup_logging(verbose)
    with handle_errors():
        app_config = load_config(config)
        k_range = parse_k_grid(k_grid) if k_grid else None
        grid = app_config.sweep_grid(k_range=k_range, restarts=restarts)
        base = app_config.run_config(
            mode=mode,
            outer_iters=iters,
            upward=upward,
            selection=select,
        )
        base_seed = seed if seed is not None else app_config.sweep.base_seed
        n_workers = workers or app_config.sweep.workers

        g = read_graph(graph_path)
        dm = all_pairs_shortest_paths(g)
        cells = grid.cells()
        console.print(
            f"[bold blue]spxlayout sweep[/bold blue] - {graph_path.name}: "
            f"{len(cells)} runs on {n_workers} worker(s)"
        )

        done = 0

        def on_cell(cell: SweepCell, result: RunResult) -> None:
            nonlocal done
            done += 1
            if verbose:
                status = "ok" if result.valid else "[red]failed[/red]"
                console.print(
                    f"  [{done}/{len(cells)}] K={cell.k:g} {cell.variant} {cell.init_method} "
                    f"#{cell.restart}: {status} cost={result.final_cost:.6g}"
                )

        result = sweep(
            g, grid, base=base, base_seed=base_seed, workers=n_workers, dm=dm, on_cell=on_cell
        )

        if all_csv:
            write_runs_csv(all_csv, cells, result.runs)
            console.print(f"  Runs: {all_csv}")
        console.print(f"  Completed: {len(result.runs) - result.failed}, failed: {result.failed}")

        best = result.best
        if best is None:
            err_console.print("[red]No valid run in the sweep[/red]")
            raise typer.Exit(ExitCode.RUNTIME_FAILURE)
        if best.report is not None:
            console.print(metrics_table(f"Best by {base.selection}", best.report))
        write_run_outputs(best, g, output, svg, app_config)


def write_runs_csv(path: Path, cells: list[SweepCell], runs: list[RunResult]) -> None:
    """One row per sweep cell, in cell order."""
    fields = [*RUN_FIELDS, *MetricsReport.model_fields, "error"]
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for cell, run in zip(cells, runs, strict=True):
            row: dict[str, object] = {
                "cell": cell.index,
                "k": cell.k,
                "variant": cell.variant.value,
                "init": cell.init_method.value,
                "restart": cell.restart,
                "seed": run.config.seed,
                "valid": run.valid,
                "final_cost": run.final_cost,
                "error": run.error or "",
            }
            if run.report is not None:
                row.update(run.report.model_dump())
            writer.writerow(row)


@app.command()
def metrics(
    graph_path: Annotated[Path, typer.Argument(help="Graph file", dir_okay=False)],
    layout_path: Annotated[Path, typer.Argument(help="Layout JSON file", dir_okay=False)],
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="Write the report JSON here"),
    ] = None,
    verbose: VerboseOption = False,
) -> None:
    """Compute the readability metrics of a layout."""
    setup_logging(verbose)
    with handle_errors():
        g = read_graph(graph_path)
        coords = read_layout(layout_path, n=g.n)
        result = report(coords, g, all_pairs_shortest_paths(g))
        console.print(metrics_table(layout_path.name, result))
        if output:
            output.parent.mkdir(parents=True, exist_ok=True)
            output.write_text(result.model_dump_json(indent=2) + "\n", encoding="utf-8")
            console.print(f"  Report: {output}")


def write_corpus(output: Path, graphs: list[Graph]) -> list[Path]:
    """Write one graph to `output`, or several to `<stem>_<i><suffix>`."""
    if len(graphs) == 1:
        save_graph(output, graphs[0])
        return [output]
    paths = []
    for i, g in enumerate(graphs):
        path = output.with_name(f"{output.stem}_{i}{output.suffix}")
        save_graph(path, g)
        paths.append(path)
    return paths


def _seeds(seed: int, count: int) -> list[int]:
    return [seed] if count == 1 else [derive_seed(seed, i) for i in range(count)]


OutputArg = Annotated[Path, typer.Option("--output", "-o", help="Graph file to write")]
CountOption = Annotated[int, typer.Option("--count", help="Number of graphs", min=1)]
SeedOption = Annotated[int, typer.Option("--seed", help="Random seed")]


@gen_app.command("dag")
def gen_dag(
    output: OutputArg,
    n: Annotated[int, typer.Option("--n", help="Vertex count")] = 10,
    density: Annotated[float, typer.Option("--density", help="Edges per vertex")] = 2.0,
    seed: SeedOption = 0,
    count: CountOption = 1,
    config: ConfigOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Random connected DAG with round(density * n) edges."""
    setup_logging(verbose)
    with handle_errors():
        app_config = load_config(config)
        try:
            graphs = [
                generate_random_dag(n, density, s, max_attempts=app_config.generator.max_attempts)
                for s in _seeds(seed, count)
            ]
        except ValueError as e:
            raise typer.BadParameter(str(e)) from None
        for path in write_corpus(output, graphs):
            console.print(f"  Wrote {path}")


@gen_app.command("tree")
def gen_tree(
    output: OutputArg,
    depth: Annotated[int, typer.Option("--depth", help="Tree depth (2..5)")] = 3,
    verbose: VerboseOption = False,
) -> None:
    """Complete binary tree with edges directed from parent to child."""
    setup_logging(verbose)
    with handle_errors():
        try:
            g = generate_binary_tree(depth)
        except ValueError as e:
            raise typer.BadParameter(str(e)) from None
        for path in write_corpus(output, [g]):
            console.print(f"  Wrote {path}")


@gen_app.command("community")
def gen_community(
    output: OutputArg,
    n: Annotated[int, typer.Option("--n", help="Vertex count")] = 50,
    communities: Annotated[
        int | None,
        typer.Option("--communities", help="Number of communities"),
    ] = None,
    p_in: Annotated[
        float | None,
        typer.Option("--p-in", help="Edge probability inside a community"),
    ] = None,
    p_out: Annotated[
        float | None,
        typer.Option("--p-out", help="Edge probability between communities"),
    ] = None,
    seed: SeedOption = 0,
    count: CountOption = 1,
    config: ConfigOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Connected planted-partition graph."""
    setup_logging(verbose)
    with handle_errors():
        gen_config = load_config(config).generator
        try:
            graphs = [
                generate_community_graph(
                    n,
                    communities or gen_config.communities,
                    p_in if p_in is not None else gen_config.p_in,
                    p_out if p_out is not None else gen_config.p_out,
                    s,
                    max_attempts=gen_config.max_attempts,
                )
                for s in _seeds(seed, count)
            ]
        except ValueError as e:
            raise typer.BadParameter(str(e)) from None
        for path in write_corpus(output, graphs):
            console.print(f"  Wrote {path}")


class CorpusKind(StrEnum):
    UPWARD = "upward"
    COMMUNITY = "community"


@gen_app.command("corpus")
def gen_corpus(
    output_dir: Annotated[Path, typer.Argument(help="Directory to write graphs into")],
    kind: Annotated[
        CorpusKind,
        typer.Option("--kind", help="upward: trees and DAGs; community: clustered graphs"),
    ] = CorpusKind.UPWARD,
    count: Annotated[
        int,
        typer.Option("--count", help="DAGs (upward) or graphs (community)", min=1),
    ] = 30,
    seed: SeedOption = 0,
    verbose: VerboseOption = False,
) -> None:
    """Benchmark corpus, one named file per graph."""
    setup_logging(verbose)
    with handle_errors():
        if kind is CorpusKind.UPWARD:
            corpus = upward_corpus(seed, dag_count=count)
        else:
            corpus = community_corpus(count, seed)
        for name, g in corpus:
            save_graph(output_dir / f"{name}.txt", g)
        console.print(f"  Wrote {len(corpus)} graphs to {output_dir}")


@app.command()
def bench(
    corpus_dir: Annotated[Path, typer.Argument(help="Directory of graph files", file_okay=False)],
    output: Annotated[Path, typer.Option("--output", "-o", help="Results CSV")],
    baseline: Annotated[
        InitMethod,
        typer.Option("--baseline", help="Baseline layout: stress, force or random"),
    ] = InitMethod.STRESS,
    mode: Annotated[
        PenaltyMode | None,
        typer.Option("--mode", help="Penalty: crossing or angle"),
    ] = None,
    iters: Annotated[int | None, typer.Option("--iters", help="Outer iterations per run")] = None,
    seed: Annotated[int, typer.Option("--seed", help="Base seed")] = 0,
    workers: Annotated[int | None, typer.Option("--workers", "-j", help="Worker processes")] = None,
    config: ConfigOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Compare SPX with a baseline layout on every graph of a corpus."""
    setup_logging(verbose)
    with handle_errors():
        app_config = load_config(config)
        bench_config = BenchConfig(
            corpus_dir=corpus_dir,
            grid=default_bench_grid(),
            base=app_config.run_config(mode=mode, outer_iters=iters),
            baseline=baseline,
            base_seed=seed,
            workers=workers or app_config.sweep.workers,
        )

        def on_row(row: BenchRow) -> None:
            crossings = row.metrics.crossings if row.metrics else "-"
            console.print(f"  {row.graph:<24} {row.method:<8} crossings={crossings}")

        rows = BenchRunner(bench_config, on_row=on_row).run()
        write_bench_csv(rows, output)
        console.print(f"  Results: {output} ({len(rows)} rows)")


@app.command()
def version() -> None:
    """Show version information."""
    console.print(f"[bold]spxlayout[/bold] {__version__}")


def main() -> None:
    """Console entry point; command-line usage errors exit with code 1."""
    try:
        code = app(standalone_mode=False)
    except click.UsageError as e:
        e.show()
        sys.exit(ExitCode.USAGE_ERROR)
    except click.Abort:
        err_console.print("[yellow]Interrupted[/yellow]")
        sys.exit(ExitCode.RUNTIME_FAILURE)
    sys.exit(code if isinstance(code, int) else ExitCode.SUCCESS)


if __name__ == "__main__":
    main()
