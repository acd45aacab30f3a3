"""Command-line interface.

Exit codes: 0 on success, 1 for usage errors, 2 for data errors (bad files, unknown labels, invalid parameters) and 3
for numerical failures.
"""
from __future__ import annotations

import csv
import logging
import os
import sys
from datetime import datetime, timezone
from typing import IO, Any, List, Optional, Sequence

import click
import numpy as np

from dpp_hypergraphs.clustering.dispatch import cluster_nodes
from dpp_hypergraphs.clustering.line_kmeans import LineKMeansOptions
from dpp_hypergraphs.clustering.spectral import DEFAULT_REGULARIZATION
from dpp_hypergraphs.constants import REPORT_SCHEMA_VERSION
from dpp_hypergraphs.dpp.inference import (
    complete_edge,
    expected_size,
    log_prob,
    marginal_kernel,
)
from dpp_hypergraphs.dpp.sampling import generate_hypergraph
from dpp_hypergraphs.embedding import embedding_table, write_embedding_csv
from dpp_hypergraphs.errors import DataError, NumericalError
from dpp_hypergraphs.estimation.optimizer import fit as fit_hypergraph
from dpp_hypergraphs.estimation.options import FitOptions
from dpp_hypergraphs.estimation.selection import criterion_value, select_dimension
from dpp_hypergraphs.hypergraph import Hypergraph, indices_for_labels
from dpp_hypergraphs.kernel import LatentConfig, build_kernel
from dpp_hypergraphs.metrics.alignment import loss_L, loss_V
from dpp_hypergraphs.metrics.parameters import loss_alpha, loss_beta
from dpp_hypergraphs.parsing.config_files import (
    FIT_SECTION,
    GRID_SECTION,
    LINE_KMEANS_SECTION,
    load_config_file,
)
from dpp_hypergraphs.parsing.hyperedges import (
    DEFAULT_DELIMITER,
    DEFAULT_MIN_NODE_COUNT,
    read_hyperedge_file,
    write_hyperedges,
)
from dpp_hypergraphs.parsing.model_file import LoadedModel, read_model, write_model
from dpp_hypergraphs.simulation.harness import SimulationGrid, run_simulation
from dpp_hypergraphs.type_enums.clustering_method import ClusteringMethod
from dpp_hypergraphs.type_enums.selection_criterion import SelectionCriterion
from dpp_hypergraphs.type_enums.simulation_design import SimulationDesign

logger = logging.getLogger(__name__)

USAGE_ERROR_EXIT_CODE = 1
DATA_ERROR_EXIT_CODE = 2
NUMERICAL_ERROR_EXIT_CODE = 3

# Unix time used as the provenance timestamp of written models when set, for reproducible output files.
SOURCE_DATE_EPOCH_VARIABLE = "SOURCE_DATE_EPOCH"


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s - %(message)s")


def _fmt(value: float) -> str:
    return repr(float(value))


def _split_labels(value: str, delimiter: str) -> List[str]:
    return [token.strip() for token in value.split(delimiter) if token.strip()]


def _split_integers(value: Optional[str], option_name: str) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(token) for token in value.split(",") if token.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}", param_hint=option_name)


def _created_at() -> Optional[datetime]:
    epoch = os.environ.get(SOURCE_DATE_EPOCH_VARIABLE)
    if epoch is None:
        return None
    try:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    except ValueError:
        raise click.UsageError(f"{SOURCE_DATE_EPOCH_VARIABLE} must be an integer Unix time, got {epoch!r}")


def _read_edges(path: str, delimiter: str, min_node_count: int, keep_empty_lines: bool) -> Hypergraph:
    hypergraph = read_hyperedge_file(
        path, delimiter=delimiter, min_node_count=min_node_count, keep_empty_lines=keep_empty_lines
    )
    logger.info(f"Read {hypergraph.n_e} hyperedges on {hypergraph.n_v} nodes from {path}")
    return hypergraph


def _model_edges(model: LoadedModel, path: str, delimiter: str) -> Hypergraph:
    """Hyperedges of a file indexed by the nodes of a model; every label is kept before alignment."""
    return _read_edges(path, delimiter, min_node_count=1, keep_empty_lines=False).aligned_to(model.labels())


fit_option_flags = [
    click.option("--max-iters", type=int, default=None, help="Mini-batch iterations per restart."),
    click.option("--batch-size", type=str, default=None, help="Hyperedges per mini-batch, or 'full'."),
    click.option("--n-inits", type=int, default=None, help="Random restarts."),
    click.option("--step-size", type=float, default=None, help="Initial ascent step."),
    click.option("--tol", type=float, default=None, help="Relative objective change that counts as converged."),
    click.option("--seed", type=int, default=None, help="Master seed."),
]

edge_file_flags = [
    click.option("--delimiter", default=DEFAULT_DELIMITER, show_default=True, help="Label separator."),
    click.option(
        "--min-node-count",
        type=int,
        default=DEFAULT_MIN_NODE_COUNT,
        show_default=True,
        help="Drop labels appearing in fewer hyperedges than this.",
    ),
    click.option("--keep-empty-lines", is_flag=True, help="Read blank lines as empty hyperedges."),
]


def _apply(flags: Sequence[Any]) -> Any:
    def decorator(function: Any) -> Any:
        for flag in reversed(flags):
            function = flag(function)
        return function

    return decorator


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress messages, -vv for debugging output.")
def cli(verbose: int) -> None:
    """Fit, query and sample determinantal point process models of hypergraphs."""
    _configure_logging(verbose)


@cli.command()
@click.argument("edges", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", "d", type=int, default=None, help="Latent dimension.")
@_apply(fit_option_flags)
@_apply(edge_file_flags)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML options file.")
@click.option("--out", required=True, type=click.Path(dir_okay=False, writable=True), help="Model file to write.")
def fit(
    edges: str,
    d: Optional[int],
    max_iters: Optional[int],
    batch_size: Optional[str],
    n_inits: Optional[int],
    step_size: Optional[float],
    tol: Optional[float],
    seed: Optional[int],
    delimiter: str,
    min_node_count: int,
    keep_empty_lines: bool,
    config_path: Optional[str],
    out: str,
) -> None:
    """Fit a model to the hyperedges in EDGES and write it to --out."""
    config_file = load_config_file(config_path)
    if d is None and "d" not in config_file.section(FIT_SECTION):
        raise click.UsageError("The latent dimension must be given with --d or in the config file")
    options = config_file.build(
        FitOptions,
        FIT_SECTION,
        dict(d=d, max_iters=max_iters, batch_size=batch_size, n_inits=n_inits, step_size=step_size, tol=tol, seed=seed),
    )
    hypergraph = _read_edges(edges, delimiter, min_node_count, keep_empty_lines)

    result = fit_hypergraph(hypergraph, options)
    write_model(result, out, vocabulary=hypergraph.labels(), created_at=_created_at())
    click.echo(f"final objective: {result.final_objective:.10f}")
    click.echo(f"AIC: {result.aic:.6f}")
    click.echo(f"BIC: {result.bic:.6f}")
    click.echo(f"converged: {str(result.converged).lower()} after {result.iterations_used} iterations")


@cli.command("select-d")
@click.argument("edges", type=click.Path(exists=True, dir_okay=False))
@click.option("--d-min", type=int, default=1, show_default=True, help="Smallest candidate dimension.")
@click.option("--d-max", type=int, required=True, help="Largest candidate dimension.")
@click.option(
    "--criterion",
    type=click.Choice(SelectionCriterion.list_values(), case_sensitive=False),
    default=SelectionCriterion.AIC.value,
    show_default=True,
)
@_apply(fit_option_flags)
@_apply(edge_file_flags)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML options file.")
def select_d(
    edges: str,
    d_min: int,
    d_max: int,
    criterion: str,
    max_iters: Optional[int],
    batch_size: Optional[str],
    n_inits: Optional[int],
    step_size: Optional[float],
    tol: Optional[float],
    seed: Optional[int],
    delimiter: str,
    min_node_count: int,
    keep_empty_lines: bool,
    config_path: Optional[str],
) -> None:
    """Fit every dimension from --d-min to --d-max and print the information criteria."""
    if d_min > d_max:
        raise click.UsageError(f"--d-min ({d_min}) must not exceed --d-max ({d_max})")
    config_file = load_config_file(config_path)
    options = config_file.build(
        FitOptions,
        FIT_SECTION,
        dict(
            d=d_min,
            max_iters=max_iters,
            batch_size=batch_size,
            n_inits=n_inits,
            step_size=step_size,
            tol=tol,
            seed=seed,
        ),
    )
    hypergraph = _read_edges(edges, delimiter, min_node_count, keep_empty_lines)
    chosen_criterion = SelectionCriterion(criterion)

    selection = select_dimension(hypergraph, range(d_min, d_max + 1), options, criterion=chosen_criterion)
    click.echo(f"{'d':>4}  {'objective':>18}  {'AIC':>16}  {'BIC':>16}")
    for result in selection.fits:
        marker = "  *" if result.d == selection.best_d else ""
        click.echo(f"{result.d:>4}  {result.final_objective:>18.10f}  {result.aic:>16.4f}  {result.bic:>16.4f}{marker}")
    for d, message in selection.failed.items():
        click.echo(f"{d:>4}  failed: {message.splitlines()[0]}")
    best = next(result for result in selection.fits if result.d == selection.best_d)
    best_value = criterion_value(best, chosen_criterion)
    click.echo(f"best d by {chosen_criterion.value.upper()}: {selection.best_d} ({best_value:.4f})")


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "n_edges", type=int, required=True, help="Number of hyperedges to draw.")
@click.option("--size", type=int, default=None, help="Draw hyperedges of exactly this size.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--delimiter", default=DEFAULT_DELIMITER, show_default=True)
@click.option("--out", type=click.File("w", encoding="utf-8"), default="-", help="Output file (default: stdout).")
def sample(model: str, n_edges: int, size: Optional[int], seed: int, delimiter: str, out: IO[str]) -> None:
    """Draw hyperedges from MODEL, one per line."""
    if n_edges < 0:
        raise click.BadParameter("must be nonnegative", param_hint="--n")
    loaded = read_model(model)
    hypergraph = generate_hypergraph(build_kernel(loaded.config), n_edges, np.random.default_rng(seed), size=size)
    write_hyperedges(hypergraph.edges, loaded.labels(), out, delimiter=delimiter)


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--given", required=True, help="Labels already in the hyperedge, separated by the delimiter.")
@click.option("--top", "top_k", type=int, default=5, show_default=True, help="Number of candidates to list.")
@click.option("--delimiter", default=DEFAULT_DELIMITER, show_default=True)
def complete(model: str, given: str, top_k: int, delimiter: str) -> None:
    """Rank the nodes that best complete a partial hyperedge."""
    loaded = read_model(model)
    labels = loaded.labels()
    nodes = indices_for_labels(labels, _split_labels(given, delimiter))
    ranking = complete_edge(build_kernel(loaded.config), nodes, top_k)
    click.echo("rank,label,log_probability")
    for rank, candidate in enumerate(ranking, start=1):
        click.echo(f"{rank},{labels[candidate.node]},{_fmt(candidate.log_prob)}")


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--edge", required=True, help="Labels separated by the delimiter; '' for the empty hyperedge.")
@click.option("--delimiter", default=DEFAULT_DELIMITER, show_default=True)
def probe(model: str, edge: str, delimiter: str) -> None:
    """Print the probability of a hyperedge, the inclusion marginals of its nodes and the expected size."""
    loaded = read_model(model)
    labels = loaded.labels()
    nodes = indices_for_labels(labels, _split_labels(edge, delimiter))
    kernel = build_kernel(loaded.config)
    marginals = marginal_kernel(kernel)
    value = log_prob(kernel, nodes)

    click.echo(f"edge: {delimiter.join(labels[node] for node in nodes)}")
    click.echo(f"log_probability: {_fmt(value)}")
    click.echo(f"probability: {_fmt(float(np.exp(value)))}")
    click.echo(f"inclusion_probability: {_fmt(float(np.exp(marginals.log_inclusion_prob(nodes))))}")
    inclusion = marginals.inclusion_probabilities()
    for node in nodes:
        click.echo(f"marginal[{labels[node]}]: {_fmt(float(inclusion[node]))}")
    click.echo(f"expected_size: {_fmt(expected_size(kernel))}")


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", "n_clusters", type=int, required=True, help="Number of clusters.")
@click.option(
    "--method",
    type=click.Choice(ClusteringMethod.list_values(), case_sensitive=False),
    default="line-kmeans",
    show_default=True,
)
@click.option("--edges", type=click.Path(exists=True, dir_okay=False), help="Hyperedge file, for baselines.")
@click.option("--min-frequency", type=int, default=None, help="Only cluster nodes in at least this many hyperedges.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tau", type=float, default=DEFAULT_REGULARIZATION, show_default=True, help="NSC regularization.")
@click.option("--delimiter", default=DEFAULT_DELIMITER, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML options file.")
@click.option("--out", type=click.File("w", encoding="utf-8"), default="-", help="Labels CSV (default: stdout).")
def cluster(
    model: str,
    n_clusters: int,
    method: str,
    edges: Optional[str],
    min_frequency: Optional[int],
    seed: int,
    tau: float,
    delimiter: str,
    config_path: Optional[str],
    out: IO[str],
) -> None:
    """Cluster the nodes of MODEL; nodes left out by --min-frequency get label -1."""
    chosen = ClusteringMethod(method)
    if chosen.needs_edges and edges is None:
        raise click.UsageError(f"--method {method} clusters the observed hyperedges and needs --edges")
    if min_frequency is not None and edges is None:
        raise click.UsageError("--min-frequency counts appearances in the hyperedges and needs --edges")

    loaded = read_model(model)
    labels = loaded.labels()
    hypergraph = _model_edges(loaded, edges, delimiter) if edges is not None else None
    selected = np.arange(loaded.config.n_v)
    if min_frequency is not None:
        assert hypergraph is not None
        selected = np.flatnonzero(hypergraph.node_counts() >= min_frequency)
        logger.info(f"{selected.size} of {loaded.config.n_v} nodes appear in at least {min_frequency} hyperedges")

    config = loaded.config
    subset_config = LatentConfig(V=config.V[selected], beta=config.beta, alpha=config.alpha[selected])
    assignments = cluster_nodes(
        chosen,
        n_clusters,
        config=subset_config,
        hypergraph=hypergraph.induced(selected.tolist()) if hypergraph is not None else None,
        seed=seed,
        tau=tau,
        line_kmeans_options=load_config_file(config_path).build(LineKMeansOptions, LINE_KMEANS_SECTION),
    )
    node_labels = np.full(config.n_v, -1, dtype=int)
    node_labels[selected] = assignments

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["schema_version", "node", "label"])
    for node in range(config.n_v):
        writer.writerow([REPORT_SCHEMA_VERSION, labels[node], int(node_labels[node])])


@cli.command()
@click.argument("design", type=click.Choice(SimulationDesign.list_values(), case_sensitive=False))
@click.option("--n-v", type=int, default=None, help="Number of nodes.")
@click.option("--d-values", default=None, help="Comma-separated latent dimensions.")
@click.option("--n-e-values", default=None, help="Comma-separated hypergraph sizes.")
@click.option("--replicates", type=int, default=None, help="Replicates per grid cell.")
@click.option("--master-seed", type=int, default=None)
@click.option("--max-workers", type=int, default=None, help="Processes running replicates.")
@_apply(fit_option_flags[:-1])
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML options file.")
@click.option("--out", type=click.File("w", encoding="utf-8"), default="-", help="Report CSV (default: stdout).")
@click.option("--json", "json_path", type=click.Path(dir_okay=False, writable=True), help="Also write a JSON report.")
@click.option("--timing", is_flag=True, help="Add per-run wall-clock seconds to the reports.")
def simulate(
    design: str,
    n_v: Optional[int],
    d_values: Optional[str],
    n_e_values: Optional[str],
    replicates: Optional[int],
    master_seed: Optional[int],
    max_workers: Optional[int],
    max_iters: Optional[int],
    batch_size: Optional[str],
    n_inits: Optional[int],
    step_size: Optional[float],
    tol: Optional[float],
    config_path: Optional[str],
    out: IO[str],
    json_path: Optional[str],
    timing: bool,
) -> None:
    """Run a synthetic-data experiment and write one record per (d, n_e, replicate)."""
    config_file = load_config_file(config_path)
    grid = config_file.build(
        SimulationGrid,
        GRID_SECTION,
        dict(
            n_v=n_v,
            d_values=_split_integers(d_values, "--d-values"),
            n_e_values=_split_integers(n_e_values, "--n-e-values"),
            replicates=replicates,
            master_seed=master_seed,
            max_workers=max_workers,
        ),
    )
    # d and seed are set per replicate by the harness
    options = config_file.build(
        FitOptions,
        FIT_SECTION,
        dict(
            d=min(grid.d_values),
            max_iters=max_iters,
            batch_size=batch_size,
            n_inits=n_inits,
            step_size=step_size,
            tol=tol,
        ),
    )

    report = run_simulation(SimulationDesign(design), grid, options)
    report.write_csv(out, timing=timing)
    if json_path is not None:
        with open(json_path, "w", encoding="utf-8") as f:
            f.write(report.to_json(timing=timing))
    failures = report.failures()
    if failures:
        click.echo(click.style(f"{len(failures)} of {len(report.records)} runs failed", fg="yellow"), err=True)


@cli.command("eval")
@click.option("--model-hat", required=True, type=click.Path(exists=True, dir_okay=False), help="Estimated model.")
@click.option("--model-star", required=True, type=click.Path(exists=True, dir_okay=False), help="Reference model.")
@click.option("--exhaustive", is_flag=True, help="Search every sign vector when aligning kernels.")
def evaluate(model_hat: str, model_star: str, exhaustive: bool) -> None:
    """Compare an estimate with a reference model, up to the sign symmetry."""
    estimate = read_model(model_hat).config
    truth = read_model(model_star).config
    kernel_alignment = loss_L(build_kernel(estimate), build_kernel(truth), exhaustive=exhaustive)
    direction_alignment = loss_V(estimate.V, truth.V)
    kernel_norm = float(np.linalg.norm(build_kernel(truth).L))
    direction_norm = float(np.linalg.norm(truth.V))

    click.echo(f"loss_L: {_fmt(kernel_alignment.loss)}")
    click.echo(f"relative_error_L: {_fmt(kernel_alignment.loss / kernel_norm)}")
    click.echo(f"loss_V: {_fmt(direction_alignment.loss)}")
    click.echo(f"relative_error_V: {_fmt(direction_alignment.loss / direction_norm)}")
    click.echo(f"loss_beta: {_fmt(loss_beta(estimate.beta, truth.beta))}")
    click.echo(f"relative_error_beta: {_fmt(loss_beta(estimate.beta, truth.beta, relative=True))}")
    click.echo(f"loss_alpha: {_fmt(loss_alpha(estimate.alpha, truth.alpha))}")
    click.echo(f"relative_error_alpha: {_fmt(loss_alpha(estimate.alpha, truth.alpha, relative=True))}")


@cli.command()
@click.argument("model", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.File("w", encoding="utf-8"), default="-", help="Embedding CSV (default: stdout).")
@click.option("--edges", type=click.Path(exists=True, dir_okay=False), help="Hyperedges for empirical frequencies.")
@click.option("--delimiter", default=DEFAULT_DELIMITER, show_default=True)
def embedding(model: str, out: IO[str], edges: Optional[str], delimiter: str) -> None:
    """Write map coordinates, popularity and marginals of every node of a d = 3 MODEL."""
    loaded = read_model(model)
    hypergraph = _model_edges(loaded, edges, delimiter) if edges is not None else None
    write_embedding_csv(embedding_table(loaded.config, loaded.labels(), hypergraph), out)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Entry point; maps errors to exit codes."""
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="dpp-hypergraphs", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        sys.exit(USAGE_ERROR_EXIT_CODE)
    except click.ClickException as e:
        e.show()
        sys.exit(USAGE_ERROR_EXIT_CODE)
    except DataError as e:
        click.echo(click.style("Error: ", fg="bright_red", bold=True) + str(e), err=True)
        sys.exit(DATA_ERROR_EXIT_CODE)
    except NumericalError as e:
        click.echo(click.style("Numerical failure: ", fg="bright_red", bold=True) + str(e), err=True)
        sys.exit(NUMERICAL_ERROR_EXIT_CODE)
    sys.exit(0)


if __name__ == "__main__":
    main()
