"""Synthetic-data experiments: draw a latent configuration, sample hypergraphs from it, fit and score the estimate.

Each (design, d, replicate) triple gets its own seed, a SHA-256 hash of (master_seed, design, d, replicate). n_e is
deliberately left out of the hash, so a replicate reuses the same latent configuration at every n_e of the grid and
comparisons across n_e are paired. The hyperedges for a given n_e are drawn from a stream seeded by (seed, n_e).
"""
from __future__ import annotations

import hashlib
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy import stats

from dpp_hypergraphs.clustering.dispatch import cluster_nodes
from dpp_hypergraphs.dpp.inference import expected_size
from dpp_hypergraphs.dpp.sampling import generate_hypergraph
from dpp_hypergraphs.enum_extension import assert_values_exhausted
from dpp_hypergraphs.errors import DataError, NumericalError
from dpp_hypergraphs.estimation.optimizer import fit
from dpp_hypergraphs.estimation.options import FitOptions
from dpp_hypergraphs.implementations.base import FrozenBaseModel
from dpp_hypergraphs.kernel import LatentConfig, build_kernel, sign_conjugate
from dpp_hypergraphs.metrics.accuracy import clustering_accuracy
from dpp_hypergraphs.metrics.alignment import loss_L, loss_V
from dpp_hypergraphs.metrics.parameters import loss_alpha, loss_beta
from dpp_hypergraphs.simulation.generators import (
    DEFAULT_BETA,
    clustered_latent_config,
    uniform_latent_config,
)
from dpp_hypergraphs.simulation.report import ExperimentRecord, ExperimentReport
from dpp_hypergraphs.type_enums.clustering_method import ClusteringMethod
from dpp_hypergraphs.type_enums.simulation_design import SimulationDesign
from dph_pydantic_shim import validator

logger = logging.getLogger(__name__)

# Significance level of the per-entry Anderson-Darling normality test.
NORMALITY_SIGNIFICANCE_PERCENT = 1.0


class SimulationGrid(FrozenBaseModel):
    """Grid of a simulation run; the defaults are a desk-scale version of the full protocol.

    Attributes:
        n_v: Number of nodes.
        d_values: Latent dimensions to simulate.
        n_e_values: Hypergraph sizes to simulate.
        replicates: Replicates per (d, n_e) cell.
        master_seed: Seed all replicate seeds are derived from.
        n_clusters: Clusters in the clustered design; also the k used by every clustering method.
        kappa: von Mises-Fisher concentration in the clustered design.
        beta: True squared latent length.
        max_workers: Replicates run in this many processes; 1 runs them in-process.
    """

    n_v: int = 100
    d_values: Tuple[int, ...] = (2, 3, 4)
    n_e_values: Tuple[int, ...] = (500, 1000, 2000, 3000)
    replicates: int = 10
    master_seed: int = 0
    n_clusters: int = 3
    kappa: float = 10.0
    beta: float = DEFAULT_BETA
    max_workers: int = 1

    @validator("n_v", "replicates", "n_clusters", "max_workers")
    @classmethod
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be a positive integer, got {value}")
        return value

    @validator("d_values", "n_e_values")
    @classmethod
    def _nonempty_positive(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value or any(entry < 1 for entry in value):
            raise ValueError(f"must be a nonempty list of positive integers, got {list(value)}")
        return tuple(sorted(set(value)))

    @validator("d_values")
    @classmethod
    def _dimensions_below_node_count(cls, value: Tuple[int, ...], values: Dict[str, Any]) -> Tuple[int, ...]:
        n_v = values.get("n_v")
        if n_v is not None and max(value) >= n_v:
            raise ValueError(f"every latent dimension must be below n_v = {n_v}, got {list(value)}")
        return value

    @validator("kappa")
    @classmethod
    def _kappa_nonnegative(cls, value: float) -> float:
        if value < 0:
            raise ValueError(f"must be nonnegative, got {value}")
        return value

    @validator("beta")
    @classmethod
    def _beta_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"must be strictly positive, got {value}")
        return value


def replicate_seed(master_seed: int, design: SimulationDesign, d: int, replicate: int) -> int:
    """64-bit seed from the SHA-256 hash of (master_seed, design, d, replicate)."""
    digest = hashlib.sha256(f"{master_seed}:{design.value}:{d}:{replicate}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _draw_truth(
    design: SimulationDesign, grid: SimulationGrid, d: int, rng: np.random.Generator
) -> Tuple[LatentConfig, Optional[npt.NDArray]]:
    if design is SimulationDesign.SIM1:
        return uniform_latent_config(grid.n_v, d, rng, beta=grid.beta), None
    elif design is SimulationDesign.SIM2:
        config, labels = clustered_latent_config(grid.n_v, d, grid.n_clusters, grid.kappa, rng, beta=grid.beta)
        return config, labels
    else:
        assert_values_exhausted(design)


def run_replicate(
    design: SimulationDesign, grid: SimulationGrid, d: int, replicate: int, options: FitOptions
) -> List[ExperimentRecord]:
    """Every n_e of the grid for one (d, replicate); failures become records with `error` set."""
    seed = replicate_seed(grid.master_seed, design, d, replicate)
    true_config, true_labels = _draw_truth(design, grid, d, np.random.default_rng(seed))
    true_kernel = build_kernel(true_config)
    model_size = expected_size(true_kernel)
    fit_options = options.with_updates(d=d, seed=seed % 2**32)

    records = []
    for n_e in grid.n_e_values:
        started = time.perf_counter()
        base = dict(design=design, n_v=grid.n_v, d=d, n_e=n_e, replicate=replicate, seed=seed)
        try:
            hypergraph = generate_hypergraph(true_kernel, n_e, np.random.default_rng([seed, n_e]))
            result = fit(hypergraph, fit_options)
            estimated_kernel = build_kernel(result.config)
            values = dict(
                rel_error_V=loss_V(result.config.V, true_config.V).loss / float(np.linalg.norm(true_config.V)),
                rel_error_beta=loss_beta(result.config.beta, true_config.beta, relative=True),
                rel_error_alpha=loss_alpha(result.config.alpha, true_config.alpha, relative=True),
                rel_error_L=loss_L(estimated_kernel, true_kernel).loss / float(np.linalg.norm(true_kernel.L)),
                empirical_mean_size=float(np.mean(hypergraph.edge_sizes())),
                expected_size=model_size,
                final_objective=result.final_objective,
                converged=result.converged,
            )
            if true_labels is not None:
                for method in ClusteringMethod:
                    labels = cluster_nodes(
                        method, grid.n_clusters, config=result.config, hypergraph=hypergraph, seed=replicate
                    )
                    values[f"accuracy_{method.value}"] = clustering_accuracy(labels, true_labels)
            record = ExperimentRecord(**base, **values, wall_clock_seconds=time.perf_counter() - started)
        except (DataError, NumericalError) as e:
            logger.warning(f"{design.value} d={d} n_e={n_e} replicate {replicate} (seed {seed}) failed: {e}")
            record = ExperimentRecord(**base, error=str(e), wall_clock_seconds=time.perf_counter() - started)
        logger.info(f"{design.value} d={d} n_e={n_e} replicate {replicate}: done in {record.wall_clock_seconds:.1f}s")
        records.append(record)
    return records


def run_simulation(design: SimulationDesign, grid: SimulationGrid, options: FitOptions) -> ExperimentReport:
    """Run every (d, replicate) of the grid; `options.d` and `options.seed` are replaced per replicate."""
    tasks = [(d, replicate) for d in grid.d_values for replicate in range(grid.replicates)]
    if grid.max_workers == 1:
        batches = [run_replicate(design, grid, d, replicate, options) for d, replicate in tasks]
    else:
        with ProcessPoolExecutor(max_workers=grid.max_workers) as executor:
            futures = [executor.submit(run_replicate, design, grid, d, replicate, options) for d, replicate in tasks]
            batches = [future.result() for future in futures]

    records = sorted(
        (record for batch in batches for record in batch), key=lambda record: (record.d, record.n_e, record.replicate)
    )
    return ExperimentReport(records=tuple(records))


def run_sim1(grid: SimulationGrid, options: FitOptions) -> ExperimentReport:
    """Directions uniform on the sphere; records relative errors of V, beta, alpha and L."""
    return run_simulation(SimulationDesign.SIM1, grid, options)


def run_sim2(grid: SimulationGrid, options: FitOptions) -> ExperimentReport:
    """Clustered directions; additionally records the clustering accuracy of line k-means, NSC and SCORE."""
    return run_simulation(SimulationDesign.SIM2, grid, options)


@dataclass(frozen=True, eq=False)
class NormalityCheck:
    """Standardized estimation errors sqrt(n_e) * (L_hat - L*)_ij at a few kernel entries, with normality tests.

    Attributes:
        entries: (i, j) positions with i <= j.
        samples: replicates x entries matrix of standardized errors of the sign-aligned estimates.
        statistics: Anderson-Darling statistic per entry.
        critical_values: Critical value per entry at the 1% level.
        failed_replicates: Number of replicates whose fit failed and were left out.
    """

    entries: Tuple[Tuple[int, int], ...]
    samples: npt.NDArray
    statistics: npt.NDArray
    critical_values: npt.NDArray
    failed_replicates: int

    @property
    def rejected(self) -> npt.NDArray:
        """Whether normality is rejected at each entry."""
        return self.statistics > self.critical_values

    @property
    def n_not_rejected(self) -> int:  # noqa: D
        return int(np.sum(~self.rejected))


def run_normality_check(
    n_v: int,
    d: int,
    n_e: int,
    replicates: int,
    seed: int,
    entries: int,
    options: FitOptions,
) -> NormalityCheck:
    """Fit many independent hypergraphs drawn from one configuration and test the errors for normality.

    Estimates are sign-aligned to the truth by exhaustive sign search before the errors are taken, so n_v must be
    within the exhaustive-search guard.
    """
    rng = np.random.default_rng(seed)
    true_config = uniform_latent_config(n_v, d, rng)
    true_kernel = build_kernel(true_config)
    upper = [(i, j) for i in range(n_v) for j in range(i, n_v)]
    chosen = sorted(rng.choice(len(upper), size=min(entries, len(upper)), replace=False).tolist())
    positions = tuple(upper[index] for index in chosen)
    rows = np.array([i for i, _ in positions], dtype=int)
    cols = np.array([j for _, j in positions], dtype=int)

    samples = []
    failed = 0
    for replicate, child in enumerate(np.random.SeedSequence(seed).spawn(replicates)):
        replicate_rng = np.random.default_rng(child)
        try:
            hypergraph = generate_hypergraph(true_kernel, n_e, replicate_rng)
            result = fit(hypergraph, options.with_updates(d=d, seed=int(replicate_rng.integers(2**32))))
        except (DataError, NumericalError) as e:
            logger.warning(f"Normality replicate {replicate} failed: {e}")
            failed += 1
            continue
        estimated = build_kernel(result.config)
        aligned = sign_conjugate(estimated, loss_L(estimated, true_kernel, exhaustive=True).sign_vector)
        samples.append(math.sqrt(n_e) * (aligned.L - true_kernel.L)[rows, cols])

    sample_matrix = np.array(samples).reshape(-1, len(positions))
    statistics = []
    critical_values = []
    for column in sample_matrix.T:
        test = stats.anderson(column, dist="norm")
        level = int(np.argmin(np.abs(np.asarray(test.significance_level) - NORMALITY_SIGNIFICANCE_PERCENT)))
        statistics.append(float(test.statistic))
        critical_values.append(float(test.critical_values[level]))
    return NormalityCheck(
        entries=positions,
        samples=sample_matrix,
        statistics=np.array(statistics),
        critical_values=np.array(critical_values),
        failed_replicates=failed,
    )
