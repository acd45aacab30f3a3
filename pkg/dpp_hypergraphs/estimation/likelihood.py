"""Mean log-likelihood of a hypergraph under the latent model and its gradient.

For hyperedges e_1, ..., e_n the objective is

    -log det(L + I) + (1/n) * sum_l log det(L_{e_l}),

with log det of an empty submatrix taken as 0. Identical hyperedges are grouped so each distinct edge is factored
once per evaluation.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from typing import Dict, Iterable, NamedTuple, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg

from dpp_hypergraphs.dpp.inference import logdet_pd
from dpp_hypergraphs.errors import (
    ContractViolation,
    EmptyHypergraphError,
    NonPositiveDefiniteKernelError,
)
from dpp_hypergraphs.hypergraph import Edge, Hypergraph
from dpp_hypergraphs.kernel import LatentConfig
from dpp_hypergraphs.validations.validator import LatentConfigValidator

logger = logging.getLogger(__name__)

EdgeCounts = Dict[Edge, int]


class Gradient(NamedTuple):
    """Gradient of the objective with respect to (V, beta, alpha), in ambient coordinates."""

    V: npt.NDArray
    beta: float
    alpha: npt.NDArray


def group_edges(edges: Iterable[Edge]) -> EdgeCounts:
    """Multiplicity of each distinct hyperedge."""
    return dict(Counter(edges))


def ambient_kernel(V: npt.NDArray, beta: float, alpha: npt.NDArray) -> npt.NDArray:
    """beta * V V^T + diag(alpha) for any V, including rows off the unit sphere."""
    L = beta * (V @ V.T)
    L[np.diag_indices_from(L)] += alpha
    return L


def mean_log_likelihood(L: npt.NDArray, edge_counts: EdgeCounts, n_edges: int) -> float:
    """Objective value for a kernel given as an array; `-inf` when L + I or some L_e fails to factor."""
    log_normalizer = logdet_pd(L + np.eye(L.shape[0]))
    if not np.isfinite(log_normalizer):
        return -math.inf

    total = 0.0
    for edge, count in edge_counts.items():
        if not edge:
            continue
        index = np.asarray(edge, dtype=int)
        value = logdet_pd(L[np.ix_(index, index)])
        if not np.isfinite(value):
            return -math.inf
        total += count * value
    return total / n_edges - log_normalizer


def objective(config: LatentConfig, hypergraph: Hypergraph) -> float:
    """Mean log-likelihood of the hyperedges under the config.

    A numerically singular hyperedge submatrix makes the value `-inf`; the first such edge is logged.

    Raises:
        ConfigValidationException: when the config is invalid.
        EmptyHypergraphError: when there are no hyperedges.
    """
    LatentConfigValidator().checked_validations(config)
    if hypergraph.n_e == 0:
        raise EmptyHypergraphError("The objective needs at least one hyperedge")
    if hypergraph.n_v != config.n_v:
        raise ContractViolation(f"Hypergraph has {hypergraph.n_v} nodes, config has {config.n_v}")

    L = ambient_kernel(config.V, config.beta, config.alpha)
    value = mean_log_likelihood(L, group_edges(hypergraph.edges), hypergraph.n_e)
    if not np.isfinite(value):
        _log_first_singular_edge(L, hypergraph)
    return value


def _log_first_singular_edge(L: npt.NDArray, hypergraph: Hypergraph) -> None:
    for edge_index, edge in enumerate(hypergraph.edges):
        if edge and not np.isfinite(logdet_pd(L[np.ix_(edge, edge)])):
            logger.warning(f"Hyperedge #{edge_index} {list(edge)} has a numerically singular kernel submatrix")
            return


def kernel_gradient(L: npt.NDArray, edge_counts: EdgeCounts, n_edges: int) -> npt.NDArray:
    """Gradient with respect to L: -(L + I)^-1 + (1/n) * sum_l expand(L_{e_l}^-1).

    `expand` scatters the |e| x |e| inverse into an n_v x n_v zero matrix at the rows and columns of e.

    Raises:
        NonPositiveDefiniteKernelError: when L + I or some L_e cannot be factored.
    """
    n_v = L.shape[0]
    identity = np.eye(n_v)
    try:
        G = -linalg.cho_solve(linalg.cho_factor(L + identity, lower=True, check_finite=False), identity)
    except linalg.LinAlgError as e:
        raise NonPositiveDefiniteKernelError("L + I is not positive definite") from e

    for edge, count in edge_counts.items():
        if not edge:
            continue
        index = np.asarray(edge, dtype=int)
        block = L[np.ix_(index, index)]
        try:
            inverse = linalg.cho_solve(
                linalg.cho_factor(block, lower=True, check_finite=False), np.eye(index.size), check_finite=False
            )
        except linalg.LinAlgError as e:
            raise NonPositiveDefiniteKernelError(f"Kernel submatrix of hyperedge {list(edge)} is singular") from e
        G[np.ix_(index, index)] += (count / n_edges) * inverse
    return (G + G.T) / 2.0


def parameter_gradient(V: npt.NDArray, beta: float, G: npt.NDArray) -> Gradient:
    """Chain rule from the kernel gradient G to (V, beta, alpha)."""
    return Gradient(
        V=2.0 * beta * (G @ V),
        beta=float(np.sum(G * (V @ V.T))),
        alpha=np.diag(G).copy(),
    )


def gradient(config: LatentConfig, batch: Iterable[Edge], n_edges_total: int) -> Gradient:
    """Exact gradient of the mean log-likelihood of a batch of hyperedges.

    The projection back onto the constraint set is not applied; see `estimation.projection`.

    Args:
        config: Point at which to differentiate. Rows of V are used as given.
        batch: Hyperedges the objective is averaged over.
        n_edges_total: Size of the hypergraph the batch was drawn from; the batch cannot be larger.
    """
    edges = tuple(tuple(edge) for edge in batch)
    if not edges:
        raise ContractViolation("The gradient needs a nonempty batch of hyperedges")
    if len(edges) > n_edges_total:
        raise ContractViolation(f"Batch of {len(edges)} hyperedges is larger than the hypergraph ({n_edges_total})")

    L = ambient_kernel(config.V, config.beta, config.alpha)
    G = kernel_gradient(L, group_edges(edges), len(edges))
    return parameter_gradient(config.V, config.beta, G)


def information_criteria(n_parameters: int, n_e: int, mean_objective: float) -> Tuple[float, float]:
    """(AIC, BIC) from the parameter count and the total log-likelihood n_e * mean_objective."""
    log_likelihood = n_e * mean_objective
    aic = 2.0 * n_parameters - 2.0 * log_likelihood
    bic = math.log(n_e) * n_parameters - 2.0 * log_likelihood
    return aic, bic
