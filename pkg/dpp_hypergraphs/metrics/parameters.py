from __future__ import annotations

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.errors import DimensionMismatchError, EmptyHypergraphError
from dpp_hypergraphs.hypergraph import Hypergraph


def loss_alpha(alpha_hat: npt.ArrayLike, alpha_star: npt.ArrayLike, relative: bool = False) -> float:
    """||alpha_hat - alpha_star||_2, divided by ||alpha_star||_2 when `relative`."""
    estimate = np.asarray(alpha_hat, dtype=float)
    truth = np.asarray(alpha_star, dtype=float)
    if estimate.shape != truth.shape:
        raise DimensionMismatchError(f"alpha lengths differ: {estimate.shape} vs {truth.shape}")
    error = float(np.linalg.norm(estimate - truth))
    return error / float(np.linalg.norm(truth)) if relative else error


def loss_beta(beta_hat: float, beta_star: float, relative: bool = False) -> float:
    """|beta_hat - beta_star|, divided by |beta_star| when `relative`."""
    error = abs(float(beta_hat) - float(beta_star))
    return error / abs(float(beta_star)) if relative else error


def empirical_marginals(hypergraph: Hypergraph) -> npt.NDArray:
    """Fraction of hyperedges containing each node."""
    if hypergraph.n_e == 0:
        raise EmptyHypergraphError("Empirical marginals need at least one hyperedge")
    return hypergraph.node_counts() / hypergraph.n_e
