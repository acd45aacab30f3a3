"""Spectral clustering baselines on a weighted adjacency matrix: regularized NSC and SCORE.

Both embed nodes with a few eigenvectors, normalize each row to unit length and run Euclidean k-means on the rows.
A row whose norm is (numerically) zero has no direction; such nodes are left out of k-means and afterwards given the
label of the centroid nearest to the zero vector.
"""
from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt
from sklearn.cluster import KMeans

from dpp_hypergraphs.clustering.graph import WeightedAdjacency
from dpp_hypergraphs.constants import ZERO_NORM_THRESHOLD
from dpp_hypergraphs.errors import ContractViolation

logger = logging.getLogger(__name__)

DEFAULT_REGULARIZATION = 0.1
KMEANS_RESTARTS = 10
KMEANS_MAX_ITERS = 300


def _cluster_rows(embedding: npt.NDArray, k: int, seed: int) -> npt.NDArray:
    norms = np.linalg.norm(embedding, axis=1)
    nonzero = norms >= ZERO_NORM_THRESHOLD
    rows = np.zeros_like(embedding)
    rows[nonzero] = embedding[nonzero] / norms[nonzero, None]

    fit_rows = rows[nonzero] if np.sum(nonzero) >= k else rows
    kmeans = KMeans(n_clusters=k, n_init=KMEANS_RESTARTS, max_iter=KMEANS_MAX_ITERS, random_state=seed)
    kmeans.fit(fit_rows)
    labels = kmeans.predict(rows)
    if not np.all(nonzero):
        logger.warning(
            f"Nodes {np.flatnonzero(~nonzero).tolist()} have zero-norm spectral rows; "
            f"assigned to the centroid nearest the origin"
        )
    return labels.astype(int)


def _check_k(adjacency: WeightedAdjacency, k: int, minimum: int) -> None:
    if not minimum <= k <= adjacency.n_v:
        raise ContractViolation(f"Number of clusters must lie in [{minimum}, {adjacency.n_v}], got {k}")


def nsc(adjacency: WeightedAdjacency, k: int, tau: float = DEFAULT_REGULARIZATION, seed: int = 0) -> npt.NDArray:
    """Regularized normalized spectral clustering.

    Degrees are regularized to d_i + tau * mean(d); the embedding is the eigenvectors of the k smallest eigenvalues
    of the symmetric normalized Laplacian I - D^-1/2 A D^-1/2, i.e. the k largest of D^-1/2 A D^-1/2. With tau = 0
    an isolated node has zero regularized degree and therefore a zero row.
    """
    _check_k(adjacency, k, minimum=1)
    if tau < 0:
        raise ContractViolation(f"Regularization must be nonnegative, got {tau}")

    degrees = adjacency.degrees()
    regularized = degrees + tau * float(np.mean(degrees))
    inverse_sqrt = np.zeros_like(regularized)
    positive = regularized > 0
    inverse_sqrt[positive] = 1.0 / np.sqrt(regularized[positive])
    normalized = inverse_sqrt[:, None] * adjacency.weights * inverse_sqrt[None, :]

    _, eigenvectors = np.linalg.eigh(normalized)
    return _cluster_rows(eigenvectors[:, -k:], k, seed)


def score(adjacency: WeightedAdjacency, k: int, seed: int = 0) -> npt.NDArray:
    """SCORE with row-wise l2 normalization of the leading eigenvectors.

    The embedding is the k eigenvectors of A with the largest eigenvalue magnitudes; dividing each row by its l2
    norm cancels degree heterogeneity.
    """
    _check_k(adjacency, k, minimum=2)
    eigenvalues, eigenvectors = np.linalg.eigh(adjacency.weights)
    leading = np.argsort(-np.abs(eigenvalues), kind="stable")[:k]
    return _cluster_rows(eigenvectors[:, leading], k, seed)
