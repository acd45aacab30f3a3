"""k-means for lines through the origin.

A latent direction v and its reflection -v describe the same node, so points are compared by squared cosine and
each cluster center is an axis: the leading eigenvector of the cluster's second-moment matrix sum_i v_i v_i^T. The
within-cluster cost is sum_i (1 - (v_i . c_{label(i)})^2), which neither the assignment step nor the center update
can increase.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.constants import ROW_NORM_TOLERANCE
from dpp_hypergraphs.errors import ContractViolation
from dpp_hypergraphs.implementations.base import FrozenBaseModel
from dph_pydantic_shim import validator

logger = logging.getLogger(__name__)


class LineKMeansOptions(FrozenBaseModel):
    """Restarts, iteration cap, cost tolerance and seed for line k-means."""

    n_starts: int = 10
    max_iters: int = 300
    tol: float = 1e-10
    seed: int = 0

    @validator("n_starts", "max_iters")
    @classmethod
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be a positive integer, got {value}")
        return value


@dataclass(frozen=True, eq=False)
class LineKMeansResult:
    """Best restart: labels, unit axis per cluster, final cost and the cost after every iteration."""

    labels: npt.NDArray
    centroids: npt.NDArray
    cost: float
    cost_history: Tuple[float, ...]


def _assign(points: npt.NDArray, centroids: npt.NDArray) -> Tuple[npt.NDArray, npt.NDArray]:
    """Label of the axis with the largest squared cosine (lowest index on ties) and the per-point fit."""
    similarity = (points @ centroids.T) ** 2
    labels = np.argmax(similarity, axis=1)
    return labels, similarity[np.arange(points.shape[0]), labels]


def _seed_centroids(points: npt.NDArray, k: int, rng: np.random.Generator) -> npt.NDArray:
    """k-means++ seeding with 1 - cos^2 as the distance."""
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    for _ in range(1, k):
        distance = 1.0 - np.max((points @ points[chosen].T) ** 2, axis=1)
        distance = np.clip(distance, 0.0, None)
        distance[chosen] = 0.0
        total = float(np.sum(distance))
        if total > 0.0:
            chosen.append(int(rng.choice(n, p=distance / total)))
        else:
            remaining = np.setdiff1d(np.arange(n), chosen)
            chosen.append(int(rng.choice(remaining)))
    return points[chosen].copy()


def _axis(members: npt.NDArray) -> npt.NDArray:
    _, eigenvectors = np.linalg.eigh(members.T @ members)
    return eigenvectors[:, -1]


def _reseed_empty(
    points: npt.NDArray, centroids: npt.NDArray, labels: npt.NDArray, fit: npt.NDArray, k: int
) -> None:
    """Move the worst-fitting point into each empty cluster and center that cluster on it."""
    taken: List[int] = []
    for cluster in range(k):
        if np.any(labels == cluster):
            continue
        order = np.argsort(fit, kind="stable")
        point = next(int(index) for index in order if int(index) not in taken and np.sum(labels == labels[index]) > 1)
        logger.debug(f"Cluster {cluster} is empty; reseeding it with point {point}")
        taken.append(point)
        labels[point] = cluster
        fit[point] = 1.0
        centroids[cluster] = points[point]


def _single_start(
    points: npt.NDArray, k: int, options: LineKMeansOptions, rng: np.random.Generator
) -> LineKMeansResult:
    centroids = _seed_centroids(points, k, rng)
    labels, fit = _assign(points, centroids)
    history: List[float] = []
    for _ in range(options.max_iters):
        _reseed_empty(points, centroids, labels, fit, k)
        for cluster in range(k):
            centroids[cluster] = _axis(points[labels == cluster])
        labels, fit = _assign(points, centroids)
        cost = float(np.sum(1.0 - fit))
        settled = bool(history) and history[-1] - cost <= options.tol
        history.append(cost)
        if settled:
            break
    return LineKMeansResult(labels=labels, centroids=centroids, cost=history[-1], cost_history=tuple(history))


def line_kmeans_fit(V_hat: npt.ArrayLike, k: int, options: Optional[LineKMeansOptions] = None) -> LineKMeansResult:
    """Cluster unit rows up to sign; returns the restart with the smallest cost, the first one on ties."""
    options = options or LineKMeansOptions()
    points = np.asarray(V_hat, dtype=float)
    if points.ndim != 2:
        raise ContractViolation(f"Expected a matrix of latent directions, got shape {points.shape}")
    if not 1 <= k <= points.shape[0]:
        raise ContractViolation(f"Number of clusters must lie in [1, {points.shape[0]}], got {k}")
    if not np.all(np.abs(np.linalg.norm(points, axis=1) - 1.0) <= ROW_NORM_TOLERANCE):
        raise ContractViolation("Line k-means needs unit-norm rows")

    rng = np.random.default_rng(options.seed)
    best = None
    for start in range(options.n_starts):
        result = _single_start(points, k, options, rng)
        logger.debug(f"line k-means start {start}: cost {result.cost:.6f} after {len(result.cost_history)} iterations")
        if best is None or result.cost < best.cost:
            best = result
    assert best is not None
    return best


def line_kmeans(V_hat: npt.ArrayLike, k: int, options: Optional[LineKMeansOptions] = None) -> npt.NDArray:
    """Cluster labels of the rows of V_hat, treating v and -v as the same point."""
    return line_kmeans_fit(V_hat, k, options).labels
