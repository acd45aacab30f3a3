from __future__ import annotations

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment

from dpp_hypergraphs.constants import EXHAUSTIVE_LABEL_MATCHING_MAX_CLUSTERS
from dpp_hypergraphs.errors import ContractViolation, DimensionMismatchError


def exhaustive_matching(contingency: npt.NDArray) -> int:
    """Largest total of a square contingency table over all one-to-one label matchings.

    Searches every matching exactly, sharing work between matchings that agree on a prefix of rows: `best[mask]` is
    the best total of matching the first popcount(mask) rows to the columns in `mask`.
    """
    size = contingency.shape[0]
    best = np.full(1 << size, -1, dtype=np.int64)
    best[0] = 0
    for mask in range(1 << size):
        if best[mask] < 0:
            continue
        row = bin(mask).count("1")
        if row == size:
            continue
        for column in range(size):
            bit = 1 << column
            if not mask & bit:
                best[mask | bit] = max(best[mask | bit], best[mask] + int(contingency[row, column]))
    return int(best[-1])


def clustering_accuracy(labels_hat: npt.ArrayLike, labels_true: npt.ArrayLike) -> float:
    """Largest fraction of nodes on which the two labelings agree, over all matchings of one label set to the other.

    Label sets up to EXHAUSTIVE_LABEL_MATCHING_MAX_CLUSTERS are matched by exhaustive search; larger ones by the
    Hungarian method, which finds the same optimum.
    """
    estimated = np.asarray(labels_hat)
    truth = np.asarray(labels_true)
    if estimated.shape != truth.shape or estimated.ndim != 1:
        raise DimensionMismatchError(f"Label vectors differ in shape: {estimated.shape} vs {truth.shape}")
    if estimated.size == 0:
        raise ContractViolation("Clustering accuracy needs at least one node")

    estimated_values, estimated_codes = np.unique(estimated, return_inverse=True)
    true_values, true_codes = np.unique(truth, return_inverse=True)
    size = max(estimated_values.size, true_values.size)
    contingency = np.zeros((size, size), dtype=int)
    np.add.at(contingency, (estimated_codes, true_codes), 1)

    if size <= EXHAUSTIVE_LABEL_MATCHING_MAX_CLUSTERS:
        matched = exhaustive_matching(contingency)
    else:
        row_index, column_index = linear_sum_assignment(contingency, maximize=True)
        matched = int(contingency[row_index, column_index].sum())
    return matched / estimated.size
