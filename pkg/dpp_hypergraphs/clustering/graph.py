from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.errors import ContractViolation
from dpp_hypergraphs.hypergraph import Hypergraph


@dataclass(frozen=True, eq=False)
class WeightedAdjacency:
    """Symmetric, nonnegative n_v x n_v co-occurrence weights with a zero diagonal."""

    weights: npt.NDArray

    def __post_init__(self) -> None:  # noqa: D
        weights = np.array(self.weights, dtype=float)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise ContractViolation(f"Adjacency must be square, got shape {weights.shape}")
        if not np.array_equal(weights, weights.T):
            raise ContractViolation("Adjacency must be symmetric")
        if np.any(np.diag(weights) != 0.0):
            raise ContractViolation("Adjacency must have a zero diagonal")
        if np.any(weights < 0.0):
            raise ContractViolation("Adjacency weights must be nonnegative")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def n_v(self) -> int:  # noqa: D
        return int(self.weights.shape[0])

    def degrees(self) -> npt.NDArray:  # noqa: D
        return self.weights.sum(axis=1)


def clique_expansion(hypergraph: Hypergraph) -> WeightedAdjacency:
    """A_ij = number of hyperedges containing both i and j, for i != j, counting repeated hyperedges each time.

    Computed as B^T B for the incidence matrix B with the diagonal (node degrees) removed; singleton and empty
    hyperedges therefore add nothing.
    """
    incidence = hypergraph.incidence()
    co_occurrence = (incidence.T @ incidence).toarray()
    np.fill_diagonal(co_occurrence, 0.0)
    return WeightedAdjacency(co_occurrence)
