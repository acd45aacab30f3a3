from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import sparse

from dpp_hypergraphs.errors import (
    ContractViolation,
    DimensionMismatchError,
    UnknownLabelError,
)
from dpp_hypergraphs.validations.validator import HypergraphValidator

logger = logging.getLogger(__name__)

Edge = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """A node count, an optional vocabulary and a multiset of hyperedges.

    Hyperedges keep their input order and multiplicity; each is a strictly increasing tuple of 0-based node indices.
    Empty hyperedges are allowed. Construction raises `ConfigValidationException` when an invariant is broken.
    """

    n_v: int
    edges: Tuple[Edge, ...]
    vocab: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:  # noqa: D
        object.__setattr__(self, "n_v", int(self.n_v))
        object.__setattr__(self, "edges", tuple(tuple(int(node) for node in edge) for edge in self.edges))
        if self.vocab is not None:
            object.__setattr__(self, "vocab", tuple(str(label) for label in self.vocab))
        HypergraphValidator().checked_validations(self)

    @staticmethod
    def from_sets(n_v: int, edges: Iterable[Iterable[int]], vocab: Optional[Sequence[str]] = None) -> Hypergraph:
        """Build from unordered node collections; duplicates inside an edge are collapsed."""
        return Hypergraph(
            n_v=n_v,
            edges=tuple(tuple(sorted(set(edge))) for edge in edges),
            vocab=tuple(vocab) if vocab is not None else None,
        )

    @property
    def n_e(self) -> int:  # noqa: D
        return len(self.edges)

    @property
    def n_nonempty(self) -> int:
        """Number of hyperedges with at least one node."""
        return sum(1 for edge in self.edges if edge)

    def label(self, node: int) -> str:
        """Vocabulary label of a node, or its index as text when there is no vocabulary."""
        return self.vocab[node] if self.vocab is not None else str(node)

    def labels(self) -> List[str]:  # noqa: D
        return [self.label(node) for node in range(self.n_v)]

    def incidence(self) -> sparse.csr_matrix:
        """The n_e x n_v 0/1 incidence matrix, one row per hyperedge."""
        rows = np.repeat(np.arange(self.n_e), [len(edge) for edge in self.edges])
        cols = np.fromiter((node for edge in self.edges for node in edge), dtype=int, count=len(rows))
        data = np.ones(len(rows), dtype=float)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n_e, self.n_v))

    def edge_sizes(self) -> npt.NDArray:
        """Cardinality of each hyperedge, in edge order."""
        return np.array([len(edge) for edge in self.edges], dtype=int)

    def node_counts(self) -> npt.NDArray:
        """Number of hyperedges containing each node."""
        counts = np.zeros(self.n_v, dtype=int)
        for edge in self.edges:
            counts[list(edge)] += 1
        return counts

    def counts(self) -> Dict[Edge, int]:
        """Multiplicity of each distinct hyperedge, in first-appearance order."""
        return dict(Counter(self.edges))

    def concat(self, other: Hypergraph) -> Hypergraph:
        """Hypergraph on the same nodes holding the edges of both, self first."""
        if other.n_v != self.n_v:
            raise DimensionMismatchError(f"Cannot concatenate hypergraphs on {self.n_v} and {other.n_v} nodes")
        return Hypergraph(n_v=self.n_v, edges=self.edges + other.edges, vocab=self.vocab)

    def with_edges(self, edges: Iterable[Edge]) -> Hypergraph:
        """Same nodes and vocabulary, different edges."""
        return Hypergraph(n_v=self.n_v, edges=tuple(edges), vocab=self.vocab)

    def induced(self, nodes: Sequence[int]) -> Hypergraph:
        """Sub-hypergraph on the given nodes, re-indexed in the given order; every hyperedge is kept, possibly empty."""
        remap = {int(node): new for new, node in enumerate(nodes)}
        if len(remap) != len(nodes) or any(not 0 <= node < self.n_v for node in remap):
            raise ContractViolation(f"Nodes must be distinct indices below {self.n_v}")
        edges = tuple(tuple(sorted(remap[node] for node in edge if node in remap)) for edge in self.edges)
        vocab = tuple(self.label(node) for node in remap) if self.vocab is not None else None
        return Hypergraph(n_v=len(remap), edges=edges, vocab=vocab)

    def aligned_to(self, vocabulary: Sequence[str]) -> Hypergraph:
        """The same hyperedges over another vocabulary, matching nodes by label.

        Labels missing from `vocabulary` are dropped from every hyperedge, with a warning.
        """
        lookup = {label: index for index, label in enumerate(vocabulary)}
        missing = [label for label in self.labels() if label not in lookup]
        if missing:
            logger.warning(f"{len(missing)} label(s) not in the target vocabulary are dropped, e.g. {missing[:5]}")
        edges = tuple(
            tuple(sorted(lookup[self.label(node)] for node in edge if self.label(node) in lookup))
            for edge in self.edges
        )
        return Hypergraph(n_v=len(vocabulary), edges=edges, vocab=tuple(vocabulary))

    def indices_for(self, labels: Sequence[str]) -> Tuple[int, ...]:
        """Translate labels into sorted node indices.

        Raises:
            UnknownLabelError: naming every label that is not in the vocabulary.
        """
        return indices_for_labels(self.labels(), labels)


def indices_for_labels(vocabulary: Sequence[str], labels: Sequence[str]) -> Tuple[int, ...]:
    """Sorted node indices of the given labels within a vocabulary, ignoring repeats."""
    lookup = {label: index for index, label in enumerate(vocabulary)}
    unknown = [label for label in labels if label not in lookup]
    if unknown:
        raise UnknownLabelError(unknown)
    return tuple(sorted({lookup[label] for label in labels}))
