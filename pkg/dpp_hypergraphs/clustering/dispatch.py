from __future__ import annotations

from typing import Optional

import numpy.typing as npt

from dpp_hypergraphs.clustering.graph import clique_expansion
from dpp_hypergraphs.clustering.line_kmeans import LineKMeansOptions, line_kmeans
from dpp_hypergraphs.clustering.spectral import DEFAULT_REGULARIZATION, nsc, score
from dpp_hypergraphs.enum_extension import assert_values_exhausted
from dpp_hypergraphs.errors import ContractViolation
from dpp_hypergraphs.hypergraph import Hypergraph
from dpp_hypergraphs.kernel import LatentConfig
from dpp_hypergraphs.type_enums.clustering_method import ClusteringMethod


def cluster_nodes(
    method: ClusteringMethod,
    k: int,
    config: Optional[LatentConfig] = None,
    hypergraph: Optional[Hypergraph] = None,
    seed: int = 0,
    tau: float = DEFAULT_REGULARIZATION,
    line_kmeans_options: Optional[LineKMeansOptions] = None,
) -> npt.NDArray:
    """Labels from line k-means on fitted directions, or from a spectral baseline on the clique expansion.

    `seed` seeds every method; it replaces the seed of `line_kmeans_options`.
    """
    if method.needs_edges and hypergraph is None:
        raise ContractViolation(f"Clustering with {method.value} needs the hyperedges")
    if not method.needs_edges and config is None:
        raise ContractViolation(f"Clustering with {method.value} needs a fitted latent configuration")

    if method is ClusteringMethod.LINE_KMEANS:
        assert config is not None
        options = (line_kmeans_options or LineKMeansOptions()).with_updates(seed=seed)
        return line_kmeans(config.V, k, options)
    elif method is ClusteringMethod.NSC:
        assert hypergraph is not None
        return nsc(clique_expansion(hypergraph), k, tau=tau, seed=seed)
    elif method is ClusteringMethod.SCORE:
        assert hypergraph is not None
        return score(clique_expansion(hypergraph), k, seed=seed)
    else:
        assert_values_exhausted(method)
