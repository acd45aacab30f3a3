import logging

import numpy as np
import pytest

from dpp_hypergraphs.clustering.graph import clique_expansion
from dpp_hypergraphs.clustering.spectral import nsc, score
from dpp_hypergraphs.errors import ContractViolation
from dpp_hypergraphs.hypergraph import Hypergraph
from dpp_hypergraphs.metrics.accuracy import clustering_accuracy

GROUPS = np.array([0, 0, 0, 1, 1, 1])


def test_nsc_separates_disjoint_groups(two_cliques_hypergraph: Hypergraph) -> None:  # noqa: D
    labels = nsc(clique_expansion(two_cliques_hypergraph), 2, seed=1)
    assert clustering_accuracy(labels, GROUPS) == 1.0


def test_score_separates_disjoint_groups(two_cliques_hypergraph: Hypergraph) -> None:  # noqa: D
    labels = score(clique_expansion(two_cliques_hypergraph), 2, seed=1)
    assert clustering_accuracy(labels, GROUPS) == 1.0


def test_isolated_node_without_regularization(caplog: pytest.LogCaptureFixture) -> None:
    """With tau = 0 an isolated node has no spectral direction and is assigned with a warning."""
    hypergraph = Hypergraph(n_v=5, edges=((0, 1), (0, 1), (2, 3), (2, 3)))
    with caplog.at_level(logging.WARNING):
        labels = nsc(clique_expansion(hypergraph), 2, tau=0.0, seed=0)
    assert "zero-norm spectral rows" in caplog.text
    assert labels[0] == labels[1] and labels[2] == labels[3] and labels[0] != labels[2]
    assert labels.shape == (5,)


def test_spectral_contract(two_cliques_hypergraph: Hypergraph) -> None:  # noqa: D
    adjacency = clique_expansion(two_cliques_hypergraph)
    with pytest.raises(ContractViolation):
        nsc(adjacency, 2, tau=-0.1)
    with pytest.raises(ContractViolation):
        nsc(adjacency, 7)
    with pytest.raises(ContractViolation):
        score(adjacency, 1)
