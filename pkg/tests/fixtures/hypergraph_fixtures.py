from __future__ import annotations

import os
from typing import List

import pytest

from dpp_hypergraphs.hypergraph import Hypergraph

INPUT_FILES_DIRECTORY = os.path.join(os.path.dirname(__file__), "input_files")


@pytest.fixture(scope="session")
def recipes_path() -> str:
    """Path of a small file of recipes, one ingredient list per line."""
    return os.path.join(INPUT_FILES_DIRECTORY, "recipes.txt")


@pytest.fixture(scope="session")
def fit_config_path() -> str:
    """Path of a config file with `fit` and `line_kmeans` sections."""
    return os.path.join(INPUT_FILES_DIRECTORY, "fit_config.yaml")


@pytest.fixture(scope="session")
def recipe_lines() -> List[str]:
    """Three hyperedge lines in which `c` appears once."""
    return ["a,b,c\n", "a,b\n", "b, a\n"]


@pytest.fixture(scope="session")
def labelled_hypergraph() -> Hypergraph:
    """Four hyperedges on three labelled nodes, one of them repeated and one empty."""
    return Hypergraph(n_v=3, edges=((0, 1), (1, 2), (0, 1), ()), vocab=("flour", "egg", "milk"))


@pytest.fixture(scope="session")
def two_cliques_hypergraph() -> Hypergraph:
    """Nodes 0-2 and 3-5 only ever co-occur within their own group."""
    edges = ((0, 1, 2), (0, 1), (1, 2), (0, 2), (3, 4, 5), (3, 4), (4, 5), (3, 5))
    return Hypergraph(n_v=6, edges=edges)
