import io

import numpy as np
import pytest

from dpp_hypergraphs.dpp.inference import marginal_kernel
from dpp_hypergraphs.embedding import (
    canonical_directions,
    embedding_table,
    spherical_coordinates,
    write_embedding_csv,
)
from dpp_hypergraphs.errors import DimensionMismatchError
from dpp_hypergraphs.hypergraph import Hypergraph
from dpp_hypergraphs.kernel import LatentConfig, build_kernel
from tests.fixtures.config_fixtures import random_config


def test_canonical_directions() -> None:  # noqa: D
    directions = canonical_directions([[0.0, 0.0, -1.0], [1.0, -1.0, 0.0], [0.0, 0.0, 0.0]])
    assert np.array_equal(directions, [[0.0, 0.0, 1.0], [-1.0, 1.0, 0.0], [0.0, 0.0, 0.0]])


def test_spherical_coordinates() -> None:  # noqa: D
    coordinates = spherical_coordinates([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, -1.0, 0.0]])
    assert np.allclose(coordinates, [[0.0, 0.0], [0.0, 90.0], [90.0, 0.0]])
    with pytest.raises(DimensionMismatchError):
        spherical_coordinates([[1.0, 0.0]])


def test_coordinates_do_not_depend_on_orientation() -> None:  # noqa: D
    V = random_config(6, 3, seed=12).V
    assert np.allclose(spherical_coordinates(V), spherical_coordinates(-V))
    assert np.all(spherical_coordinates(V)[:, 1] >= 0.0)


def test_embedding_table() -> None:  # noqa: D
    config = random_config(4, 3, seed=13)
    hypergraph = Hypergraph(n_v=4, edges=((0, 1), (1,), (2, 3), ()))
    rows = embedding_table(config, ["w", "x", "y", "z"], hypergraph)
    assert [row.label for row in rows] == ["w", "x", "y", "z"]
    assert np.allclose([row.inclusion_probability for row in rows], np.diag(marginal_kernel(build_kernel(config)).K))
    assert [row.empirical_frequency for row in rows] == [0.25, 0.5, 0.25, 0.25]
    assert rows[2].alpha == config.alpha[2]


def test_embedding_table_shapes(three_node_config: LatentConfig) -> None:  # noqa: D
    config = random_config(4, 3, seed=13)
    with pytest.raises(DimensionMismatchError):
        embedding_table(config, ["w", "x"])
    with pytest.raises(DimensionMismatchError):
        embedding_table(config, ["w", "x", "y", "z"], Hypergraph(n_v=3, edges=()))
    with pytest.raises(DimensionMismatchError):
        embedding_table(three_node_config, ["salt", "sugar", "pepper"])


def test_embedding_csv() -> None:  # noqa: D
    rows = embedding_table(random_config(3, 3, seed=14), ["p", "q", "r"])
    stream = io.StringIO()
    write_embedding_csv(rows, stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "schema_version,label,longitude,latitude,alpha,inclusion_probability,empirical_frequency"
    assert len(lines) == 4
    assert lines[1].startswith("v1.0,p,") and lines[1].endswith(",")
