import numpy as np
import pytest

from dpp_hypergraphs.clustering.line_kmeans import LineKMeansOptions, line_kmeans, line_kmeans_fit
from dpp_hypergraphs.errors import ContractViolation
from dpp_hypergraphs.metrics.accuracy import clustering_accuracy
from dpp_hypergraphs.simulation.generators import clustered_latent_config
from dph_pydantic_shim import ValidationError
from tests.fixtures.config_fixtures import random_signs


@pytest.fixture(scope="module")
def two_axis_directions() -> np.ndarray:
    """Twenty unit rows near the x and y axes, with random orientation along each axis."""
    rng = np.random.default_rng(31)
    axes = np.repeat(np.eye(3)[:2], 10, axis=0)
    noisy = axes + 0.05 * rng.normal(size=axes.shape)
    noisy *= random_signs(20, seed=31)[:, None]
    return noisy / np.linalg.norm(noisy, axis=1, keepdims=True)


def test_lines_are_recovered(two_axis_directions: np.ndarray) -> None:  # noqa: D
    labels = line_kmeans(two_axis_directions, 2, LineKMeansOptions(seed=4))
    assert clustering_accuracy(labels, np.repeat([0, 1], 10)) == 1.0


def test_cost_never_increases(two_axis_directions: np.ndarray) -> None:  # noqa: D
    result = line_kmeans_fit(two_axis_directions, 3, LineKMeansOptions(n_starts=3, seed=2))
    assert np.all(np.diff(result.cost_history) <= 1e-12)
    assert result.cost == result.cost_history[-1]
    assert np.allclose(np.linalg.norm(result.centroids, axis=1), 1.0)


def test_reflecting_points_does_not_change_labels(two_axis_directions: np.ndarray) -> None:  # noqa: D
    options = LineKMeansOptions(n_starts=2, seed=9)
    reflected = random_signs(20, seed=5)[:, None] * two_axis_directions
    assert np.array_equal(line_kmeans(two_axis_directions, 2, options), line_kmeans(reflected, 2, options))


def test_single_cluster_takes_every_point(two_axis_directions: np.ndarray) -> None:  # noqa: D
    assert set(line_kmeans(two_axis_directions, 1).tolist()) == {0}


def test_line_kmeans_contract(two_axis_directions: np.ndarray) -> None:  # noqa: D
    with pytest.raises(ContractViolation):
        line_kmeans(two_axis_directions, 0)
    with pytest.raises(ContractViolation):
        line_kmeans(two_axis_directions, 21)
    with pytest.raises(ContractViolation):
        line_kmeans(2.0 * two_axis_directions, 2)
    with pytest.raises(ValidationError):
        LineKMeansOptions(n_starts=0)


def test_accuracy_on_concentrated_clusters() -> None:
    """Three orthogonal von Mises-Fisher clusters with concentration 10 are labelled with mean accuracy >= 0.95."""
    accuracies = []
    for seed in range(20):
        config, labels = clustered_latent_config(90, 3, 3, 10.0, np.random.default_rng(seed))
        estimated = line_kmeans(config.V, 3, LineKMeansOptions(seed=seed))
        accuracies.append(clustering_accuracy(estimated, labels))
    assert np.mean(accuracies) >= 0.95
    assert min(accuracies) >= 0.85
