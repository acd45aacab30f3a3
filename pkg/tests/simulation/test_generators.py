import math

import numpy as np
import pytest

from dpp_hypergraphs.errors import ContractViolation
from dpp_hypergraphs.simulation.generators import (
    cluster_means,
    clustered_latent_config,
    gen_alpha,
    sample_uniform_sphere,
    sample_vmf,
    uniform_latent_config,
)
from dpp_hypergraphs.validations.validator import validate_config

N_DRAWS = 4000


def test_sphere_draws_are_unit_rows() -> None:  # noqa: D
    draws = sample_uniform_sphere(3, 50, np.random.default_rng(0))
    assert draws.shape == (50, 3)
    assert np.allclose(np.linalg.norm(draws, axis=1), 1.0)
    with pytest.raises(ContractViolation):
        sample_uniform_sphere(0, 5, np.random.default_rng(0))


def test_vmf_mean_cosine_on_the_two_sphere() -> None:
    """On S^2 the mean cosine to the mean direction is coth(kappa) - 1 / kappa."""
    kappa = 10.0
    draws = sample_vmf(np.array([0.0, 0.0, 1.0]), kappa, N_DRAWS, np.random.default_rng(1))
    assert np.allclose(np.linalg.norm(draws, axis=1), 1.0)
    cosines = draws[:, 2]
    expected = 1.0 / math.tanh(kappa) - 1.0 / kappa
    assert abs(float(np.mean(cosines)) - expected) <= 4.0 * float(np.std(cosines)) / math.sqrt(N_DRAWS)


def test_vmf_on_the_zero_sphere() -> None:
    """With d = 1 the draw is +mu with probability 1 / (1 + exp(-2 kappa))."""
    kappa = 0.5
    draws = sample_vmf(np.array([1.0]), kappa, N_DRAWS, np.random.default_rng(2))
    assert set(np.unique(draws).tolist()) <= {-1.0, 1.0}
    p = 1.0 / (1.0 + math.exp(-2.0 * kappa))
    assert abs(float(np.mean(draws > 0)) - p) <= 4.0 * math.sqrt(p * (1 - p) / N_DRAWS)


def test_vmf_without_concentration_is_uniform() -> None:  # noqa: D
    draws = sample_vmf(np.array([1.0, 0.0]), 0.0, N_DRAWS, np.random.default_rng(3))
    assert abs(float(np.mean(draws[:, 0]))) <= 4.0 * math.sqrt(0.5 / N_DRAWS)


def test_vmf_contract() -> None:  # noqa: D
    rng = np.random.default_rng(0)
    with pytest.raises(ContractViolation):
        sample_vmf(np.array([1.0, 1.0]), 1.0, 3, rng)
    with pytest.raises(ContractViolation):
        sample_vmf(np.array([1.0, 0.0]), -1.0, 3, rng)


def test_alpha_range() -> None:  # noqa: D
    alpha = gen_alpha(1000, np.random.default_rng(4))
    assert np.all(alpha > 0.05**2)
    assert np.all(alpha < 0.2**2)


def test_uniform_config_is_valid() -> None:  # noqa: D
    config = uniform_latent_config(12, 3, np.random.default_rng(5), beta=2.0)
    assert validate_config(config) == []
    assert config.beta == 2.0


def test_cluster_means() -> None:  # noqa: D
    assert np.array_equal(cluster_means(2, 3), np.eye(3)[:2])
    drawn = cluster_means(4, 2, np.random.default_rng(6))
    assert np.allclose(np.linalg.norm(drawn, axis=1), 1.0)
    with pytest.raises(ContractViolation):
        cluster_means(4, 2)


def test_clustered_config() -> None:  # noqa: D
    config, labels = clustered_latent_config(30, 3, 3, 50.0, np.random.default_rng(7))
    assert validate_config(config) == []
    assert labels.shape == (30,)
    assert set(labels.tolist()) <= {0, 1, 2}
    # Concentrated clusters: each node is close to its cluster's basis axis.
    assert np.all(np.abs(config.V[np.arange(30), labels]) > 0.7)


def test_generators_are_reproducible() -> None:  # noqa: D
    first, first_labels = clustered_latent_config(10, 2, 2, 5.0, np.random.default_rng(8))
    second, second_labels = clustered_latent_config(10, 2, 2, 5.0, np.random.default_rng(8))
    assert first.allclose(second)
    assert np.array_equal(first_labels, second_labels)
