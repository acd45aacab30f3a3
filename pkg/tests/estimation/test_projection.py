import logging

import numpy as np
import pytest

from dpp_hypergraphs.estimation.projection import project
from dpp_hypergraphs.kernel import LatentConfig


def test_feasible_point_is_unchanged(small_random_config: LatentConfig) -> None:  # noqa: D
    projected = project(
        small_random_config.V, small_random_config.beta, small_random_config.alpha, floor_eps=1e-8
    )
    assert projected.allclose(small_random_config, atol=1e-15)


def test_rows_are_rescaled_and_scalars_clamped() -> None:  # noqa: D
    projected = project(np.array([[3.0, 4.0], [0.0, -2.0]]), -1.0, np.array([0.5, -3.0]), floor_eps=1e-3)
    assert np.allclose(projected.V, [[0.6, 0.8], [0.0, -1.0]])
    assert projected.beta == 1e-3
    assert np.allclose(projected.alpha, [0.5, 1e-3])


def test_zero_row_falls_back_to_first_basis_vector(caplog: pytest.LogCaptureFixture) -> None:  # noqa: D
    with caplog.at_level(logging.WARNING):
        projected = project(np.array([[0.0, 0.0, 0.0], [0.0, 2.0, 0.0]]), 1.0, np.ones(2), floor_eps=1e-8)
    assert np.allclose(projected.V, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert "Rows [0]" in caplog.text


def test_projection_is_idempotent() -> None:  # noqa: D
    rng = np.random.default_rng(4)
    once = project(rng.normal(size=(5, 3)), 0.3, rng.normal(size=5), floor_eps=1e-6)
    twice = project(once.V, once.beta, once.alpha, floor_eps=1e-6)
    assert twice.allclose(once, atol=1e-15)
