import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpp_hypergraphs.constants import EIGENVALUE_TOLERANCE
from dpp_hypergraphs.dpp.inference import brute_force_distribution
from dpp_hypergraphs.errors import (
    ConfigValidationException,
    ContractViolation,
    DimensionMismatchError,
)
from dpp_hypergraphs.kernel import (
    KernelMatrix,
    LatentConfig,
    SignVector,
    build_kernel,
    sign_conjugate,
)
from tests.fixtures.config_fixtures import random_config, random_signs

shapes = st.integers(min_value=2, max_value=6).flatmap(
    lambda n_v: st.tuples(st.just(n_v), st.integers(min_value=1, max_value=n_v - 1))
)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_collinear_rows_give_positive_coupling(collinear_pair_config: LatentConfig) -> None:  # noqa: D
    assert np.array_equal(build_kernel(collinear_pair_config).L, [[2.0, 1.0], [1.0, 2.0]])


def test_opposite_rows_give_negative_coupling(signed_pair_config: LatentConfig) -> None:  # noqa: D
    assert np.array_equal(build_kernel(signed_pair_config).L, [[2.0, -1.0], [-1.0, 2.0]])


def test_kernel_entries_are_inner_products(three_node_config: LatentConfig) -> None:  # noqa: D
    L = build_kernel(three_node_config).L
    assert np.allclose(np.diag(L), [2.5, 2.5, 2.5])
    assert L[0, 2] == pytest.approx(2.0)
    assert L[0, 1] == pytest.approx(0.0)
    assert L[1, 2] == pytest.approx(0.0)


def test_build_kernel_rejects_invalid_config() -> None:  # noqa: D
    config = LatentConfig(V=np.array([[0.9], [1.0]]), beta=1.0, alpha=np.array([1.0, 1.0]))
    with pytest.raises(ConfigValidationException, match=r"V\[0\]"):
        build_kernel(config)


def test_parameter_count(small_random_config: LatentConfig) -> None:  # noqa: D
    assert small_random_config.n_parameters == 6 * 2 + 1


def test_config_arrays_are_read_only(signed_pair_config: LatentConfig) -> None:  # noqa: D
    with pytest.raises(ValueError):
        signed_pair_config.V[0, 0] = 0.0


def test_identity_and_global_flip_leave_kernel_unchanged(collinear_pair_kernel: KernelMatrix) -> None:  # noqa: D
    assert np.array_equal(sign_conjugate(collinear_pair_kernel, SignVector.ones(2)).L, collinear_pair_kernel.L)
    assert np.array_equal(sign_conjugate(collinear_pair_kernel, SignVector(-np.ones(2))).L, collinear_pair_kernel.L)


def test_single_flip_negates_off_diagonal(collinear_pair_kernel: KernelMatrix) -> None:  # noqa: D
    flipped = sign_conjugate(collinear_pair_kernel, SignVector(np.array([1.0, -1.0])))
    assert np.array_equal(flipped.L, [[2.0, -1.0], [-1.0, 2.0]])


def test_sign_vector_length_must_match(collinear_pair_kernel: KernelMatrix) -> None:  # noqa: D
    with pytest.raises(DimensionMismatchError):
        sign_conjugate(collinear_pair_kernel, SignVector.ones(3))


def test_sign_vector_entries_must_be_unit() -> None:  # noqa: D
    with pytest.raises(ContractViolation):
        SignVector(np.array([1.0, 0.0]))


def test_sign_vector_flip() -> None:  # noqa: D
    assert SignVector.ones(3).flipped(1) == SignVector(np.array([1.0, -1.0, 1.0]))


def test_kernel_matrix_must_be_square() -> None:  # noqa: D
    with pytest.raises(DimensionMismatchError):
        KernelMatrix(np.ones((2, 3)))


def test_kernel_matrix_must_be_symmetric() -> None:  # noqa: D
    with pytest.raises(ContractViolation):
        KernelMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_eigenvalues_are_sorted_and_match_matrix(collinear_pair_kernel: KernelMatrix) -> None:  # noqa: D
    assert np.allclose(collinear_pair_kernel.eigenvalues, [3.0, 1.0])
    vectors = collinear_pair_kernel.eigenvectors
    reconstructed = vectors @ np.diag(collinear_pair_kernel.eigenvalues) @ vectors.T
    assert np.allclose(reconstructed, collinear_pair_kernel.L)


@settings(max_examples=25, deadline=None)
@given(shape=shapes, seed=seeds)
def test_kernel_is_positive_definite_with_alpha_floor(shape: tuple, seed: int) -> None:  # noqa: D
    n_v, d = shape
    config = random_config(n_v, d, seed)
    kernel = build_kernel(config)
    assert np.array_equal(kernel.L, kernel.L.T)
    assert kernel.eigenvalues[-1] >= float(np.min(config.alpha)) - EIGENVALUE_TOLERANCE


@settings(max_examples=25, deadline=None)
@given(shape=shapes, seed=seeds)
def test_sign_conjugation_preserves_every_principal_minor(shape: tuple, seed: int) -> None:  # noqa: D
    n_v, d = shape
    kernel = build_kernel(random_config(n_v, d, seed))
    conjugated = sign_conjugate(kernel, SignVector(random_signs(n_v, seed)))
    for size in range(1, n_v + 1):
        for subset in itertools.combinations(range(n_v), size):
            assert np.linalg.det(conjugated.submatrix(subset)) == pytest.approx(
                np.linalg.det(kernel.submatrix(subset)), rel=1e-9, abs=1e-12
            )
    assert np.allclose(
        brute_force_distribution(conjugated).probabilities, brute_force_distribution(kernel).probabilities
    )


@settings(max_examples=25, deadline=None)
@given(shape=shapes, seed=seeds)
def test_sign_conjugation_is_an_involution(shape: tuple, seed: int) -> None:  # noqa: D
    n_v, d = shape
    kernel = build_kernel(random_config(n_v, d, seed))
    signs = SignVector(random_signs(n_v, seed))
    assert np.array_equal(sign_conjugate(sign_conjugate(kernel, signs), signs).L, kernel.L)


def test_reflecting_rows_conjugates_the_kernel(small_random_config: LatentConfig) -> None:  # noqa: D
    signs = SignVector(random_signs(small_random_config.n_v, 11))
    reflected = build_kernel(small_random_config.with_signs(signs))
    assert np.allclose(reflected.L, sign_conjugate(build_kernel(small_random_config), signs).L)
