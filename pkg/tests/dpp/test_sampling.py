import math
from typing import List, Optional, Tuple

import numpy as np
import pytest
from scipy.stats import chisquare

from dpp_hypergraphs.dpp.inference import brute_force_distribution, expected_size, mask_from_subset
from dpp_hypergraphs.dpp.sampling import (
    elementary_symmetric_polynomials,
    generate_hypergraph,
    sample,
    sample_k,
)
from dpp_hypergraphs.errors import ContractViolation, DegenerateSamplingError
from dpp_hypergraphs.kernel import KernelMatrix, LatentConfig, build_kernel
from tests.fixtures.config_fixtures import random_config

N_DRAWS = 4000
CHI_SQUARE_DRAWS = 3000


def _frequencies(draws: list, n_v: int) -> np.ndarray:
    counts = np.zeros(2**n_v)
    for draw in draws:
        counts[mask_from_subset(draw)] += 1
    return counts / len(draws)


def _assert_within_four_standard_errors(observed: np.ndarray, expected: np.ndarray, n: int) -> None:
    standard_errors = np.sqrt(expected * (1.0 - expected) / n)
    assert np.all(np.abs(observed - expected) <= 4.0 * standard_errors + 1e-12)


def test_elementary_symmetric_polynomials() -> None:  # noqa: D
    scaled, log_scales = elementary_symmetric_polynomials(np.array([1.0, 2.0, 3.0]), 3)
    values = scaled[:, -1] * np.exp(log_scales)
    assert np.allclose(values, [1.0, 6.0, 11.0, 6.0])


def test_elementary_symmetric_polynomials_of_prefixes() -> None:  # noqa: D
    scaled, log_scales = elementary_symmetric_polynomials(np.array([1.0, 2.0, 3.0]), 2)
    # e_2 of the prefixes (), (1), (1, 2), (1, 2, 3).
    assert np.allclose(scaled[2] * math.exp(log_scales[2]), [0.0, 0.0, 2.0, 11.0])


def test_elementary_symmetric_polynomials_stay_finite_at_extreme_scales() -> None:  # noqa: D
    eigenvalues = np.full(200, 1e6)
    scaled, log_scales = elementary_symmetric_polynomials(eigenvalues, 150)
    assert np.all(np.isfinite(scaled))
    assert np.all(np.isfinite(log_scales))
    expected = math.lgamma(201) - math.lgamma(151) - math.lgamma(51) + 150 * math.log(1e6)
    assert log_scales[150] + math.log(scaled[150, -1]) == pytest.approx(expected, rel=1e-10)


def test_sample_matches_enumeration(collinear_pair_kernel: KernelMatrix, three_node_config: LatentConfig) -> None:
    """Subset frequencies from the sampler agree with exact probabilities."""
    for kernel in (collinear_pair_kernel, build_kernel(three_node_config)):
        rng = np.random.default_rng(11)
        draws = [sample(kernel, rng) for _ in range(N_DRAWS)]
        expected = brute_force_distribution(kernel).probabilities
        _assert_within_four_standard_errors(_frequencies(draws, kernel.n_v), expected, N_DRAWS)


def test_sample_k_matches_size_conditioned_enumeration(three_node_config: LatentConfig) -> None:  # noqa: D
    kernel = build_kernel(three_node_config)
    rng = np.random.default_rng(12)
    draws = [sample_k(kernel, 2, rng) for _ in range(N_DRAWS)]
    assert all(len(draw) == 2 for draw in draws)
    expected = brute_force_distribution(kernel).restricted_to_size(2)
    _assert_within_four_standard_errors(_frequencies(draws, kernel.n_v), expected, N_DRAWS)


def test_sample_k_edge_sizes(small_random_config: LatentConfig) -> None:  # noqa: D
    kernel = build_kernel(small_random_config)
    rng = np.random.default_rng(3)
    assert sample_k(kernel, 0, rng) == ()
    assert sample_k(kernel, kernel.n_v, rng) == tuple(range(kernel.n_v))


def test_sample_k_contract(collinear_pair_kernel: KernelMatrix) -> None:  # noqa: D
    rng = np.random.default_rng(0)
    with pytest.raises(ContractViolation):
        sample_k(collinear_pair_kernel, 3, rng)
    with pytest.raises(ContractViolation):
        sample_k(collinear_pair_kernel, -1, rng)


def test_sample_k_beyond_the_rank_is_degenerate() -> None:  # noqa: D
    with pytest.raises(DegenerateSamplingError):
        sample_k(KernelMatrix(np.diag([1.0, 0.0])), 2, np.random.default_rng(0))


def test_sampling_is_reproducible(small_random_config: LatentConfig) -> None:  # noqa: D
    kernel = build_kernel(small_random_config)
    first = generate_hypergraph(kernel, 50, np.random.default_rng(99))
    second = generate_hypergraph(kernel, 50, np.random.default_rng(99))
    assert first.edges == second.edges


def test_mean_edge_size_matches_expected_size(small_random_config: LatentConfig) -> None:  # noqa: D
    kernel = build_kernel(small_random_config)
    hypergraph = generate_hypergraph(kernel, N_DRAWS, np.random.default_rng(5))
    sizes = hypergraph.edge_sizes()
    standard_error = float(np.std(sizes)) / math.sqrt(N_DRAWS)
    assert abs(float(np.mean(sizes)) - expected_size(kernel)) <= 4.0 * standard_error


def test_generate_hypergraph_of_fixed_size_with_labels(collinear_pair_kernel: KernelMatrix) -> None:  # noqa: D
    hypergraph = generate_hypergraph(collinear_pair_kernel, 5, np.random.default_rng(1), size=1, vocab=["x", "y"])
    assert hypergraph.n_e == 5
    assert hypergraph.vocab == ("x", "y")
    assert set(hypergraph.edge_sizes().tolist()) == {1}


def test_generate_hypergraph_contract(collinear_pair_kernel: KernelMatrix) -> None:  # noqa: D
    assert generate_hypergraph(collinear_pair_kernel, 0, np.random.default_rng(1)).n_e == 0
    with pytest.raises(ContractViolation):
        generate_hypergraph(collinear_pair_kernel, -1, np.random.default_rng(1))


def _pooled_counts(draws: list, probabilities: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Observed and expected counts per subset, with cells expecting fewer than five draws pooled into one."""
    observed = np.zeros(probabilities.size)
    for draw in draws:
        observed[mask_from_subset(draw)] += 1
    expected = probabilities * len(draws)
    sparse = expected < 5.0
    if sparse.any():
        observed = np.append(observed[~sparse], observed[sparse].sum())
        expected = np.append(expected[~sparse], expected[sparse].sum())
    return observed, expected * observed.sum() / expected.sum()


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_samplers_pass_chi_square_goodness_of_fit(seed: int) -> None:
    """Draws from `sample` and `sample_k` fit the enumerated (size-conditioned) distribution of a random kernel."""
    kernel = build_kernel(random_config(5, 2, seed=100 + seed))
    distribution = brute_force_distribution(kernel)
    rng = np.random.default_rng(seed)
    targets: List[Tuple[Optional[int], np.ndarray]] = [(None, distribution.probabilities)]
    targets += [(k, distribution.restricted_to_size(k)) for k in (1, 2, 3)]
    for k, probabilities in targets:
        if k is None:
            draws = [sample(kernel, rng) for _ in range(CHI_SQUARE_DRAWS)]
        else:
            draws = [sample_k(kernel, k, rng) for _ in range(CHI_SQUARE_DRAWS)]
        observed, expected = _pooled_counts(draws, probabilities)
        assert chisquare(observed, expected).pvalue > 1e-3, f"k={k}"
