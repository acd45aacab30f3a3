"""Exact inference for the determinantal point process defined by a kernel.

Determinants are always taken through a Cholesky factorization with the log accumulated along the diagonal. A
principal submatrix that fails to factor is numerically singular; the functions below then report a log-probability
of `-inf` rather than raising, since the subset simply has (numerically) zero probability. A failure to factor
L + I itself means the kernel is not positive definite and raises `NonPositiveDefiniteKernelError`.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, NamedTuple, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg

from dpp_hypergraphs.constants import BRUTE_FORCE_MAX_NODES
from dpp_hypergraphs.errors import (
    ContractViolation,
    NonPositiveDefiniteKernelError,
    OracleSizeError,
)
from dpp_hypergraphs.kernel import KernelMatrix

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


def as_subset(e: Iterable[int], n_v: int) -> Subset:
    """Normalize a node collection into a sorted tuple of distinct indices in [0, n_v)."""
    subset = tuple(sorted({int(node) for node in e}))
    if subset and (subset[0] < 0 or subset[-1] >= n_v):
        raise ContractViolation(f"Subset {list(subset)} has node indices outside [0, {n_v})")
    return subset


def logdet_pd(matrix: npt.NDArray) -> float:
    """log det of a symmetric positive definite matrix; `-inf` when the factorization fails.

    The determinant of a 0 x 0 matrix is 1.
    """
    if matrix.shape[0] == 0:
        return 0.0
    try:
        factor = linalg.cholesky(matrix, lower=True, check_finite=False)
    except linalg.LinAlgError:
        return -math.inf
    diagonal = np.diag(factor)
    if not np.all(diagonal > 0):
        return -math.inf
    return float(2.0 * np.sum(np.log(diagonal)))


def _logdet_required(matrix: npt.NDArray, what: str) -> float:
    value = logdet_pd(matrix)
    if not np.isfinite(value):
        raise NonPositiveDefiniteKernelError(
            f"Cholesky factorization of {what} failed; the kernel is not positive definite"
        )
    return value


def log_normalizer(kernel: KernelMatrix) -> float:
    """log det(L + I), the log of the sum of det(L_e) over all subsets e."""
    return _logdet_required(kernel.L + np.eye(kernel.n_v), "L + I")


def log_prob(kernel: KernelMatrix, e: Iterable[int]) -> float:
    """log P(E = e) = log det(L_e) - log det(L + I).

    For the empty set det(L_e) is 1, so the result is -log det(L + I). A numerically singular L_e gives `-inf`.
    """
    subset = as_subset(e, kernel.n_v)
    return logdet_pd(kernel.submatrix(subset)) - log_normalizer(kernel)


@dataclass(frozen=True, eq=False)
class MarginalKernel:
    """K = I - (L + I)^-1, whose principal minors are inclusion probabilities P(e in E)."""

    K: npt.NDArray

    @property
    def n_v(self) -> int:  # noqa: D
        return int(self.K.shape[0])

    def inclusion_probabilities(self) -> npt.NDArray:
        """P(i in E) for each node, the diagonal of K."""
        return np.diag(self.K).copy()

    def log_inclusion_prob(self, e: Iterable[int]) -> float:
        """log P(e subset of E) = log det(K_e)."""
        subset = np.asarray(as_subset(e, self.n_v), dtype=int)
        return logdet_pd(self.K[np.ix_(subset, subset)])


def marginal_kernel(kernel: KernelMatrix) -> MarginalKernel:
    """Marginal kernel of the DPP with kernel L."""
    identity = np.eye(kernel.n_v)
    try:
        factor = linalg.cho_factor(kernel.L + identity, lower=True, check_finite=False)
    except linalg.LinAlgError as e:
        raise NonPositiveDefiniteKernelError("Could not factor L + I to invert it") from e
    K = identity - linalg.cho_solve(factor, identity, check_finite=False)
    K = (K + K.T) / 2.0
    K.setflags(write=False)
    return MarginalKernel(K=K)


def conditional_log_prob(kernel: KernelMatrix, e1: Iterable[int], e2: Iterable[int]) -> float:
    """log P(E = e2 | e1 subset of E) = log det(L_e2) - log det(L + I - I_e1).

    I_e1 is the diagonal indicator of e1, so the identity is only added on nodes outside e1.

    Raises:
        ContractViolation: when e1 is not contained in e2.
    """
    given = as_subset(e1, kernel.n_v)
    target = as_subset(e2, kernel.n_v)
    if not set(given) <= set(target):
        raise ContractViolation(f"Conditioning set {list(given)} is not contained in {list(target)}")
    return logdet_pd(kernel.submatrix(target)) - _conditional_log_normalizer(kernel, given)


def _conditional_log_normalizer(kernel: KernelMatrix, given: Subset) -> float:
    shifted = np.ones(kernel.n_v)
    shifted[list(given)] = 0.0
    return _logdet_required(kernel.L + np.diag(shifted), "L + I - I_e1")


class RankedNode(NamedTuple):
    """A completion candidate with log P(E = e + {node} | e subset of E)."""

    node: int
    log_prob: float


def complete_edge(kernel: KernelMatrix, e: Iterable[int], top_k: int) -> List[RankedNode]:
    """Rank the nodes outside e by the conditional probability that e plus that node is the whole hyperedge.

    Ties are broken by ascending node index. Asking for more candidates than there are nodes outside e returns the
    full ranking.

    Raises:
        ContractViolation: when e already covers every node or top_k < 1.
    """
    given = as_subset(e, kernel.n_v)
    candidates = np.setdiff1d(np.arange(kernel.n_v), np.asarray(given, dtype=int))
    if candidates.size == 0:
        raise ContractViolation("The given hyperedge already contains every node; nothing to complete")
    if top_k < 1:
        raise ContractViolation(f"top_k must be at least 1, got {top_k}")

    scores = _completion_scores(kernel, given, candidates)
    order = sorted(range(candidates.size), key=lambda position: (-scores[position], int(candidates[position])))
    return [RankedNode(node=int(candidates[position]), log_prob=float(scores[position])) for position in order[:top_k]]


def _completion_scores(kernel: KernelMatrix, given: Subset, candidates: npt.NDArray) -> npt.NDArray:
    """det(L_{e+i}) = det(L_e) * (L_ii - L_ie L_e^-1 L_ei), so one factorization of L_e serves every candidate."""
    denominator = _conditional_log_normalizer(kernel, given)
    diagonal = np.diag(kernel.L)[candidates]
    if not given:
        schur = diagonal
        logdet_given = 0.0
    else:
        index = np.asarray(given, dtype=int)
        L_given = kernel.L[np.ix_(index, index)]
        logdet_given = logdet_pd(L_given)
        if not np.isfinite(logdet_given):
            return np.full(candidates.size, -math.inf)
        cross = kernel.L[np.ix_(index, candidates)]
        factor = linalg.cho_factor(L_given, lower=True, check_finite=False)
        solved = linalg.cho_solve(factor, cross, check_finite=False)
        schur = diagonal - np.sum(cross * solved, axis=0)

    with np.errstate(divide="ignore", invalid="ignore"):
        log_schur = np.where(schur > 0, np.log(np.where(schur > 0, schur, 1.0)), -math.inf)
    return logdet_given + log_schur - denominator


def expected_size(kernel: KernelMatrix) -> float:
    """E|E| = sum_i lambda_i / (1 + lambda_i) over the eigenvalues of L, which equals trace(K)."""
    eigenvalues = kernel.eigenvalues
    return float(np.sum(eigenvalues / (1.0 + eigenvalues)))


def subset_from_mask(mask: int, n_v: int) -> Subset:
    """Nodes whose bits are set in `mask`; bit i stands for node i."""
    return tuple(node for node in range(n_v) if mask >> node & 1)


def mask_from_subset(e: Iterable[int]) -> int:  # noqa: D
    mask = 0
    for node in e:
        mask |= 1 << int(node)
    return mask


@dataclass(frozen=True, eq=False)
class SubsetDistribution:
    """Probabilities of all 2^n_v subsets, indexed by bitmask (bit i set iff node i is in the subset)."""

    n_v: int
    probabilities: npt.NDArray

    def probability(self, e: Iterable[int]) -> float:  # noqa: D
        return float(self.probabilities[mask_from_subset(as_subset(e, self.n_v))])

    @cached_property
    def sizes(self) -> npt.NDArray:
        """Cardinality of the subset behind each bitmask."""
        masks = np.arange(self.probabilities.size)
        return np.array([bin(mask).count("1") for mask in masks], dtype=int)

    def total(self) -> float:  # noqa: D
        return float(np.sum(self.probabilities))

    def expected_size(self) -> float:
        """Sum over subsets of |e| * P(E = e)."""
        return float(np.sum(self.sizes * self.probabilities))

    def inclusion_probability(self, e: Iterable[int]) -> float:
        """P(e subset of E), summing the probabilities of every superset of e."""
        mask = mask_from_subset(as_subset(e, self.n_v))
        masks = np.arange(self.probabilities.size)
        return float(np.sum(self.probabilities[(masks & mask) == mask]))

    def marginals(self) -> npt.NDArray:
        """P(i in E) for each node."""
        return np.array([self.inclusion_probability((node,)) for node in range(self.n_v)])

    def restricted_to_size(self, k: int) -> npt.NDArray:
        """Distribution over bitmasks conditioned on |E| = k; masks of other sizes get zero."""
        restricted = np.where(self.sizes == k, self.probabilities, 0.0)
        mass = np.sum(restricted)
        if mass <= 0:
            raise ContractViolation(f"No probability mass on subsets of size {k}")
        return restricted / mass


def brute_force_distribution(kernel: KernelMatrix) -> SubsetDistribution:
    """Enumerate P(E = e) = det(L_e) / det(L + I) over every subset.

    Raises:
        OracleSizeError: when n_v exceeds the enumeration guard.
    """
    if kernel.n_v > BRUTE_FORCE_MAX_NODES:
        raise OracleSizeError(
            f"Exhaustive enumeration is limited to {BRUTE_FORCE_MAX_NODES} nodes, the kernel has {kernel.n_v}"
        )
    normalizer = log_normalizer(kernel)
    probabilities = np.empty(2**kernel.n_v)
    for mask in range(probabilities.size):
        subset = subset_from_mask(mask, kernel.n_v)
        probabilities[mask] = math.exp(logdet_pd(kernel.submatrix(subset)) - normalizer)
    logger.debug(f"Enumerated {probabilities.size} subsets, total probability {np.sum(probabilities):.15f}")
    return SubsetDistribution(n_v=kernel.n_v, probabilities=probabilities)
