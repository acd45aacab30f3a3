"""Exact DPP sampling by eigenvector selection followed by sequential item selection with deflation."""
from __future__ import annotations

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.constants import DEFLATION_MASS_THRESHOLD
from dpp_hypergraphs.dpp.inference import Subset
from dpp_hypergraphs.errors import ContractViolation, DegenerateSamplingError
from dpp_hypergraphs.hypergraph import Hypergraph
from dpp_hypergraphs.kernel import KernelMatrix

logger = logging.getLogger(__name__)


def sample(kernel: KernelMatrix, rng: np.random.Generator) -> Subset:
    """Draw one subset from the DPP with kernel L.

    Eigenvector i is kept independently with probability lambda_i / (1 + lambda_i); the subset then has exactly as
    many nodes as eigenvectors were kept.

    Raises:
        DegenerateSamplingError: when the residual eigenspace mass vanishes before every pick is made.
    """
    eigenvalues = kernel.eigenvalues
    selected = rng.random(eigenvalues.size) < eigenvalues / (1.0 + eigenvalues)
    return _sample_from_eigenvectors(kernel.eigenvectors[:, selected], rng)


def sample_k(kernel: KernelMatrix, k: int, rng: np.random.Generator) -> Subset:
    """Draw one subset of exactly k nodes, with probability proportional to det(L_e) among subsets of size k.

    Raises:
        ContractViolation: when k is outside [0, n_v].
        DegenerateSamplingError: when e_k of the eigenvalues is zero, so no subset of size k has positive mass.
    """
    n_v = kernel.n_v
    if not 0 <= k <= n_v:
        raise ContractViolation(f"Sample size k must lie in [0, {n_v}], got {k}")
    if k == 0:
        return ()

    selected = _select_k_eigenvectors(kernel.eigenvalues, k, rng)
    return _sample_from_eigenvectors(kernel.eigenvectors[:, selected], rng)


def elementary_symmetric_polynomials(eigenvalues: npt.NDArray, k: int) -> Tuple[npt.NDArray, npt.NDArray]:
    """Rescaled table of elementary symmetric polynomials of leading eigenvalue prefixes.

    Returns `(scaled, log_scales)` with e_l(lambda_1, ..., lambda_n) = scaled[l, n] * exp(log_scales[l]) for
    0 <= l <= k and 0 <= n <= len(eigenvalues). Each row is divided by its maximum as it is built, so the table never
    overflows or underflows even when the raw values span hundreds of orders of magnitude.
    """
    n = eigenvalues.size
    scaled = np.zeros((k + 1, n + 1))
    log_scales = np.zeros(k + 1)
    scaled[0, :] = 1.0
    for order in range(1, k + 1):
        # e_l(first n) = e_l(first n-1) + lambda_n * e_{l-1}(first n-1)
        row = np.zeros(n + 1)
        row[1:] = np.cumsum(eigenvalues * scaled[order - 1, :-1])
        peak = float(np.max(row))
        if peak <= 0.0:
            log_scales[order] = -math.inf
            continue
        scaled[order] = row / peak
        log_scales[order] = log_scales[order - 1] + math.log(peak)
    return scaled, log_scales


def _select_k_eigenvectors(eigenvalues: npt.NDArray, k: int, rng: np.random.Generator) -> npt.NDArray:
    scaled, log_scales = elementary_symmetric_polynomials(eigenvalues, k)
    if not np.isfinite(log_scales[k]) or scaled[k, -1] <= 0.0:
        raise DegenerateSamplingError(f"e_{k} of the kernel eigenvalues is zero; no subset of size {k} is possible")

    chosen: List[int] = []
    remaining = k
    for index in range(eigenvalues.size - 1, -1, -1):
        if remaining == 0:
            break
        if remaining == index + 1:
            inclusion = 1.0
        elif scaled[remaining, index + 1] <= 0.0:
            inclusion = 0.0
        else:
            inclusion = (
                eigenvalues[index]
                * scaled[remaining - 1, index]
                / scaled[remaining, index + 1]
                * math.exp(log_scales[remaining - 1] - log_scales[remaining])
            )
        if rng.random() < inclusion:
            chosen.append(index)
            remaining -= 1
    return np.array(sorted(chosen), dtype=int)


def _sample_from_eigenvectors(basis: npt.NDArray, rng: np.random.Generator) -> Subset:
    """Pick one node per column of an orthonormal basis, projecting the picked node out after each pick."""
    n_v = basis.shape[0]
    V = np.array(basis, dtype=float)
    items: List[int] = []
    while V.shape[1] > 0:
        mass = np.sum(V**2, axis=1)
        total = float(np.sum(mass))
        if total < DEFLATION_MASS_THRESHOLD:
            raise DegenerateSamplingError(
                f"Residual eigenspace mass {total:.3e} fell below {DEFLATION_MASS_THRESHOLD:.0e} "
                f"with {V.shape[1]} picks left"
            )
        item = int(rng.choice(n_v, p=mass / total))
        items.append(item)

        # Eliminate the column with the largest weight on the picked node, then make the rest vanish on it.
        pivot = int(np.argmax(np.abs(V[item, :])))
        pivot_column = V[:, pivot]
        V = np.delete(V, pivot, axis=1)
        V = V - np.outer(pivot_column, V[item, :] / pivot_column[item])
        if V.shape[1] > 0:
            V, _ = np.linalg.qr(V)
    return tuple(sorted(items))


def generate_hypergraph(
    kernel: KernelMatrix,
    n_e: int,
    rng: np.random.Generator,
    size: Optional[int] = None,
    vocab: Optional[Sequence[str]] = None,
) -> Hypergraph:
    """Draw n_e i.i.d. hyperedges, with `sample` or, when `size` is given, with `sample_k`."""
    if n_e < 0:
        raise ContractViolation(f"Number of hyperedges must be nonnegative, got {n_e}")
    if size is None:
        edges = [sample(kernel, rng) for _ in range(n_e)]
    else:
        edges = [sample_k(kernel, size, rng) for _ in range(n_e)]
    logger.debug(f"Generated {n_e} hyperedges on {kernel.n_v} nodes")
    return Hypergraph(n_v=kernel.n_v, edges=tuple(edges), vocab=tuple(vocab) if vocab is not None else None)
