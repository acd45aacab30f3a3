"""Parameter errors up to the model's gauge freedoms.

The kernel is identified only up to L -> S L S for a sign matrix S, and V only up to V -> S V O for an orthogonal
O, so errors are measured after the best alignment that can be found.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy.linalg import orthogonal_procrustes

from dpp_hypergraphs.constants import EXHAUSTIVE_SIGN_SEARCH_MAX_NODES
from dpp_hypergraphs.errors import DimensionMismatchError, OracleSizeError
from dpp_hypergraphs.kernel import KernelMatrix, SignVector

logger = logging.getLogger(__name__)

MAX_ALTERNATIONS = 100


@dataclass(frozen=True, eq=False)
class AlignmentResult:
    """A gauge-aligned error together with the alignment that achieves it.

    Attributes:
        loss: Frobenius norm of the residual at the reported alignment.
        sign_vector: Diagonal of the sign matrix S.
        rotation: Orthogonal d x d matrix O, only set for errors between latent direction matrices.
    """

    loss: float
    sign_vector: SignVector
    rotation: Optional[npt.NDArray] = None


def _as_matrix(kernel: Union[KernelMatrix, npt.ArrayLike]) -> npt.NDArray:
    if isinstance(kernel, KernelMatrix):
        return kernel.L
    return np.asarray(kernel, dtype=float)


def _kernel_loss(L_hat: npt.NDArray, L_star: npt.NDArray, s: npt.NDArray) -> float:
    return float(np.linalg.norm(L_hat - s[:, None] * L_star * s[None, :]))


def _greedy_signs(weights: npt.NDArray, s: npt.NDArray) -> npt.NDArray:
    """Flip single signs while any flip lowers the loss, taking the best flip each time.

    With M = L_hat * L_star elementwise, flipping s_i changes the squared loss by 8 * s_i * sum_{j != i} M_ij s_j.
    """
    s = s.copy()
    off_diagonal = weights - np.diag(np.diag(weights))
    while True:
        change = 8.0 * s * (off_diagonal @ s)
        best = int(np.argmin(change))
        if change[best] >= 0.0:
            return s
        s[best] = -s[best]


def greedy_sign_search(L_hat: npt.NDArray, L_star: npt.NDArray) -> SignVector:
    """Best local minimum from two starts: all ones, and the signs of the leading eigenvector of L_hat * L_star."""
    weights = L_hat * L_star
    _, eigenvectors = np.linalg.eigh(weights)
    spectral_start = np.where(eigenvectors[:, -1] < 0, -1.0, 1.0)

    best_s = _greedy_signs(weights, np.ones(L_hat.shape[0]))
    best_loss = _kernel_loss(L_hat, L_star, best_s)
    candidate = _greedy_signs(weights, spectral_start)
    candidate_loss = _kernel_loss(L_hat, L_star, candidate)
    if candidate_loss < best_loss:
        best_s = candidate
    return SignVector(best_s)


def exhaustive_sign_search(L_hat: npt.NDArray, L_star: npt.NDArray) -> SignVector:
    """Global minimum over all sign vectors with s_0 = +1 (s and -s give the same kernel).

    Raises:
        OracleSizeError: beyond the exhaustive-search node guard.
    """
    n_v = L_hat.shape[0]
    if n_v > EXHAUSTIVE_SIGN_SEARCH_MAX_NODES:
        raise OracleSizeError(
            f"Exhaustive sign search is limited to {EXHAUSTIVE_SIGN_SEARCH_MAX_NODES} nodes, got {n_v}"
        )
    if n_v == 0:
        return SignVector(np.ones(0))

    weights = L_hat * L_star
    tails = np.array(list(itertools.product((1.0, -1.0), repeat=n_v - 1))).reshape(-1, n_v - 1)
    signs = np.hstack([np.ones((tails.shape[0], 1)), tails])
    # Minimizing the loss maximizes s^T M s; the first maximizer in enumeration order wins ties.
    scores = np.einsum("ki,ij,kj->k", signs, weights, signs)
    return SignVector(signs[int(np.argmax(scores))])


def loss_L(
    L_hat: Union[KernelMatrix, npt.ArrayLike], L_star: Union[KernelMatrix, npt.ArrayLike], exhaustive: bool = False
) -> AlignmentResult:
    """min over sign matrices S of ||L_hat - S L_star S||_F.

    The default greedy search returns a local minimum; `exhaustive=True` enumerates every sign vector and is only
    allowed up to the exhaustive-search node guard.
    """
    L_hat_array, L_star_array = _as_matrix(L_hat), _as_matrix(L_star)
    if L_hat_array.shape != L_star_array.shape:
        raise DimensionMismatchError(f"Kernel shapes differ: {L_hat_array.shape} vs {L_star_array.shape}")

    if exhaustive:
        signs = exhaustive_sign_search(L_hat_array, L_star_array)
    else:
        signs = greedy_sign_search(L_hat_array, L_star_array)
    return AlignmentResult(loss=_kernel_loss(L_hat_array, L_star_array, signs.s), sign_vector=signs)


def _alternate_signs_and_rotation(
    V_hat: npt.NDArray, V_star: npt.NDArray, s: npt.NDArray
) -> Tuple[float, npt.NDArray, npt.NDArray]:
    rotation = np.eye(V_hat.shape[1])
    for _ in range(MAX_ALTERNATIONS):
        rotation, _ = orthogonal_procrustes(s[:, None] * V_star, V_hat)
        rotated = V_star @ rotation
        new_s = np.where(np.sum(V_hat * rotated, axis=1) < 0, -1.0, 1.0)
        if np.array_equal(new_s, s):
            break
        s = new_s
    else:
        logger.warning(f"Sign/rotation alternation did not settle within {MAX_ALTERNATIONS} rounds")
    loss = float(np.linalg.norm(V_hat - s[:, None] * (V_star @ rotation)))
    return loss, s, rotation


def loss_V(V_hat: npt.ArrayLike, V_star: npt.ArrayLike) -> AlignmentResult:
    """min over sign matrices S and orthogonal O of ||V_hat - S V_star O||_F, by alternating minimization.

    Given S, O is the orthogonal Procrustes solution; given O, each sign is chosen row by row. The two steps alternate
    until the signs stop changing. The alternation runs from S = I and again from the greedy sign search between the
    Gram matrices V_hat V_hat^T and V_star V_star^T, which are related by S alone; the lower loss is reported, the
    S = I run on ties. Reflections are allowed in O.
    """
    V_hat_array = np.asarray(V_hat, dtype=float)
    V_star_array = np.asarray(V_star, dtype=float)
    if V_hat_array.shape != V_star_array.shape:
        raise DimensionMismatchError(f"Latent matrix shapes differ: {V_hat_array.shape} vs {V_star_array.shape}")

    gram_start = greedy_sign_search(V_hat_array @ V_hat_array.T, V_star_array @ V_star_array.T).s.copy()
    loss, s, rotation = min(
        (
            _alternate_signs_and_rotation(V_hat_array, V_star_array, start)
            for start in (np.ones(V_hat_array.shape[0]), gram_start)
        ),
        key=lambda run: run[0],
    )
    return AlignmentResult(loss=loss, sign_vector=SignVector(s), rotation=rotation)
