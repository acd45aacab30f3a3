from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.constants import ZERO_NORM_THRESHOLD
from dpp_hypergraphs.kernel import LatentConfig

logger = logging.getLogger(__name__)


def project(raw_V: npt.NDArray, raw_beta: float, raw_alpha: npt.NDArray, floor_eps: float) -> LatentConfig:
    """Map an arbitrary point back onto the constraint set.

    Rows of V are scaled to unit length and beta and alpha are clamped below at floor_eps. Feasible inputs come back
    unchanged. A row whose norm is below the zero threshold has no direction; it is replaced by the first basis
    vector and a warning is logged.
    """
    V = np.array(raw_V, dtype=float)
    norms = np.linalg.norm(V, axis=1)
    degenerate = ~(norms >= ZERO_NORM_THRESHOLD)
    if np.any(degenerate):
        rows = np.flatnonzero(degenerate).tolist()
        logger.warning(f"Rows {rows} of V have (near) zero norm; replacing them with the first basis vector")
        V[degenerate] = 0.0
        V[degenerate, 0] = 1.0
        norms[degenerate] = 1.0
    V = V / norms[:, None]

    beta = max(float(raw_beta), floor_eps)
    alpha = np.maximum(np.asarray(raw_alpha, dtype=float), floor_eps)
    return LatentConfig(V=V, beta=beta, alpha=alpha)
