"""Random latent configurations for synthetic experiments.

Every generator is a pure function of its arguments and the numpy Generator it is handed.
"""
from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.errors import ContractViolation
from dpp_hypergraphs.kernel import LatentConfig

# sqrt(alpha_i) = ALPHA_ROOT_SCALE * gamma_i + ALPHA_ROOT_OFFSET with gamma_i ~ Beta(1, 4).
ALPHA_ROOT_SCALE = 0.15
ALPHA_ROOT_OFFSET = 0.05
ALPHA_BETA_SHAPE = (1.0, 4.0)
DEFAULT_BETA = 1.0


def sample_uniform_sphere(d: int, n: int, rng: np.random.Generator) -> npt.NDArray:
    """n rows drawn uniformly from the unit sphere in R^d, as normalized standard Gaussian vectors."""
    if d < 1:
        raise ContractViolation(f"Dimension must be at least 1, got {d}")
    draws = rng.standard_normal((n, d))
    norms = np.linalg.norm(draws, axis=1)
    # A Gaussian draw of exactly zero has probability zero; redraw rather than divide by it.
    while np.any(norms == 0.0):
        zero = norms == 0.0
        draws[zero] = rng.standard_normal((int(np.sum(zero)), d))
        norms = np.linalg.norm(draws, axis=1)
    return draws / norms[:, None]


def sample_vmf(mu: npt.ArrayLike, kappa: float, n: int, rng: np.random.Generator) -> npt.NDArray:
    """n i.i.d. von Mises-Fisher draws with mean direction mu and concentration kappa.

    The cosine w = mu . v is drawn by Wood's rejection scheme, then combined with a uniform direction in the tangent
    space of mu. On the 0-sphere (d = 1) the draw is +mu with probability 1 / (1 + exp(-2 kappa)) and -mu otherwise.
    """
    mean = np.asarray(mu, dtype=float)
    if mean.ndim != 1 or not abs(float(np.linalg.norm(mean)) - 1.0) <= 1e-9:
        raise ContractViolation("Mean direction must be a unit vector")
    if kappa < 0:
        raise ContractViolation(f"Concentration must be nonnegative, got {kappa}")

    d = mean.size
    if d == 1:
        positive = rng.random(n) < 1.0 / (1.0 + math.exp(-2.0 * kappa))
        return np.where(positive, 1.0, -1.0)[:, None] * mean[None, :]

    w = _wood_cosines(kappa, d, n, rng)
    tangent = rng.standard_normal((n, d))
    tangent -= np.outer(tangent @ mean, mean)
    tangent /= np.linalg.norm(tangent, axis=1)[:, None]
    return w[:, None] * mean[None, :] + np.sqrt(np.clip(1.0 - w**2, 0.0, None))[:, None] * tangent


def _wood_cosines(kappa: float, d: int, n: int, rng: np.random.Generator) -> npt.NDArray:
    m = d - 1
    b = m / (math.sqrt(4.0 * kappa**2 + m**2) + 2.0 * kappa)
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + m * math.log(1.0 - x0**2)

    accepted = np.empty(0)
    while accepted.size < n:
        batch = max(n - accepted.size, 16)
        z = rng.beta(m / 2.0, m / 2.0, size=batch)
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        u = rng.random(batch)
        keep = kappa * w + m * np.log(1.0 - x0 * w) - c >= np.log(u)
        accepted = np.concatenate([accepted, w[keep]])
    return accepted[:n]


def gen_alpha(n: int, rng: np.random.Generator) -> npt.NDArray:
    """Popularities alpha_i = (0.15 * gamma_i + 0.05)^2 with gamma_i ~ Beta(1, 4), so 0.05^2 < alpha_i < 0.2^2."""
    gamma = rng.beta(*ALPHA_BETA_SHAPE, size=n)
    return (ALPHA_ROOT_SCALE * gamma + ALPHA_ROOT_OFFSET) ** 2


def uniform_latent_config(n_v: int, d: int, rng: np.random.Generator, beta: float = DEFAULT_BETA) -> LatentConfig:
    """Directions uniform on the sphere and Beta-transformed popularities."""
    V = sample_uniform_sphere(d, n_v, rng)
    return LatentConfig(V=V, beta=beta, alpha=gen_alpha(n_v, rng))


def cluster_means(n_clusters: int, d: int, rng: Optional[np.random.Generator] = None) -> npt.NDArray:
    """Orthogonal unit mean directions (leading basis vectors) when n_clusters <= d, else uniform random ones."""
    if n_clusters <= d:
        return np.eye(d)[:n_clusters]
    if rng is None:
        raise ContractViolation(f"{n_clusters} cluster means in R^{d} cannot be orthogonal; pass an rng to draw them")
    return sample_uniform_sphere(d, n_clusters, rng)


def clustered_latent_config(
    n_v: int,
    d: int,
    n_clusters: int,
    kappa: float,
    rng: np.random.Generator,
    beta: float = DEFAULT_BETA,
) -> Tuple[LatentConfig, npt.NDArray]:
    """Directions from von Mises-Fisher clusters, each node assigned to a cluster with equal probability.

    Returns the config and the true cluster label of each node.
    """
    means = cluster_means(n_clusters, d, rng)
    labels = rng.integers(n_clusters, size=n_v)
    V = np.empty((n_v, d))
    for cluster in range(n_clusters):
        members = np.flatnonzero(labels == cluster)
        if members.size:
            V[members] = sample_vmf(means[cluster], kappa, members.size, rng)
    return LatentConfig(V=V, beta=beta, alpha=gen_alpha(n_v, rng)), labels
