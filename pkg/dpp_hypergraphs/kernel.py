"""Parameter types of the latent model, kernel construction and the sign-conjugation symmetry.

Node indices are 0-based everywhere in the package; file formats and CLI output use vocabulary labels or these
0-based indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.constants import SYMMETRY_TOLERANCE
from dpp_hypergraphs.errors import ContractViolation, DimensionMismatchError
from dpp_hypergraphs.validations.validator import (  # noqa: F401
    LatentConfigValidator,
    validate_config,
)


def _frozen_array(values: npt.ArrayLike, dtype: type = float) -> npt.NDArray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LatentConfig:
    """The (V, beta, alpha) parameterization of the kernel L = beta * V V^T + diag(alpha).

    Attributes:
        V: n_v x d matrix of latent directions, one unit row per node.
        beta: Shared squared length of the latent positions.
        alpha: Per-node popularity, one positive entry per node.

    Construction does not check the invariants; use `validate_config` to list violations, `build_kernel` rejects
    invalid configs.
    """

    V: npt.NDArray
    beta: float
    alpha: npt.NDArray

    def __post_init__(self) -> None:  # noqa: D
        object.__setattr__(self, "V", _frozen_array(self.V))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "alpha", _frozen_array(self.alpha))

    @property
    def n_v(self) -> int:  # noqa: D
        return int(self.V.shape[0])

    @property
    def d(self) -> int:  # noqa: D
        return int(self.V.shape[1]) if self.V.ndim == 2 else 0

    @property
    def n_parameters(self) -> int:
        """Free parameters once the unit-row constraint is imposed: n_v * d + 1."""
        return self.n_v * self.d + 1

    def with_signs(self, s: SignVector) -> LatentConfig:
        """Flip the sign of each row of V by the matching entry of s; the kernel changes to S L S."""
        if s.n != self.n_v:
            raise DimensionMismatchError(f"Sign vector has {s.n} entries, config has {self.n_v} nodes")
        return LatentConfig(V=s.s[:, None] * self.V, beta=self.beta, alpha=self.alpha)

    def allclose(self, other: LatentConfig, atol: float = 0.0, rtol: float = 0.0) -> bool:
        """Field-by-field comparison; exact by default."""
        return (
            self.V.shape == other.V.shape
            and np.allclose(self.V, other.V, atol=atol, rtol=rtol)
            and np.isclose(self.beta, other.beta, atol=atol, rtol=rtol)
            and np.allclose(self.alpha, other.alpha, atol=atol, rtol=rtol)
        )


@dataclass(frozen=True, eq=False)
class SignVector:
    """A vector of +1/-1 entries, the diagonal of a sign matrix D."""

    s: npt.NDArray

    def __post_init__(self) -> None:  # noqa: D
        s = _frozen_array(self.s)
        if s.ndim != 1 or not np.all(np.abs(s) == 1.0):
            raise ContractViolation(f"Sign vector entries must be exactly +1 or -1, got {s.tolist()}")
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:  # noqa: D
        return int(self.s.shape[0])

    @staticmethod
    def ones(n: int) -> SignVector:  # noqa: D
        return SignVector(np.ones(n))

    @staticmethod
    def random(n: int, rng: np.random.Generator) -> SignVector:
        """Uniformly random sign vector."""
        return SignVector(rng.choice(np.array([-1.0, 1.0]), size=n))

    def flipped(self, index: int) -> SignVector:
        """Copy with the sign at `index` reversed."""
        s = self.s.copy()
        s[index] = -s[index]
        return SignVector(s)

    def __eq__(self, other: object) -> bool:  # noqa: D
        return isinstance(other, SignVector) and np.array_equal(self.s, other.s)

    def __hash__(self) -> int:  # noqa: D
        return hash(self.s.tobytes())


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """A symmetric n_v x n_v kernel with a lazily computed, cached eigendecomposition.

    The matrix is read-only after construction, so the cache never goes stale.
    """

    L: npt.NDArray

    def __post_init__(self) -> None:  # noqa: D
        L = np.array(self.L, dtype=float)
        if L.ndim != 2 or L.shape[0] != L.shape[1]:
            raise DimensionMismatchError(f"Kernel must be a square matrix, got shape {L.shape}")
        scale = max(1.0, float(np.max(np.abs(L)))) if L.size else 1.0
        asymmetry = float(np.max(np.abs(L - L.T))) if L.size else 0.0
        if asymmetry > SYMMETRY_TOLERANCE * scale:
            raise ContractViolation(f"Kernel must be symmetric, max |L - L^T| = {asymmetry:.3e}")
        object.__setattr__(self, "L", _frozen_array((L + L.T) / 2.0))

    @property
    def n_v(self) -> int:  # noqa: D
        return int(self.L.shape[0])

    @cached_property
    def _eigendecomposition(self) -> Tuple[npt.NDArray, npt.NDArray]:
        eigenvalues, eigenvectors = np.linalg.eigh(self.L)
        order = np.argsort(eigenvalues)[::-1]
        # Round-off can push eigenvalues of a PSD kernel slightly below zero.
        values = _frozen_array(np.clip(eigenvalues[order], 0.0, None))
        vectors = _frozen_array(eigenvectors[:, order])
        return values, vectors

    @property
    def eigenvalues(self) -> npt.NDArray:
        """Eigenvalues in nonincreasing order, clipped at zero."""
        return self._eigendecomposition[0]

    @property
    def eigenvectors(self) -> npt.NDArray:
        """Orthonormal eigenvectors as columns, matching the order of `eigenvalues`."""
        return self._eigendecomposition[1]

    def submatrix(self, e: Sequence[int]) -> npt.NDArray:
        """The principal submatrix L_e."""
        index = np.asarray(e, dtype=int)
        return self.L[np.ix_(index, index)]


def build_kernel(config: LatentConfig) -> KernelMatrix:
    """Build L = beta * V V^T + diag(alpha).

    Raises:
        ConfigValidationException: when the config breaks any invariant; the issues name the offending entries.
    """
    LatentConfigValidator().checked_validations(config)
    L = config.beta * (config.V @ config.V.T)
    L[np.diag_indices_from(L)] = config.alpha + config.beta
    return KernelMatrix(L)


def sign_conjugate(kernel: KernelMatrix, s: SignVector) -> KernelMatrix:
    """The kernel D L D for D = diag(s); every principal minor is unchanged."""
    if s.n != kernel.n_v:
        raise DimensionMismatchError(f"Sign vector has {s.n} entries, kernel has {kernel.n_v} nodes")
    return KernelMatrix(s.s[:, None] * kernel.L * s.s[None, :])
