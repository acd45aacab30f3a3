from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from typing_extensions import Literal

from dpp_hypergraphs.implementations.base import FrozenBaseModel
from dpp_hypergraphs.kernel import LatentConfig
from dph_pydantic_shim import validator

FULL_BATCH = "full"

# Starting values that the data does not inform.
INIT_BETA = 0.5
INIT_MAX_FREQUENCY = 0.9
INIT_ALPHA_FLOOR = 1e-2


class FitOptions(FrozenBaseModel):
    """Settings for maximum-likelihood fitting.

    Attributes:
        d: Latent dimension; must be below the node count of the hypergraph being fit.
        max_iters: Cap on mini-batch gradient iterations per restart.
        step_size: Initial (and largest) ascent step.
        backtrack_factor: Factor in (0, 1) the step shrinks by while the sufficient-ascent test fails.
        tol: Fitting stops once the full-data objective changes by less than this, relative, between epochs.
        batch_size: Hyperedges per mini-batch, or "full". Sizes at or above the hyperedge count mean "full".
        n_inits: Number of random restarts.
        floor_eps: Lower clamp applied to beta and alpha by the projection.
        seed: Master seed; restart streams are spawned from it.
        max_backtracks: Cap on step shrinks within one iteration.
    """

    d: int
    max_iters: int = 5000
    step_size: float = 0.05
    backtrack_factor: float = 0.5
    tol: float = 1e-7
    batch_size: Union[Literal["full"], int] = 256
    n_inits: int = 5
    floor_eps: float = 1e-8
    seed: int = 0
    max_backtracks: int = 50

    @validator("d", "max_iters", "n_inits", "max_backtracks")
    @classmethod
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be a positive integer, got {value}")
        return value

    @validator("step_size", "tol", "floor_eps")
    @classmethod
    def _positive_scalar(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"must be strictly positive, got {value}")
        return value

    @validator("backtrack_factor")
    @classmethod
    def _backtrack_factor_in_unit_interval(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError(f"must lie strictly between 0 and 1, got {value}")
        return value

    @validator("batch_size")
    @classmethod
    def _batch_size_positive(cls, value: Union[str, int]) -> Union[str, int]:
        if value != FULL_BATCH and int(value) < 1:
            raise ValueError(f"must be a positive integer or '{FULL_BATCH}', got {value}")
        return value

    @validator("seed")
    @classmethod
    def _seed_nonnegative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"must be nonnegative, got {value}")
        return value

    def resolved_batch_size(self, n_e: int) -> Optional[int]:
        """Mini-batch size for a hypergraph with n_e edges, or None for full-batch iterations."""
        if self.batch_size == FULL_BATCH or int(self.batch_size) >= n_e:
            return None
        return int(self.batch_size)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Outcome of fitting, for the best restart by full-data objective.

    Attributes:
        config: Estimated parameters.
        objective_trace: Best full-data mean log-likelihood seen so far, starting at the initialization and
            appended at every epoch boundary; nondecreasing.
        final_objective: Last entry of the trace.
        aic: 2 * (n_v * d + 1) - 2 * n_e * final_objective.
        bic: log(n_e) * (n_v * d + 1) - 2 * n_e * final_objective.
        converged: Whether the relative-change test passed before the iteration cap.
        iterations_used: Mini-batch iterations run by the best restart.
        restart_objectives: Final objective of every restart, in restart order; NaN for diverged ones.
        restart_diagnostics: One line per restart describing how it ended.
        n_e: Number of hyperedges fit.
        options: The options used.
    """

    config: LatentConfig
    objective_trace: Tuple[float, ...]
    final_objective: float
    aic: float
    bic: float
    converged: bool
    iterations_used: int
    restart_objectives: Tuple[float, ...]
    restart_diagnostics: Tuple[str, ...]
    n_e: int
    options: FitOptions

    @property
    def d(self) -> int:  # noqa: D
        return self.config.d
