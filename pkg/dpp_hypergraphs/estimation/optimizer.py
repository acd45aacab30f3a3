"""Maximum-likelihood fitting by projected, monotone accelerated proximal gradient ascent.

Each restart runs the monotone scheme of Li and Lin for nonconvex problems, with the projection onto the constraint
set (unit rows of V, beta and alpha at least floor_eps) as the proximal map:

    y_k = x_k + (t_{k-1} / t_k) (z_k - x_k) + ((t_{k-1} - 1) / t_k) (x_k - x_{k-1})
    z_{k+1} = project(y_k + eta grad F_B(y_k))
    v_{k+1} = project(x_k + eta grad F_B(x_k))          (only when z_{k+1} does not beat x_k)
    x_{k+1} = z_{k+1} if F_B(z_{k+1}) >= F_B(x_k), else the better of z_{k+1} and v_{k+1}
    t_{k+1} = (sqrt(4 t_k^2 + 1) + 1) / 2

F_B is the mean log-likelihood of the current mini-batch B. Steps are found by backtracking on the sufficient-ascent
test F(p+) >= F(p) + <grad, p+ - p> - ||p+ - p||^2 / (2 eta), and the next iteration starts from
min(eta / backtrack_factor, step_size). Mini-batches come from a fresh random permutation each epoch; the full-data
objective is evaluated at every epoch boundary and drives both the stopping rule and the best-so-far trace.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from more_itertools import chunked

from dpp_hypergraphs.errors import (
    ContractViolation,
    EmptyHypergraphError,
    FitDivergenceError,
    NumericalError,
)
from dpp_hypergraphs.estimation.likelihood import (
    EdgeCounts,
    Gradient,
    ambient_kernel,
    group_edges,
    information_criteria,
    kernel_gradient,
    mean_log_likelihood,
    parameter_gradient,
)
from dpp_hypergraphs.estimation.options import (
    INIT_ALPHA_FLOOR,
    INIT_BETA,
    INIT_MAX_FREQUENCY,
    FitOptions,
    FitResult,
)
from dpp_hypergraphs.estimation.projection import project
from dpp_hypergraphs.hypergraph import Edge, Hypergraph
from dpp_hypergraphs.kernel import LatentConfig
from dpp_hypergraphs.metrics.parameters import empirical_marginals
from dpp_hypergraphs.simulation.generators import sample_uniform_sphere
from dpp_hypergraphs.validations.validator import LatentConfigValidator

logger = logging.getLogger(__name__)

# Guards the relative-change test against a zero denominator.
RELATIVE_CHANGE_FLOOR = 1e-12


def initial_config(hypergraph: Hypergraph, d: int, rng: np.random.Generator, floor_eps: float) -> LatentConfig:
    """Random directions with popularity-aligned alpha.

    Rows of V are uniform on the sphere and beta starts at 0.5. For a single node the inclusion probability is
    p = l / (1 + l) with l = alpha + beta, so alpha starts at p / (1 - p) - beta, with p the empirical inclusion
    frequency clipped to [floor_eps, 0.9]. Rare nodes would get a negative value; alpha is floored at 1e-2.
    """
    frequencies = np.clip(empirical_marginals(hypergraph), floor_eps, INIT_MAX_FREQUENCY)
    alpha = np.maximum(frequencies / (1.0 - frequencies) - INIT_BETA, INIT_ALPHA_FLOOR)
    V = sample_uniform_sphere(d, hypergraph.n_v, rng)
    return LatentConfig(V=V, beta=INIT_BETA, alpha=alpha)


class _BatchObjective:
    """Objective and gradient restricted to one batch of hyperedges."""

    def __init__(self, edges: Sequence[Edge]) -> None:  # noqa: D
        self._edge_counts: EdgeCounts = group_edges(edges)
        self._n_edges = len(edges)

    def value(self, point: LatentConfig) -> float:  # noqa: D
        L = ambient_kernel(point.V, point.beta, point.alpha)
        value = mean_log_likelihood(L, self._edge_counts, self._n_edges)
        return value if np.isfinite(value) else -math.inf

    def gradient(self, point: LatentConfig) -> Gradient:  # noqa: D
        L = ambient_kernel(point.V, point.beta, point.alpha)
        return parameter_gradient(point.V, point.beta, kernel_gradient(L, self._edge_counts, self._n_edges))


class _Step(NamedTuple):
    point: LatentConfig
    value: float
    eta: float


def _extrapolate(
    x: LatentConfig, x_prev: LatentConfig, z: LatentConfig, t_prev: float, t: float
) -> LatentConfig:
    toward_z = t_prev / t
    momentum = (t_prev - 1.0) / t

    def combine(current: np.ndarray, previous: np.ndarray, proposal: np.ndarray) -> np.ndarray:
        return current + toward_z * (proposal - current) + momentum * (current - previous)

    # Extrapolated points leave the constraint set, so they are carried as unvalidated configs.
    return LatentConfig(
        V=combine(x.V, x_prev.V, z.V),
        beta=float(combine(np.array(x.beta), np.array(x_prev.beta), np.array(z.beta))),
        alpha=combine(x.alpha, x_prev.alpha, z.alpha),
    )


@dataclass
class _RestartOutcome:
    config: Optional[LatentConfig]
    trace: List[float] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    diagnostic: str = ""

    @property
    def final_objective(self) -> float:  # noqa: D
        return self.trace[-1] if self.trace and self.config is not None else math.nan


class ProjectedAcceleratedGradient:
    """Runs one restart of the monotone accelerated scheme on a hypergraph."""

    def __init__(self, hypergraph: Hypergraph, options: FitOptions) -> None:  # noqa: D
        self._hypergraph = hypergraph
        self._options = options
        self._batch_size = options.resolved_batch_size(hypergraph.n_e)
        self._full_objective = _BatchObjective(hypergraph.edges)

    def _batches(self, rng: np.random.Generator) -> Iterator[Tuple[Edge, ...]]:
        """One epoch of mini-batches; full-batch mode draws no permutation."""
        edges = self._hypergraph.edges
        if self._batch_size is None:
            yield edges
            return
        order = rng.permutation(len(edges))
        for chunk in chunked(order.tolist(), self._batch_size):
            yield tuple(edges[index] for index in sorted(chunk))

    def _ascend(self, batch: _BatchObjective, start: LatentConfig, start_value: float, eta: float) -> Optional[_Step]:
        """Backtracking projected ascent step from `start`, or None when no step passes the test."""
        if not np.isfinite(start_value):
            return None
        try:
            grad = batch.gradient(start)
        except NumericalError:
            return None

        options = self._options
        for _ in range(options.max_backtracks + 1):
            candidate = project(
                start.V + eta * grad.V, start.beta + eta * grad.beta, start.alpha + eta * grad.alpha, options.floor_eps
            )
            value = batch.value(candidate)
            delta_V = candidate.V - start.V
            delta_beta = candidate.beta - start.beta
            delta_alpha = candidate.alpha - start.alpha
            inner = float(np.sum(grad.V * delta_V) + grad.beta * delta_beta + np.sum(grad.alpha * delta_alpha))
            distance_sq = float(np.sum(delta_V**2) + delta_beta**2 + np.sum(delta_alpha**2))
            if np.isfinite(value) and value >= start_value + inner - distance_sq / (2.0 * eta):
                return _Step(point=candidate, value=value, eta=eta)
            eta *= options.backtrack_factor
        return None

    def run(self, start: LatentConfig, rng: np.random.Generator, restart_index: int = 0) -> _RestartOutcome:
        """Fit from `start`, drawing mini-batch permutations from `rng`."""
        options = self._options
        x = x_prev = z = start
        t_prev, t = 0.0, 1.0
        eta = options.step_size

        previous_full = self._full_objective.value(x)
        if not np.isfinite(previous_full):
            return _RestartOutcome(config=None, diagnostic=f"restart {restart_index}: non-finite initial objective")
        best_value, best_config = previous_full, x
        outcome = _RestartOutcome(config=x, trace=[previous_full])

        epoch = 0
        while outcome.iterations < options.max_iters and not outcome.converged:
            for batch_edges in self._batches(rng):
                if outcome.iterations >= options.max_iters:
                    break
                batch = _BatchObjective(batch_edges)
                x_value = batch.value(x)
                y = _extrapolate(x, x_prev, z, t_prev, t)
                z_step = self._ascend(batch, y, batch.value(y), eta)

                x_prev = x
                if z_step is not None and z_step.value >= x_value:
                    chosen: Optional[_Step] = z_step
                else:
                    v_step = self._ascend(batch, x, x_value, eta)
                    steps = [step for step in (z_step, v_step) if step is not None]
                    chosen = max(steps, key=lambda step: step.value) if steps else None
                if chosen is not None:
                    x = chosen.point
                    eta = min(chosen.eta / options.backtrack_factor, options.step_size)
                else:
                    eta = max(eta * options.backtrack_factor, np.finfo(float).tiny)
                z = z_step.point if z_step is not None else x
                t_prev, t = t, (math.sqrt(4.0 * t * t + 1.0) + 1.0) / 2.0
                outcome.iterations += 1

            epoch += 1
            full_value = self._full_objective.value(x)
            if math.isnan(full_value):
                outcome.diagnostic = f"restart {restart_index}: objective became NaN in epoch {epoch}"
                outcome.config = None
                return outcome
            if full_value > best_value:
                best_value, best_config = full_value, x
            outcome.trace.append(best_value)
            relative_change = abs(full_value - previous_full) / max(abs(previous_full), RELATIVE_CHANGE_FLOOR)
            previous_full = full_value
            logger.debug(
                f"restart {restart_index} epoch {epoch}: objective {full_value:.10f}, best {best_value:.10f}, "
                f"relative change {relative_change:.3e}, step {eta:.3e}"
            )
            if relative_change < options.tol:
                outcome.converged = True

        outcome.config = best_config
        state = "converged" if outcome.converged else "hit the iteration cap"
        outcome.diagnostic = (
            f"restart {restart_index}: {state} after {outcome.iterations} iterations, objective {best_value:.10f}"
        )
        return outcome


def fit(hypergraph: Hypergraph, options: FitOptions, initial: Optional[LatentConfig] = None) -> FitResult:
    """Maximum-likelihood estimate of (V, beta, alpha), the best of `options.n_inits` restarts.

    Restart streams are spawned from `numpy.random.SeedSequence(options.seed)`; each stream draws the starting
    directions and the mini-batch permutations of its restart. When `initial` is given it replaces the random start
    of the first restart.

    Raises:
        EmptyHypergraphError: when no hyperedge has a node.
        ContractViolation: when d is not below the node count or `initial` does not match the hypergraph.
        FitDivergenceError: when every restart ends with a non-finite objective.
    """
    if hypergraph.n_nonempty == 0:
        raise EmptyHypergraphError("Fitting needs at least one nonempty hyperedge")
    if not options.d < hypergraph.n_v:
        raise ContractViolation(f"Latent dimension {options.d} must be below the node count {hypergraph.n_v}")
    if initial is not None:
        if initial.n_v != hypergraph.n_v or initial.d != options.d:
            raise ContractViolation(
                f"Initial config has shape {initial.V.shape}, expected ({hypergraph.n_v}, {options.d})"
            )
        LatentConfigValidator().checked_validations(initial)

    logger.debug(f"Fitting {hypergraph.n_e} hyperedges on {hypergraph.n_v} nodes with {options.to_pretty_json()}")
    optimizer = ProjectedAcceleratedGradient(hypergraph, options)
    outcomes: List[_RestartOutcome] = []
    for restart_index, child in enumerate(np.random.SeedSequence(options.seed).spawn(options.n_inits)):
        rng = np.random.default_rng(child)
        if initial is not None and restart_index == 0:
            start = initial
        else:
            start = initial_config(hypergraph, options.d, rng, options.floor_eps)
        outcome = optimizer.run(start, rng, restart_index)
        if outcome.config is None:
            logger.warning(f"Fit diverged: {outcome.diagnostic}")
        else:
            logger.info(outcome.diagnostic)
        outcomes.append(outcome)

    finished = [outcome for outcome in outcomes if outcome.config is not None and np.isfinite(outcome.final_objective)]
    diagnostics = tuple(outcome.diagnostic for outcome in outcomes)
    if not finished:
        raise FitDivergenceError(f"All {options.n_inits} restarts diverged", restart_diagnostics=diagnostics)

    best = max(finished, key=lambda outcome: outcome.final_objective)
    assert best.config is not None
    aic, bic = information_criteria(best.config.n_parameters, hypergraph.n_e, best.final_objective)
    return FitResult(
        config=best.config,
        objective_trace=tuple(best.trace),
        final_objective=best.final_objective,
        aic=aic,
        bic=bic,
        converged=best.converged,
        iterations_used=best.iterations,
        restart_objectives=tuple(outcome.final_objective for outcome in outcomes),
        restart_diagnostics=diagnostics,
        n_e=hypergraph.n_e,
        options=options,
    )
