from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from dpp_hypergraphs.enum_extension import assert_values_exhausted
from dpp_hypergraphs.errors import ContractViolation, FitDivergenceError, NumericalError
from dpp_hypergraphs.estimation.optimizer import fit
from dpp_hypergraphs.estimation.options import FitOptions, FitResult
from dpp_hypergraphs.hypergraph import Hypergraph
from dpp_hypergraphs.type_enums.selection_criterion import SelectionCriterion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DimensionSelection:
    """Outcome of choosing the latent dimension.

    Attributes:
        best_d: Candidate with the smallest criterion value; ties go to the smaller d.
        criterion: Criterion used to compare candidates.
        fits: Fit of every candidate that succeeded, by increasing d.
        failed: Error message of every candidate whose fit failed, by d.
    """

    best_d: int
    criterion: SelectionCriterion
    fits: Tuple[FitResult, ...]
    failed: Dict[int, str]


def criterion_value(result: FitResult, criterion: SelectionCriterion) -> float:  # noqa: D
    if criterion is SelectionCriterion.AIC:
        return result.aic
    elif criterion is SelectionCriterion.BIC:
        return result.bic
    else:
        assert_values_exhausted(criterion)


def select_dimension(
    hypergraph: Hypergraph,
    d_candidates: Sequence[int],
    options: FitOptions,
    criterion: SelectionCriterion = SelectionCriterion.AIC,
) -> DimensionSelection:
    """Fit every candidate dimension and keep the one with the smallest information criterion.

    `options.d` is replaced by each candidate in turn. Candidates whose fit fails numerically are left out and
    reported in `failed`.

    Raises:
        ContractViolation: when there are no candidates or a candidate is not in [1, n_v).
        FitDivergenceError: when every candidate fails.
    """
    candidates = sorted(set(int(d) for d in d_candidates))
    if not candidates:
        raise ContractViolation("Dimension selection needs at least one candidate")
    invalid = [d for d in candidates if not 0 < d < hypergraph.n_v]
    if invalid:
        raise ContractViolation(f"Candidate dimensions {invalid} are outside [1, {hypergraph.n_v})")

    fits = []
    failed: Dict[int, str] = {}
    for d in candidates:
        try:
            result = fit(hypergraph, options.with_updates(d=d))
        except NumericalError as e:
            logger.warning(f"Fit at d={d} failed and is excluded from selection: {e}")
            failed[d] = str(e)
            continue
        logger.info(f"d={d}: objective {result.final_objective:.10f}, AIC {result.aic:.4f}, BIC {result.bic:.4f}")
        fits.append(result)

    if not fits:
        raise FitDivergenceError(
            f"Every candidate dimension failed to fit: {candidates}",
            restart_diagnostics=[f"d={d}: {message}" for d, message in failed.items()],
        )
    # min() keeps the first minimum and fits are ordered by d, so ties go to the smaller d.
    best = min(fits, key=lambda result: criterion_value(result, criterion))
    return DimensionSelection(best_d=best.d, criterion=criterion, fits=tuple(fits), failed=failed)
