from __future__ import annotations

from typing import TYPE_CHECKING, List, Sequence

import numpy as np

from dpp_hypergraphs.constants import ROW_NORM_TOLERANCE
from dpp_hypergraphs.validations.validator_helpers import (
    ParameterContext,
    ValidationError,
    ValidationIssue,
    ValidationRule,
    format_measured,
    validate_safely,
)

if TYPE_CHECKING:
    from dpp_hypergraphs.kernel import LatentConfig


class LatentShapeRule(ValidationRule["LatentConfig"]):
    """Checks that V is a matrix, alpha has one entry per row of V and 0 < d < n_v."""

    @classmethod
    @validate_safely(whats_being_done="checking the shapes of the latent configuration")
    def validate(cls, obj: LatentConfig) -> Sequence[ValidationIssue]:  # noqa: D
        issues: List[ValidationIssue] = []
        if obj.V.ndim != 2:
            issues.append(
                ValidationError(
                    context=ParameterContext(field_name="V", measured_value=f"ndim={obj.V.ndim}"),
                    message="V must be a two-dimensional matrix with one row per node",
                )
            )
            return issues

        n_v, d = obj.V.shape
        if obj.alpha.shape != (n_v,):
            issues.append(
                ValidationError(
                    context=ParameterContext(field_name="alpha", measured_value=f"shape={obj.alpha.shape}"),
                    message=f"alpha must have exactly one entry per node ({n_v})",
                )
            )
        if not 0 < d < n_v:
            issues.append(
                ValidationError(
                    context=ParameterContext(field_name="d", measured_value=str(d)),
                    message=f"latent dimension must satisfy 0 < d < n_v, with n_v = {n_v}",
                )
            )
        return issues


class UnitRowNormRule(ValidationRule["LatentConfig"]):
    """Checks that every row of V is a unit vector."""

    @classmethod
    @validate_safely(whats_being_done="checking that the rows of V have unit norm")
    def validate(cls, obj: LatentConfig) -> Sequence[ValidationIssue]:  # noqa: D
        issues: List[ValidationIssue] = []
        if obj.V.ndim != 2:
            return issues

        norms = np.linalg.norm(obj.V, axis=1)
        for row_index, norm in enumerate(norms):
            # Written so that NaN norms are reported too.
            if not abs(norm - 1.0) <= ROW_NORM_TOLERANCE:
                issues.append(
                    ValidationError(
                        context=ParameterContext(
                            field_name="V", index=row_index, measured_value=format_measured(float(norm))
                        ),
                        message=f"row {row_index} of V must have unit Euclidean norm",
                    )
                )
        return issues


class PositiveBetaRule(ValidationRule["LatentConfig"]):
    """Checks that the squared latent length is a finite positive number."""

    @classmethod
    @validate_safely(whats_being_done="checking that beta is positive")
    def validate(cls, obj: LatentConfig) -> Sequence[ValidationIssue]:  # noqa: D
        if np.isfinite(obj.beta) and obj.beta > 0:
            return []
        return [
            ValidationError(
                context=ParameterContext(field_name="beta", measured_value=format_measured(obj.beta)),
                message="beta must be strictly positive",
            )
        ]


class PositiveAlphaRule(ValidationRule["LatentConfig"]):
    """Checks that every popularity parameter is a finite positive number."""

    @classmethod
    @validate_safely(whats_being_done="checking that alpha is positive")
    def validate(cls, obj: LatentConfig) -> Sequence[ValidationIssue]:  # noqa: D
        issues: List[ValidationIssue] = []
        for node_index, value in enumerate(np.atleast_1d(obj.alpha)):
            if not (np.isfinite(value) and value > 0):
                issues.append(
                    ValidationError(
                        context=ParameterContext(
                            field_name="alpha", index=node_index, measured_value=format_measured(float(value))
                        ),
                        message="alpha must be strictly positive",
                    )
                )
        return issues
