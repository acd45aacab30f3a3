from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Generic, List, Sequence

from dpp_hypergraphs.errors import ConfigValidationException
from dpp_hypergraphs.validations.hypergraph import (
    EdgeIndexRangeRule,
    StrictlyIncreasingEdgeRule,
    VocabularyRule,
)
from dpp_hypergraphs.validations.latent_config import (
    LatentShapeRule,
    PositiveAlphaRule,
    PositiveBetaRule,
    UnitRowNormRule,
)
from dpp_hypergraphs.validations.validator_helpers import (
    ConfigValidationResults,
    ValidatedT,
    ValidationIssue,
    ValidationRule,
)

if TYPE_CHECKING:
    from dpp_hypergraphs.hypergraph import Hypergraph
    from dpp_hypergraphs.kernel import LatentConfig

logger = logging.getLogger(__name__)


class RuleSetValidator(Generic[ValidatedT]):
    """Runs a fixed sequence of validation rules against an object."""

    def __init__(self, rules: Sequence[ValidationRule[ValidatedT]]) -> None:
        """Constructor.

        Args:
            rules: List of validation rules to run, in order.
        """
        # Raises an error if 'rules' is an empty sequence or None
        if not rules:
            raise ValueError(f"{type(self).__name__} 'rules' must be a sequence with at least one ValidationRule.")
        self._rules = rules

    def validate(self, obj: ValidatedT) -> ConfigValidationResults:
        """Validate an object according to the configured rules."""
        results: List[ConfigValidationResults] = []
        for rule in self._rules:
            results.append(ConfigValidationResults.from_issues_sequence(rule.validate(obj)))
        return ConfigValidationResults.merge(results)

    def checked_validations(self, obj: ValidatedT) -> None:
        """Similar to validate(), but throws an exception if validation fails."""
        results = self.validate(obj)
        for warning in results.warnings:
            logger.warning(warning.as_readable_str())
        if results.has_blocking_issues:
            raise ConfigValidationException(issues=tuple(results.all_issues))


class LatentConfigValidator(RuleSetValidator["LatentConfig"]):
    """A validator for the (V, beta, alpha) parameterization."""

    DEFAULT_RULES: Sequence[ValidationRule[LatentConfig]] = (
        LatentShapeRule(),
        UnitRowNormRule(),
        PositiveBetaRule(),
        PositiveAlphaRule(),
    )

    def __init__(self, rules: Sequence[ValidationRule[LatentConfig]] = DEFAULT_RULES) -> None:  # noqa: D
        super().__init__(rules)


class HypergraphValidator(RuleSetValidator["Hypergraph"]):
    """A validator for node counts, vocabularies and hyperedge index sets."""

    DEFAULT_RULES: Sequence[ValidationRule[Hypergraph]] = (
        VocabularyRule(),
        EdgeIndexRangeRule(),
        StrictlyIncreasingEdgeRule(),
    )

    def __init__(self, rules: Sequence[ValidationRule[Hypergraph]] = DEFAULT_RULES) -> None:  # noqa: D
        super().__init__(rules)


def validate_config(config: LatentConfig) -> List[ValidationIssue]:
    """Lists every broken invariant of a latent configuration; the list is empty iff the config is valid."""
    return list(LatentConfigValidator().validate(config).all_issues)


def validate_hypergraph(hypergraph: Hypergraph) -> List[ValidationIssue]:
    """Lists every broken invariant of a hypergraph; the list is empty iff the hypergraph is valid."""
    return list(HypergraphValidator().validate(hypergraph).all_issues)
