from __future__ import annotations

from typing import TYPE_CHECKING, List, Sequence

from dpp_hypergraphs.validations.validator_helpers import (
    EdgeContext,
    ParameterContext,
    ValidationError,
    ValidationIssue,
    ValidationRule,
    validate_safely,
)

if TYPE_CHECKING:
    from dpp_hypergraphs.hypergraph import Hypergraph


class EdgeIndexRangeRule(ValidationRule["Hypergraph"]):
    """Checks that every node index in every hyperedge lies in [0, n_v)."""

    @classmethod
    @validate_safely(whats_being_done="checking hyperedge node indices are in range")
    def validate(cls, obj: Hypergraph) -> Sequence[ValidationIssue]:  # noqa: D
        issues: List[ValidationIssue] = []
        for edge_index, edge in enumerate(obj.edges):
            out_of_range = [node for node in edge if not 0 <= node < obj.n_v]
            if out_of_range:
                issues.append(
                    ValidationError(
                        context=EdgeContext(edge_index=edge_index),
                        message=f"node indices {out_of_range} are outside [0, {obj.n_v})",
                    )
                )
        return issues


class StrictlyIncreasingEdgeRule(ValidationRule["Hypergraph"]):
    """Checks that each hyperedge lists its nodes in strictly increasing order, i.e. is a set."""

    @classmethod
    @validate_safely(whats_being_done="checking hyperedges are strictly increasing")
    def validate(cls, obj: Hypergraph) -> Sequence[ValidationIssue]:  # noqa: D
        issues: List[ValidationIssue] = []
        for edge_index, edge in enumerate(obj.edges):
            if any(left >= right for left, right in zip(edge, edge[1:])):
                issues.append(
                    ValidationError(
                        context=EdgeContext(edge_index=edge_index),
                        message=f"hyperedge {list(edge)} must list distinct nodes in increasing order",
                    )
                )
        return issues


class VocabularyRule(ValidationRule["Hypergraph"]):
    """Checks that a vocabulary, when present, holds one distinct label per node."""

    @classmethod
    @validate_safely(whats_being_done="checking the node vocabulary")
    def validate(cls, obj: Hypergraph) -> Sequence[ValidationIssue]:  # noqa: D
        issues: List[ValidationIssue] = []
        if obj.n_v < 0:
            issues.append(
                ValidationError(
                    context=ParameterContext(field_name="n_v", measured_value=str(obj.n_v)),
                    message="node count must be nonnegative",
                )
            )
        if obj.vocab is None:
            return issues

        if len(obj.vocab) != obj.n_v:
            issues.append(
                ValidationError(
                    context=ParameterContext(field_name="vocab", measured_value=f"len={len(obj.vocab)}"),
                    message=f"vocabulary must hold exactly one label per node ({obj.n_v})",
                )
            )
        seen = set()
        for node_index, label in enumerate(obj.vocab):
            if label in seen:
                issues.append(
                    ValidationError(
                        context=ParameterContext(field_name="vocab", index=node_index, measured_value=repr(label)),
                        message="vocabulary labels must be unique",
                    )
                )
            seen.add(label)
        return issues
