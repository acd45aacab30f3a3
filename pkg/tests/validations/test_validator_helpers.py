from typing import List

import pytest

from dpp_hypergraphs.validations.validator_helpers import (
    ConfigValidationResults,
    EdgeContext,
    FileContext,
    ParameterContext,
    ValidationError,
    ValidationIssue,
    ValidationIssueLevel,
    ValidationWarning,
    validate_safely,
)


@pytest.fixture
def list_of_issues() -> List[ValidationIssue]:  # noqa: D
    file_context = FileContext(file_name="recipes.txt", line_number=1337)

    issues: List[ValidationIssue] = []
    issues.append(
        ValidationWarning(
            context=ParameterContext(field_name="alpha", index=3, measured_value="1e-300"),
            message="Something caused a warning, problem #1",
        )
    )
    issues.append(
        ValidationWarning(
            context=EdgeContext(edge_index=12),
            message="Something caused a warning, problem #2",
        )
    )
    issues.append(
        ValidationError(
            context=ParameterContext(field_name="V", index=0, measured_value="0.9"),
            message="Something caused an error, problem #3",
        )
    )
    issues.append(
        ValidationError(
            context=ParameterContext(field_name="beta"),
            message="Something caused an error, problem #4",
        )
    )
    issues.append(ValidationError(context=file_context, message="Something caused an error, problem #5"))
    return issues


def test_creating_validation_results_from_issue_list(  # noqa: D
    list_of_issues: List[ValidationIssue],
) -> None:
    warnings = [issue for issue in list_of_issues if issue.level == ValidationIssueLevel.WARNING]
    errors = [issue for issue in list_of_issues if issue.level == ValidationIssueLevel.ERROR]

    validation_results = ConfigValidationResults.from_issues_sequence(list_of_issues)
    assert len(validation_results.warnings) == len(warnings)
    assert len(validation_results.errors) == len(errors)
    assert validation_results.has_blocking_issues

    validation_results = ConfigValidationResults(warnings=validation_results.warnings)
    assert not validation_results.has_blocking_issues


def test_jsonifying_and_reloading_validation_results_is_equal(  # noqa: D
    list_of_issues: List[ValidationIssue],
) -> None:
    set_context_types = set([issue.context.__class__ for issue in list_of_issues])

    validation_results = ConfigValidationResults.from_issues_sequence(list_of_issues)
    validation_results_new = ConfigValidationResults.parse_raw(validation_results.json())
    assert validation_results_new == validation_results
    assert validation_results_new != ConfigValidationResults(warnings=validation_results.warnings)

    # ensure ValidationContexts were properly parsed into the different subclasses
    new_context_types = [issue.context.__class__ for issue in validation_results_new.warnings]
    new_context_types += [issue.context.__class__ for issue in validation_results_new.errors]
    assert set_context_types == set(new_context_types)


def test_merge_two_validation_results(list_of_issues: List[ValidationIssue]) -> None:  # noqa: D
    validation_results = ConfigValidationResults.from_issues_sequence(list_of_issues)
    validation_results_dup = ConfigValidationResults.from_issues_sequence(list_of_issues)
    merged = ConfigValidationResults.merge([validation_results, validation_results_dup])

    assert merged.warnings == validation_results.warnings + validation_results_dup.warnings
    assert merged.errors == validation_results.errors + validation_results_dup.errors
    assert merged.all_issues[: len(merged.errors)] == merged.errors


def test_readable_strings_name_the_context(list_of_issues: List[ValidationIssue]) -> None:  # noqa: D
    assert list_of_issues[0].as_readable_str() == (
        "WARNING: with `alpha[3]` (measured 1e-300) - Something caused a warning, problem #1"
    )
    assert list_of_issues[1].as_readable_str().startswith("WARNING: in hyperedge #12 - ")
    assert list_of_issues[3].as_readable_str() == "ERROR: with `beta` - Something caused an error, problem #4"
    assert "in file `recipes.txt` on line #1337" in list_of_issues[4].as_readable_str()


def test_summary_counts_issues(list_of_issues: List[ValidationIssue]) -> None:  # noqa: D
    summary = ConfigValidationResults.from_issues_sequence(list_of_issues).summary()
    assert "ERRORS: 3" in summary
    assert "WARNINGS: 2" in summary


def test_validate_safely_handles_exceptions() -> None:  # noqa: D
    @validate_safely("testing validate safely handles exceptions gracefully")
    def checking_validate_safely() -> List[ValidationIssue]:
        raise (Exception("Oh no an exception!"))
        return []

    # We shouldn't get an unhandled exception from this
    validation_issues = checking_validate_safely()
    assert len(validation_issues) == 1
    assert validation_issues[0].level is ValidationIssueLevel.ERROR
    assert "Oh no an exception!" in validation_issues[0].message
