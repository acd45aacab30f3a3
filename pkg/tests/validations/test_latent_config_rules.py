import math

import numpy as np
import pytest

from dpp_hypergraphs.errors import ConfigValidationException
from dpp_hypergraphs.kernel import LatentConfig
from dpp_hypergraphs.validations.latent_config import (
    LatentShapeRule,
    PositiveAlphaRule,
    PositiveBetaRule,
    UnitRowNormRule,
)
from dpp_hypergraphs.validations.validator import (
    LatentConfigValidator,
    RuleSetValidator,
    validate_config,
)
from dpp_hypergraphs.validations.validator_helpers import ParameterContext


def _config(V: list, beta: float, alpha: list) -> LatentConfig:
    return LatentConfig(V=np.array(V, dtype=float), beta=beta, alpha=np.array(alpha, dtype=float))


def test_valid_config_has_no_issues(three_node_config: LatentConfig) -> None:  # noqa: D
    assert validate_config(three_node_config) == []


def test_short_row_is_named() -> None:  # noqa: D
    issues = validate_config(_config([[0.9], [1.0], [-1.0]], 1.0, [1.0, 1.0, 1.0]))
    assert len(issues) == 1
    context = issues[0].context
    assert isinstance(context, ParameterContext)
    assert (context.field_name, context.index) == ("V", 0)
    assert context.measured_value == "0.9"


def test_zero_alpha_is_named() -> None:  # noqa: D
    issues = validate_config(_config([[1.0], [1.0], [1.0]], 1.0, [1.0, 0.0, 1.0]))
    assert len(issues) == 1
    assert issues[0].message == "alpha must be strictly positive"
    assert isinstance(issues[0].context, ParameterContext)
    assert issues[0].context.index == 1


@pytest.mark.parametrize("beta", [0.0, -1.0, math.nan, math.inf])
def test_beta_must_be_finite_and_positive(beta: float) -> None:  # noqa: D
    issues = PositiveBetaRule.validate(_config([[1.0], [1.0]], beta, [1.0, 1.0]))
    assert len(issues) == 1


def test_nan_row_is_reported() -> None:  # noqa: D
    issues = UnitRowNormRule.validate(_config([[math.nan], [1.0]], 1.0, [1.0, 1.0]))
    assert len(issues) == 1


def test_dimension_must_be_below_node_count() -> None:  # noqa: D
    issues = LatentShapeRule.validate(_config([[1.0, 0.0], [0.0, 1.0]], 1.0, [1.0, 1.0]))
    assert [issue.context.field_name for issue in issues if isinstance(issue.context, ParameterContext)] == ["d"]


def test_alpha_length_must_match() -> None:  # noqa: D
    issues = LatentShapeRule.validate(_config([[1.0], [1.0], [1.0]], 1.0, [1.0, 1.0]))
    assert len(issues) == 1
    assert "one entry per node" in issues[0].message


def test_every_violation_is_listed() -> None:  # noqa: D
    issues = validate_config(_config([[2.0], [1.0], [0.5]], -1.0, [1.0, -2.0, 0.0]))
    # two bad rows, beta, two bad alphas
    assert len(issues) == 5
    assert PositiveAlphaRule.validate(_config([[1.0], [1.0], [1.0]], 1.0, [1.0, -2.0, 0.0]))


def test_checked_validations_raise_with_every_issue() -> None:  # noqa: D
    with pytest.raises(ConfigValidationException) as exc_info:
        LatentConfigValidator().checked_validations(_config([[2.0], [1.0], [1.0]], 1.0, [1.0, 1.0, 0.0]))
    assert len(exc_info.value.issues) == 2
    assert "alpha[2]" in str(exc_info.value)


def test_rule_set_needs_rules() -> None:  # noqa: D
    with pytest.raises(ValueError):
        RuleSetValidator(rules=())
