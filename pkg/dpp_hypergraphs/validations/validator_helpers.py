"""Issue types reported by the validation rules, and the rule base class.

Rules never raise for a broken invariant: they return issues. A rule that crashes is turned into a single ERROR issue
by `validate_safely`, so one faulty check cannot hide the results of the others.
"""
from __future__ import annotations

import functools
import traceback
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Callable, Generic, List, Optional, Sequence, Tuple, TypeVar, Union

import click

from dpp_hypergraphs.implementations.base import FrozenBaseModel
from dph_pydantic_shim import BaseModel, Extra


class ValidationIssueLevel(Enum):
    """How bad an issue is."""

    # usable, but worth a look
    WARNING = 0
    # breaks an invariant; the object must not be used
    ERROR = 1

    @property
    def color(self) -> str:
        """Terminal colour used when the level is printed."""
        return "cyan" if self is ValidationIssueLevel.WARNING else "bright_red"


class _Context(BaseModel):
    class Config:
        """Pydantic class configuration options."""

        extra = Extra.forbid


class FileContext(_Context):
    """A position in an input file."""

    file_name: Optional[str]
    line_number: Optional[int]

    def context_str(self) -> str:  # noqa: D
        parts: List[str] = []
        if self.file_name:
            parts.append(f"in file `{self.file_name}`")
        if self.line_number:
            parts.append(f"on line #{self.line_number}")
        return " ".join(parts)


class ParameterContext(_Context):
    """An entry of a parameter array, with the value measured there."""

    field_name: str
    index: Optional[int] = None
    measured_value: Optional[str] = None

    def context_str(self) -> str:  # noqa: D
        target = self.field_name if self.index is None else f"{self.field_name}[{self.index}]"
        measured = "" if self.measured_value is None else f" (measured {self.measured_value})"
        return f"with `{target}`{measured}"


class EdgeContext(_Context):
    """A hyperedge, by position in the hypergraph."""

    edge_index: int

    def context_str(self) -> str:  # noqa: D
        return f"in hyperedge #{self.edge_index}"


ValidationContext = Union[ParameterContext, EdgeContext, FileContext]


class ValidationIssue(ABC, BaseModel):
    """Something a rule found; subclasses fix the level."""

    message: str
    context: Optional[ValidationContext] = None
    extra_detail: Optional[str]

    @property
    @abstractmethod
    def level(self) -> ValidationIssueLevel:  # noqa: D
        raise NotImplementedError

    def as_readable_str(self, verbose: bool = False, prefix: Optional[str] = None) -> str:
        """One line `LEVEL: context - message`, plus the extra detail when verbose."""
        context_str = self.context.context_str() if self.context else ""
        located = f"{context_str} - {self.message}" if context_str else self.message
        text = f"{prefix or self.level.name}: {located}"
        if verbose and self.extra_detail is not None:
            text += f"\n{self.extra_detail}"
        return text


class ValidationWarning(ValidationIssue, BaseModel):  # noqa: D
    @property
    def level(self) -> ValidationIssueLevel:  # noqa: D
        return ValidationIssueLevel.WARNING


class ValidationError(ValidationIssue, BaseModel):  # noqa: D
    @property
    def level(self) -> ValidationIssueLevel:  # noqa: D
        return ValidationIssueLevel.ERROR


class ConfigValidationResults(FrozenBaseModel):
    """Issues found by a set of rules, split by level and kept in rule order."""

    warnings: Tuple[ValidationWarning, ...] = tuple()
    errors: Tuple[ValidationError, ...] = tuple()

    @property
    def has_blocking_issues(self) -> bool:  # noqa: D
        return len(self.errors) != 0

    @property
    def all_issues(self) -> Tuple[ValidationIssue, ...]:
        """Errors first, then warnings."""
        return self.errors + self.warnings

    @staticmethod
    def from_issues_sequence(issues: Sequence[ValidationIssue]) -> ConfigValidationResults:  # noqa: D
        return ConfigValidationResults(
            warnings=tuple(issue for issue in issues if isinstance(issue, ValidationWarning)),
            errors=tuple(issue for issue in issues if isinstance(issue, ValidationError)),
        )

    @classmethod
    def merge(cls, results: Sequence[ConfigValidationResults]) -> ConfigValidationResults:  # noqa: D
        return cls(
            warnings=tuple(issue for result in results for issue in result.warnings),
            errors=tuple(issue for result in results for issue in result.errors),
        )

    def summary(self) -> str:
        """Coloured issue counts, e.g. `ERRORS: 1, WARNINGS: 0`."""
        counts = ((ValidationIssueLevel.ERROR, len(self.errors)), (ValidationIssueLevel.WARNING, len(self.warnings)))
        return ", ".join(click.style(f"{level.name}S: {count}", fg=level.color) for level, count in counts)


def validate_safely(whats_being_done: str) -> Callable:
    """Decorator turning an exception raised inside a check into a single ERROR issue."""

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> List[ValidationIssue]:
            try:
                return list(func(*args, **kwargs))
            except Exception as e:
                reason = "".join(traceback.format_exception_only(type(e), value=e)).strip()
                return [
                    ValidationError(
                        message=f"An error occurred while {whats_being_done} - {reason}",
                        extra_detail=f"method_name: {func.__name__}\n"
                        f"stacktrace: {''.join(traceback.format_tb(e.__traceback__))}",
                    )
                ]

        return wrapper

    return decorator


ValidatedT = TypeVar("ValidatedT")


class ValidationRule(ABC, Generic[ValidatedT]):
    """One invariant of an object."""

    @classmethod
    @abstractmethod
    def validate(cls, obj: ValidatedT) -> Sequence[ValidationIssue]:
        """Issues found in `obj`; empty when the invariant holds."""
        raise NotImplementedError


def format_measured(value: float) -> str:
    """Compact rendering of a measured value for issue contexts."""
    return f"{value:.12g}"
