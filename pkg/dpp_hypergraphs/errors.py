from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Sequence, Tuple

if TYPE_CHECKING:
    from dpp_hypergraphs.parsing.yaml_loader import ParsingContext
    from dpp_hypergraphs.validations.validator_helpers import ValidationIssue


class DataError(Exception):
    """Base class for problems with user-supplied data, files or arguments."""

    pass


class NumericalError(Exception):
    """Base class for numerical failures (factorizations, degenerate sampling, divergence)."""

    pass


class ParsingException(DataError):  # noqa: D
    def __init__(  # noqa: D
        self,
        message: str,
        ctx: Optional[ParsingContext] = None,
        file_path: Optional[str] = None,
        line_number: Optional[int] = None,
    ) -> None:
        if file_path:
            message = f"Failed to parse file '{file_path}' - {message}"
        if line_number is not None:
            message = f"{message} (line {line_number})"
        if ctx:
            message = f"{message}\nContext: {str(ctx)}"
        super().__init__(message)


class ModelFileVersionError(DataError):
    """Raised when a model file declares a format version this release cannot read."""

    pass


class ModelFileChecksumError(DataError):
    """Raised when a model file's checksum trailer is missing or does not match its contents."""

    pass


class UnknownLabelError(DataError):
    """Raised when a node label given on the command line is not in the model vocabulary."""

    def __init__(self, labels: Sequence[str]) -> None:  # noqa: D
        self.labels = tuple(labels)
        super().__init__(f"Unknown node label(s): {', '.join(repr(label) for label in self.labels)}")


class DimensionMismatchError(DataError):
    """Raised when arrays that must agree in shape do not."""

    pass


class ContractViolation(DataError):
    """Raised when arguments break an operation's precondition, e.g. a conditioning set not inside the target."""

    pass


class OracleSizeError(DataError):
    """Raised when exhaustive enumeration is requested for more nodes than the guard allows."""

    pass


class EmptyHypergraphError(DataError):
    """Raised when an operation needs at least one hyperedge (or one non-empty hyperedge) and gets none."""

    pass


class ConfigValidationException(DataError):
    """Raised when a latent configuration or hypergraph breaks its invariants."""

    def __init__(self, issues: Tuple[ValidationIssue, ...]) -> None:  # noqa: D
        self.issues = issues
        issues_str = "\n".join([x.as_readable_str(verbose=True) for x in issues])
        super().__init__(f"Invalid configuration. Issues:\n{issues_str}")


class NonPositiveDefiniteKernelError(NumericalError):
    """Raised when a symmetric factorization fails on a matrix that must be positive definite."""

    pass


class DegenerateSamplingError(NumericalError):
    """Raised when the sampler cannot continue, e.g. the residual eigenspace mass has vanished."""

    pass


class FitDivergenceError(NumericalError):
    """Raised when every restart of the optimizer produced a non-finite objective."""

    def __init__(self, message: str, restart_diagnostics: Sequence[str] = ()) -> None:  # noqa: D
        self.restart_diagnostics = tuple(restart_diagnostics)
        if self.restart_diagnostics:
            message = message + "\n" + "\n".join(f"  - {line}" for line in self.restart_diagnostics)
        super().__init__(message)
