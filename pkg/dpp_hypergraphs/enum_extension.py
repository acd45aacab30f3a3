from enum import Enum
from typing import Any, List, NoReturn, Type, TypeVar


def assert_values_exhausted(value: NoReturn) -> NoReturn:
    """Helper method to allow MyPy to guarantee an exhaustive switch through an enumeration.

    Use `is` for every comparison in the switch; mypy then reports a non-exhaustive switch as an incompatible
    argument type here.
    """
    assert False, f"Should be unreachable, but got {value}"


T = TypeVar("T", bound="ExtendedEnum")


class ExtendedEnum(Enum):
    """Enum accepting case-insensitive values, with `-` and `_` treated alike (`line-kmeans` == `line_kmeans`)."""

    @classmethod
    def _missing_(cls: Type[T], value: Any) -> "ExtendedEnum":  # type: ignore[misc]
        if isinstance(value, str):
            normalized = value.strip().lower().replace("-", "_")
            for member in cls:
                if member.value == normalized:
                    return member

        raise ValueError(f"Invalid enum value: `{value}` in enum {cls.__name__}")

    @classmethod
    def list_values(cls) -> List[str]:
        """List valid values, in the dashed spelling used on the command line."""
        return [member.value.replace("_", "-") for member in cls]
