from __future__ import annotations

from dpp_hypergraphs.errors import ParsingException
from dpp_hypergraphs.implementations.base import HashableBaseModel


class Version(HashableBaseModel):
    """Major and minor version of a file format, written as `v<major>.<minor>`."""

    major_version: int
    minor_version: int

    @staticmethod
    def parse(version: str) -> Version:
        """Parses `v1.0`, ignoring surrounding whitespace; anything else raises ParsingException."""
        stripped = version.strip()
        if not stripped.startswith("v"):
            raise ParsingException(f"Version string '{version}' does not start with 'v'")
        parts = stripped[1:].split(".")
        if len(parts) != 2 or not all(part.isdigit() for part in parts):
            raise ParsingException(f"Version string '{version}' is not of the form 'v<major>.<minor>'")
        return Version(major_version=int(parts[0]), minor_version=int(parts[1]))

    def __str__(self) -> str:  # noqa: D
        return f"v{self.major_version}.{self.minor_version}"
