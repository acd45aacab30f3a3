from __future__ import annotations

from io import StringIO
from typing import Any, Dict, Iterator

import yaml

"""Name of the key SafeLineLoaderWithAddedContext adds to every parsed mapping; it holds the file name and lines."""
PARSING_CONTEXT_KEY = "__parsing_context__"


class ParsingContext:
    """File name and line span of a parsed YAML mapping, for pointing errors at their source."""

    def __init__(self, start_line: int, end_line: int, filename: str) -> None:  # noqa: D
        self.start_line = start_line
        self.end_line = end_line
        self.filename = filename

    def __str__(self) -> str:  # noqa: D
        return f"line: {self.start_line}, filename: {self.filename}"


class YamlConfigLoader:
    """Helper class for loading YAML strings into documents annotated with their parsing context."""

    @staticmethod
    def load_all_with_context(name: str, contents: str) -> Iterator:
        """Wraps yaml.load_all, adding a ParsingContext under PARSING_CONTEXT_KEY to every mapping.

        PyYAML only takes the stream name from file objects, so the contents are passed in a StringIO whose name is
        set to `name`.
        """
        with StringIO(initial_value=contents) as stream:
            stream.name = name
            for document in yaml.load_all(stream=stream, Loader=SafeLineLoaderWithAddedContext):
                yield document


class SafeLineLoaderWithAddedContext(yaml.SafeLoader):
    """Adds the special field __parsing_context__ to all mappings."""

    def construct_mapping(self, node: yaml.MappingNode, deep: bool = False) -> Dict:
        """Override of SafeConstructor.construct_mapping recording where the mapping came from.

        The file name comes from the name of the stream given to load_all. Line numbers are made 1-indexed.
        """
        mapping = super(SafeLineLoaderWithAddedContext, self).construct_mapping(node, deep=deep)
        mapping[PARSING_CONTEXT_KEY] = ParsingContext(
            start_line=node.start_mark.line + 1, end_line=node.end_mark.line, filename=node.start_mark.name
        )
        return mapping


def strip_parsing_context(document: Any) -> Any:
    """Copy of a parsed document with every parsing-context entry removed, at any depth."""
    if isinstance(document, dict):
        return {key: strip_parsing_context(value) for key, value in document.items() if key != PARSING_CONTEXT_KEY}
    if isinstance(document, list):
        return [strip_parsing_context(item) for item in document]
    return document
