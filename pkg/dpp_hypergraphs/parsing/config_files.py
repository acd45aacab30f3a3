"""Option files for the command line.

A config file is a single YAML document with up to three sections, each holding the fields of one options model:

    fit:
      max_iters: 2000
      batch_size: full
    grid:
      d_values: [2, 3]
      replicates: 20
    line_kmeans:
      n_starts: 20

Values given as command-line flags take precedence over the file.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Sequence, Type

import jsonschema
import yaml

from dpp_hypergraphs.errors import ParsingException
from dpp_hypergraphs.implementations.base import FrozenModelT
from dpp_hypergraphs.parsing.schemas import config_file_validator
from dpp_hypergraphs.parsing.yaml_loader import (
    PARSING_CONTEXT_KEY,
    ParsingContext,
    YamlConfigLoader,
    strip_parsing_context,
)
from dph_pydantic_shim import ValidationError as PydanticValidationError

logger = logging.getLogger(__name__)

FIT_SECTION = "fit"
GRID_SECTION = "grid"
LINE_KMEANS_SECTION = "line_kmeans"


@dataclass(frozen=True)
class ConfigFile:
    """Raw option values per section, already checked against the config file schema."""

    file_name: Optional[str] = None
    sections: Mapping[str, Mapping[str, Any]] = field(default_factory=dict)

    def section(self, name: str) -> Dict[str, Any]:
        """Copy of one section's values; empty when the file does not have it."""
        return dict(self.sections.get(name, {}))

    def build(
        self, model_class: Type[FrozenModelT], section: str, overrides: Optional[Mapping[str, Any]] = None
    ) -> FrozenModelT:
        """Parse one section into `model_class`, with `overrides` (flags that were set) replacing file values.

        Overrides whose value is None count as unset.
        """
        values = self.section(section)
        values.update({key: value for key, value in (overrides or {}).items() if value is not None})
        try:
            return model_class.parse_obj(values)
        except PydanticValidationError as e:
            raise ParsingException(f"Invalid `{section}` options: {e}", file_path=self.file_name) from e


def _locate(document: Any, path: Sequence[Any]) -> Optional[ParsingContext]:
    """Parsing context of the innermost mapping on `path` inside `document`."""
    context = document.get(PARSING_CONTEXT_KEY) if isinstance(document, dict) else None
    node = document
    for step in path:
        try:
            node = node[step]
        except (KeyError, IndexError, TypeError):
            break
        if isinstance(node, dict) and PARSING_CONTEXT_KEY in node:
            context = node[PARSING_CONTEXT_KEY]
    return context


def validate_against_schema(document: Any, validator: Any, file_name: Optional[str], what: str) -> None:
    """Validate a document parsed with parsing context, raising ParsingException at the offending line."""
    try:
        validator.validate(document)
    except jsonschema.exceptions.ValidationError as e:
        context = _locate(document, list(e.absolute_path))
        location = ".".join(str(step) for step in e.absolute_path) or "<root>"
        raise ParsingException(
            f"{what} failed schema validation at `{location}`: {e.message}",
            file_path=file_name,
            line_number=context.start_line if context else None,
        ) from e


def parse_config_file(name: str, contents: str) -> ConfigFile:
    """Parse and schema-check the YAML contents of a config file; an empty file yields no sections."""
    try:
        documents = [document for document in YamlConfigLoader.load_all_with_context(name, contents)]
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ParsingException(
            f"Invalid YAML: {e}", file_path=name, line_number=mark.line + 1 if mark is not None else None
        ) from e

    documents = [document for document in documents if document is not None]
    if not documents:
        logger.warning(f"Config file {name} is empty")
        return ConfigFile(file_name=name)
    if len(documents) > 1:
        raise ParsingException(f"Expected a single YAML document, found {len(documents)}", file_path=name)

    document = documents[0]
    validate_against_schema(document, config_file_validator, name, "Config file")
    return ConfigFile(file_name=name, sections=strip_parsing_context(document))


def load_config_file(path: Optional[str]) -> ConfigFile:
    """Read a config file from disk; no path means no file values."""
    if path is None:
        return ConfigFile()
    try:
        with open(path, "r", encoding="utf-8") as f:
            contents = f.read()
    except UnicodeDecodeError as e:
        raise ParsingException(f"Config file is not valid UTF-8: {e}", file_path=path) from e
    return parse_config_file(path, contents)
