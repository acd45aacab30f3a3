"""Plain-text hyperedge files: one hyperedge per line, node labels separated by a delimiter."""
from __future__ import annotations

import logging
from typing import IO, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from dpp_hypergraphs.errors import ParsingException
from dpp_hypergraphs.hypergraph import Edge, Hypergraph
from dpp_hypergraphs.validations.validator_helpers import FileContext, ValidationWarning

logger = logging.getLogger(__name__)

DEFAULT_DELIMITER = ","
DEFAULT_MIN_NODE_COUNT = 2


def _decode(line: Union[str, bytes], source_name: Optional[str], line_number: int) -> str:
    if isinstance(line, str):
        return line
    try:
        return line.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParsingException(
            f"Line is not valid UTF-8 ({e.reason} at byte {e.start})", file_path=source_name, line_number=line_number
        ) from e


def _tokens(text: str, delimiter: str) -> List[str]:
    return [token.strip() for token in text.rstrip("\r\n").split(delimiter) if token.strip()]


def parse_hyperedges(
    lines: Iterable[Union[str, bytes]],
    delimiter: str = DEFAULT_DELIMITER,
    min_node_count: int = DEFAULT_MIN_NODE_COUNT,
    keep_empty_lines: bool = False,
    source_name: Optional[str] = None,
) -> Hypergraph:
    """Build a labelled hypergraph from hyperedge lines.

    Labels are stripped of surrounding whitespace and empty tokens are ignored. The vocabulary lists labels in order of
    first appearance. A label repeated within one line counts once, with a warning. Labels appearing in fewer than
    `min_node_count` hyperedges are removed from every hyperedge and from the vocabulary; hyperedges that this leaves
    empty are kept.

    Args:
        lines: Text lines, or raw lines that are decoded as UTF-8.
        delimiter: Separator between labels on a line.
        min_node_count: Minimum number of hyperedges a label must appear in to be kept.
        keep_empty_lines: Whether blank lines are read as empty hyperedges instead of being skipped.
        source_name: File name used in messages.

    Raises:
        ParsingException: on undecodable bytes, or when no label survives the count filter.
    """
    if not delimiter:
        raise ParsingException("The delimiter must be a non-empty string", file_path=source_name)

    vocabulary: Dict[str, int] = {}
    raw_edges: List[Edge] = []
    for line_number, raw_line in enumerate(lines, start=1):
        tokens = _tokens(_decode(raw_line, source_name, line_number), delimiter)
        if not tokens and not keep_empty_lines:
            continue
        unique = list(dict.fromkeys(tokens))
        if len(unique) != len(tokens):
            repeated = sorted({token for token in tokens if tokens.count(token) > 1})
            issue = ValidationWarning(
                context=FileContext(file_name=source_name, line_number=line_number),
                message=f"duplicate label(s) {repeated} counted once",
            )
            logger.warning(issue.as_readable_str())
        raw_edges.append(tuple(sorted(vocabulary.setdefault(token, len(vocabulary)) for token in unique)))

    labels = list(vocabulary)
    counts = np.zeros(len(labels), dtype=int)
    for edge in raw_edges:
        counts[list(edge)] += 1
    kept = [node for node in range(len(labels)) if counts[node] >= min_node_count]
    if not kept:
        raise ParsingException(
            f"No node appears in at least {min_node_count} hyperedge(s) ({len(raw_edges)} hyperedges read)",
            file_path=source_name,
        )

    dropped = len(labels) - len(kept)
    if dropped:
        logger.info(f"Dropped {dropped} node(s) appearing in fewer than {min_node_count} hyperedge(s)")
    remap = {old: new for new, old in enumerate(kept)}
    edges = tuple(tuple(remap[node] for node in edge if node in remap) for edge in raw_edges)
    return Hypergraph(n_v=len(kept), edges=edges, vocab=tuple(labels[node] for node in kept))


def read_hyperedge_file(
    path: str,
    delimiter: str = DEFAULT_DELIMITER,
    min_node_count: int = DEFAULT_MIN_NODE_COUNT,
    keep_empty_lines: bool = False,
) -> Hypergraph:
    """Parse a hyperedge file from disk; see `parse_hyperedges`."""
    with open(path, "rb") as f:
        return parse_hyperedges(
            f, delimiter=delimiter, min_node_count=min_node_count, keep_empty_lines=keep_empty_lines, source_name=path
        )


def format_hyperedge(edge: Sequence[int], labels: Sequence[str], delimiter: str = DEFAULT_DELIMITER) -> str:
    """One output line (without newline) for an edge; the empty edge is the empty string."""
    return delimiter.join(labels[node] for node in edge)


def write_hyperedges(
    edges: Iterable[Sequence[int]], labels: Sequence[str], stream: IO[str], delimiter: str = DEFAULT_DELIMITER
) -> None:
    """Write one hyperedge per line, nodes by label in increasing index order."""
    for edge in edges:
        stream.write(format_hyperedge(edge, labels, delimiter) + "\n")
