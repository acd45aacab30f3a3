import io
import logging
from typing import List

import pytest

from dpp_hypergraphs.errors import ParsingException
from dpp_hypergraphs.hypergraph import Hypergraph
from dpp_hypergraphs.parsing.hyperedges import (
    format_hyperedge,
    parse_hyperedges,
    read_hyperedge_file,
    write_hyperedges,
)


def test_rare_labels_are_dropped(recipe_lines: List[str]) -> None:  # noqa: D
    hypergraph = parse_hyperedges(recipe_lines)
    assert hypergraph.vocab == ("a", "b")
    assert hypergraph.edges == ((0, 1), (0, 1), (0, 1))


def test_every_label_kept_with_count_one(recipe_lines: List[str]) -> None:  # noqa: D
    hypergraph = parse_hyperedges(recipe_lines, min_node_count=1)
    assert hypergraph.vocab == ("a", "b", "c")
    assert hypergraph.edges == ((0, 1, 2), (0, 1), (0, 1))


def test_duplicate_labels_count_once(caplog: pytest.LogCaptureFixture) -> None:  # noqa: D
    with caplog.at_level(logging.WARNING):
        hypergraph = parse_hyperedges(["x,x,y\n", "y,x\n"], source_name="dupes.txt")
    assert hypergraph.edges == ((0, 1), (0, 1))
    assert "WARNING: in file `dupes.txt` on line #1 - duplicate label(s) ['x'] counted once" in caplog.text


def test_blank_lines(recipe_lines: List[str]) -> None:  # noqa: D
    lines = recipe_lines[:1] + ["\n", "  ,  \n"] + recipe_lines[1:]
    assert parse_hyperedges(lines).n_e == 3
    kept = parse_hyperedges(lines, keep_empty_lines=True)
    assert kept.edges == ((0, 1), (), (), (0, 1), (0, 1))


def test_other_delimiters() -> None:  # noqa: D
    hypergraph = parse_hyperedges(["a\tb\n", "b\ta\tc\n"], delimiter="\t", min_node_count=1)
    assert hypergraph.vocab == ("a", "b", "c")
    with pytest.raises(ParsingException):
        parse_hyperedges(["a\n"], delimiter="")


def test_undecodable_line_is_reported_with_its_number() -> None:  # noqa: D
    with pytest.raises(ParsingException, match=r"line 2"):
        parse_hyperedges([b"a,b\n", b"a,\xff\n"], source_name="bad.txt")


def test_nothing_survives_the_count_filter() -> None:  # noqa: D
    with pytest.raises(ParsingException, match="No node appears"):
        parse_hyperedges(["a,b\n", "c\n"])


def test_read_file(recipes_path: str) -> None:  # noqa: D
    hypergraph = read_hyperedge_file(recipes_path)
    assert hypergraph.vocab == ("flour", "egg", "milk", "sugar", "butter")
    assert hypergraph.n_e == 12
    # "saffron,egg" keeps only egg.
    assert hypergraph.edges[8] == (1,)


def test_written_edges_parse_back(labelled_hypergraph: Hypergraph) -> None:  # noqa: D
    stream = io.StringIO()
    write_hyperedges(labelled_hypergraph.edges, labelled_hypergraph.labels(), stream, delimiter=";")
    assert stream.getvalue() == "flour;egg\negg;milk\nflour;egg\n\n"
    assert format_hyperedge((), ["x"]) == ""
    reparsed = parse_hyperedges(io.StringIO(stream.getvalue()), delimiter=";", min_node_count=1, keep_empty_lines=True)
    assert reparsed.edges == labelled_hypergraph.edges
    assert reparsed.vocab == labelled_hypergraph.vocab
