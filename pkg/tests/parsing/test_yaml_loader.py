import pytest

from dpp_hypergraphs.errors import ParsingException
from dpp_hypergraphs.parsing.objects import Version
from dpp_hypergraphs.parsing.yaml_loader import (
    PARSING_CONTEXT_KEY,
    YamlConfigLoader,
    strip_parsing_context,
)

DOCUMENT = """\
fit:
  max_iters: 10
grid:
  d_values: [1, 2]
  nested:
    - {a: 1}
"""


def test_mappings_carry_their_location() -> None:  # noqa: D
    (document,) = list(YamlConfigLoader.load_all_with_context("options.yaml", DOCUMENT))
    assert document[PARSING_CONTEXT_KEY].start_line == 1
    assert document["grid"][PARSING_CONTEXT_KEY].start_line == 4
    assert document["grid"][PARSING_CONTEXT_KEY].filename == "options.yaml"
    assert str(document["fit"][PARSING_CONTEXT_KEY]) == "line: 2, filename: options.yaml"


def test_strip_parsing_context() -> None:  # noqa: D
    (document,) = list(YamlConfigLoader.load_all_with_context("options.yaml", DOCUMENT))
    assert strip_parsing_context(document) == {
        "fit": {"max_iters": 10},
        "grid": {"d_values": [1, 2], "nested": [{"a": 1}]},
    }


def test_version_parsing() -> None:  # noqa: D
    version = Version.parse(" v1.12 ")
    assert (version.major_version, version.minor_version) == (1, 12)
    assert str(version) == "v1.12"


@pytest.mark.parametrize("text", ["1.0", "v1", "v1.0.0", "vx.1"])
def test_malformed_versions(text: str) -> None:  # noqa: D
    with pytest.raises(ParsingException):
        Version.parse(text)
