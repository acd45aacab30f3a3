import logging

import pytest

from dpp_hypergraphs.clustering.line_kmeans import LineKMeansOptions
from dpp_hypergraphs.errors import ParsingException
from dpp_hypergraphs.estimation.options import FitOptions
from dpp_hypergraphs.parsing.config_files import (
    FIT_SECTION,
    GRID_SECTION,
    LINE_KMEANS_SECTION,
    load_config_file,
    parse_config_file,
)
from dpp_hypergraphs.simulation.harness import SimulationGrid


def test_sections_build_options(fit_config_path: str) -> None:  # noqa: D
    config_file = load_config_file(fit_config_path)
    options = config_file.build(FitOptions, FIT_SECTION, overrides={"d": 2})
    assert options == FitOptions(d=2, max_iters=60, batch_size="full", n_inits=2, seed=3)
    assert config_file.build(LineKMeansOptions, LINE_KMEANS_SECTION).n_starts == 4
    assert config_file.build(SimulationGrid, GRID_SECTION) == SimulationGrid()


def test_flags_take_precedence(fit_config_path: str) -> None:  # noqa: D
    config_file = load_config_file(fit_config_path)
    assert config_file.build(FitOptions, FIT_SECTION, overrides={"d": 1, "seed": None}).seed == 3
    assert config_file.build(FitOptions, FIT_SECTION, overrides={"d": 1, "seed": 9}).seed == 9


def test_no_file_means_no_values() -> None:  # noqa: D
    assert load_config_file(None).build(FitOptions, FIT_SECTION, overrides={"d": 3}) == FitOptions(d=3)


def test_empty_file(caplog: pytest.LogCaptureFixture) -> None:  # noqa: D
    with caplog.at_level(logging.WARNING):
        config_file = parse_config_file("empty.yaml", "")
    assert config_file.sections == {}
    assert "empty" in caplog.text


def test_schema_errors_point_at_the_line() -> None:  # noqa: D
    with pytest.raises(ParsingException, match=r"`fit.max_iters`.*\(line 2\)"):
        parse_config_file("bad.yaml", "fit:\n  max_iters: 0\n")


@pytest.mark.parametrize(
    "contents",
    [
        "fit:\n  learning_rate: 0.1\n",
        "solver:\n  max_iters: 10\n",
        "fit:\n  batch_size: half\n",
    ],
)
def test_unknown_or_invalid_entries(contents: str) -> None:  # noqa: D
    with pytest.raises(ParsingException, match="schema validation"):
        parse_config_file("bad.yaml", contents)


def test_invalid_yaml() -> None:  # noqa: D
    with pytest.raises(ParsingException, match="Invalid YAML"):
        parse_config_file("bad.yaml", "fit: [1, 2\n")


def test_several_documents() -> None:  # noqa: D
    with pytest.raises(ParsingException, match="single YAML document"):
        parse_config_file("bad.yaml", "fit: {}\n---\ngrid: {}\n")


def test_model_level_checks_run_after_the_schema() -> None:
    """A grid whose dimensions are not below n_v passes the schema but not the options model."""
    config_file = parse_config_file("grid.yaml", "grid:\n  n_v: 3\n  d_values: [2, 3]\n")
    with pytest.raises(ParsingException, match="Invalid `grid` options"):
        config_file.build(SimulationGrid, GRID_SECTION)
