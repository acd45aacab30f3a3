"""Per-node summaries of a fitted model for inspection: map coordinates of the latent lines, popularity, marginals."""
from __future__ import annotations

import csv
from typing import IO, List, NamedTuple, Optional, Sequence

import numpy as np
import numpy.typing as npt

from dpp_hypergraphs.constants import REPORT_SCHEMA_VERSION, ZERO_NORM_THRESHOLD
from dpp_hypergraphs.dpp.inference import marginal_kernel
from dpp_hypergraphs.errors import DimensionMismatchError
from dpp_hypergraphs.hypergraph import Hypergraph
from dpp_hypergraphs.kernel import LatentConfig, build_kernel
from dpp_hypergraphs.metrics.parameters import empirical_marginals


def canonical_directions(V: npt.ArrayLike) -> npt.NDArray:
    """Rows of V with signs chosen so the last non-zero coordinate of each is positive.

    v and -v span the same line and give the same kernel up to sign conjugation; this picks one representative.
    """
    directions = np.array(V, dtype=float)
    if directions.ndim != 2:
        raise DimensionMismatchError(f"Expected a matrix of directions, got shape {directions.shape}")
    for row in directions:
        nonzero = np.flatnonzero(np.abs(row) > ZERO_NORM_THRESHOLD)
        if nonzero.size and row[nonzero[-1]] < 0:
            row *= -1.0
    return directions


def spherical_coordinates(V: npt.ArrayLike) -> npt.NDArray:
    """Longitude and latitude in degrees of each 3-d latent direction, as an n x 2 array.

    Directions are first moved into the upper hemisphere (latitude >= 0) by `canonical_directions`.
    """
    directions = canonical_directions(V)
    if directions.shape[1] != 3:
        raise DimensionMismatchError(f"Spherical coordinates need d = 3, got d = {directions.shape[1]}")
    norms = np.linalg.norm(directions, axis=1)
    unit = directions / np.where(norms > ZERO_NORM_THRESHOLD, norms, 1.0)[:, None]
    longitude = np.degrees(np.arctan2(unit[:, 1], unit[:, 0]))
    latitude = np.degrees(np.arcsin(np.clip(unit[:, 2], -1.0, 1.0)))
    return np.column_stack([longitude, latitude])


class NodeEmbedding(NamedTuple):
    """One row of the embedding table."""

    label: str
    longitude: float
    latitude: float
    alpha: float
    inclusion_probability: float
    empirical_frequency: Optional[float]


def embedding_table(
    config: LatentConfig, labels: Sequence[str], hypergraph: Optional[Hypergraph] = None
) -> List[NodeEmbedding]:
    """Coordinates, popularity and model marginal P(i in E) = K_ii of every node of a d = 3 model.

    When `hypergraph` is given, it must be indexed like the model (see `Hypergraph.aligned_to`) and the fraction of
    its hyperedges containing each node is added.
    """
    if len(labels) != config.n_v:
        raise DimensionMismatchError(f"{len(labels)} labels for a model with {config.n_v} nodes")
    if hypergraph is not None and hypergraph.n_v != config.n_v:
        raise DimensionMismatchError(f"Hypergraph has {hypergraph.n_v} nodes, model has {config.n_v}")

    coordinates = spherical_coordinates(config.V)
    inclusion = marginal_kernel(build_kernel(config)).inclusion_probabilities()
    frequencies = empirical_marginals(hypergraph) if hypergraph is not None else None
    return [
        NodeEmbedding(
            label=labels[node],
            longitude=float(coordinates[node, 0]),
            latitude=float(coordinates[node, 1]),
            alpha=float(config.alpha[node]),
            inclusion_probability=float(inclusion[node]),
            empirical_frequency=float(frequencies[node]) if frequencies is not None else None,
        )
        for node in range(config.n_v)
    ]


def write_embedding_csv(rows: Sequence[NodeEmbedding], stream: IO[str]) -> None:
    """CSV with a schema_version column; the frequency column is left empty when it was not computed."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["schema_version", *NodeEmbedding._fields])
    for row in rows:
        writer.writerow([REPORT_SCHEMA_VERSION, *("" if value is None else value for value in row)])
