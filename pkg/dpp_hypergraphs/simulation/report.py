from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import IO, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from more_itertools import bucket

from dpp_hypergraphs.constants import REPORT_SCHEMA_VERSION
from dpp_hypergraphs.implementations.base import FrozenBaseModel
from dpp_hypergraphs.type_enums.simulation_design import SimulationDesign

# Metric columns that can be summarized across replicates.
METRIC_FIELDS = (
    "rel_error_V",
    "rel_error_beta",
    "rel_error_alpha",
    "rel_error_L",
    "accuracy_line_kmeans",
    "accuracy_nsc",
    "accuracy_score",
    "empirical_mean_size",
    "expected_size",
    "final_objective",
)

CellKey = Tuple[SimulationDesign, int, int]

# Varies from run to run; left out of written reports unless asked for.
TIMING_FIELD = "wall_clock_seconds"


class ExperimentRecord(FrozenBaseModel):
    """One replicate at one grid cell. `seed` regenerates the latent configuration and, with n_e, the hyperedges."""

    design: SimulationDesign
    n_v: int
    d: int
    n_e: int
    replicate: int
    seed: int
    rel_error_V: Optional[float] = None
    rel_error_beta: Optional[float] = None
    rel_error_alpha: Optional[float] = None
    rel_error_L: Optional[float] = None
    accuracy_line_kmeans: Optional[float] = None
    accuracy_nsc: Optional[float] = None
    accuracy_score: Optional[float] = None
    empirical_mean_size: Optional[float] = None
    expected_size: Optional[float] = None
    final_objective: Optional[float] = None
    converged: Optional[bool] = None
    wall_clock_seconds: float = 0.0
    error: Optional[str] = None

    @property
    def failed(self) -> bool:  # noqa: D
        return self.error is not None

    @property
    def cell(self) -> CellKey:  # noqa: D
        return (self.design, self.d, self.n_e)


class Quartiles(NamedTuple):
    """Lower quartile, median and upper quartile of a metric over the replicates of one cell."""

    q1: float
    median: float
    q3: float
    count: int


@dataclass(frozen=True)
class ExperimentReport:
    """Records of a simulation run, ordered by (d, n_e, replicate)."""

    records: Tuple[ExperimentRecord, ...]

    @property
    def cells(self) -> List[CellKey]:
        """Distinct grid cells in record order."""
        return list(dict.fromkeys(record.cell for record in self.records))

    def values(self, metric: str, d: Optional[int] = None, n_e: Optional[int] = None) -> List[float]:
        """Non-missing values of a metric, optionally restricted to one d and/or one n_e."""
        if metric not in METRIC_FIELDS:
            raise ValueError(f"Unknown metric `{metric}`; expected one of {METRIC_FIELDS}")
        selected = []
        for record in self.records:
            if d is not None and record.d != d:
                continue
            if n_e is not None and record.n_e != n_e:
                continue
            value = getattr(record, metric)
            if value is not None:
                selected.append(float(value))
        return selected

    def median(self, metric: str, d: Optional[int] = None, n_e: Optional[int] = None) -> float:
        """Median of a metric, NaN when no value is present."""
        values = self.values(metric, d=d, n_e=n_e)
        return float(np.median(values)) if values else float("nan")

    def summary(self, metric: str) -> Dict[CellKey, Quartiles]:
        """Quartiles of a metric per grid cell."""
        # Note: more_itertools.bucket does not produce empty groups
        by_cell = bucket(self.records, key=lambda record: record.cell)
        summary: Dict[CellKey, Quartiles] = {}
        for cell in self.cells:
            values = [float(getattr(record, metric)) for record in by_cell[cell] if getattr(record, metric) is not None]
            if not values:
                continue
            q1, median, q3 = np.percentile(values, [25, 50, 75])
            summary[cell] = Quartiles(q1=float(q1), median=float(median), q3=float(q3), count=len(values))
        return summary

    def failures(self) -> List[ExperimentRecord]:  # noqa: D
        return [record for record in self.records if record.failed]

    @staticmethod
    def columns(timing: bool = False) -> List[str]:
        """CSV header; the wall-clock column is only present when `timing` is set."""
        fields = [name for name in ExperimentRecord.__fields__ if timing or name != TIMING_FIELD]
        return ["schema_version"] + fields

    def _rows(self, timing: bool) -> List[Dict[str, object]]:
        exclude = None if timing else {TIMING_FIELD}
        return [json.loads(record.json(exclude=exclude)) for record in self.records]

    def write_csv(self, stream: IO[str], timing: bool = False) -> None:
        """One row per record; every row carries the report schema version.

        Without `timing` the output depends only on the grid and the options, so a fixed master seed reproduces it
        byte for byte.
        """
        writer = csv.DictWriter(stream, fieldnames=self.columns(timing), lineterminator="\n")
        writer.writeheader()
        for row in self._rows(timing):
            writer.writerow({"schema_version": REPORT_SCHEMA_VERSION, **{k: _csv_cell(v) for k, v in row.items()}})

    def to_json(self, timing: bool = False) -> str:
        """The records under a schema version; wall-clock times only with `timing`."""
        records = self._rows(timing)
        return json.dumps({"schema_version": REPORT_SCHEMA_VERSION, "records": records}, indent=2)

    @staticmethod
    def merge(reports: Sequence[ExperimentReport]) -> ExperimentReport:  # noqa: D
        return ExperimentReport(records=tuple(record for report in reports for record in report.records))


def _csv_cell(value: object) -> object:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value
