"""Fitted-model files.

A model file is a UTF-8 YAML document followed by a checksum trailer line:

    format_version: v1.0
    n_v: 3
    d: 2
    vocabulary: [salt, flour, sugar]
    beta: 1.2500000000000000e+00
    alpha: [2.0000000000000001e-01, ...]
    V:
    - [1.0000000000000000e+00, 0.0000000000000000e+00]
    ...
    provenance: {...}
    # checksum: sha256:<hex digest of every byte above this line>

Floats are written with 17 significant digits, so reading and writing a file again reproduces it byte for byte.
"""
from __future__ import annotations

import hashlib
import logging
import math
from datetime import datetime, timezone
from typing import Any, Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import yaml
from dateutil import parser as date_parser
from dateutil import tz

from dpp_hypergraphs.constants import MODEL_FILE_FORMAT_VERSION
from dpp_hypergraphs.errors import (
    DimensionMismatchError,
    ModelFileChecksumError,
    ModelFileVersionError,
    ParsingException,
)
from dpp_hypergraphs.estimation.options import FitOptions, FitResult
from dpp_hypergraphs.implementations.base import FrozenBaseModel
from dpp_hypergraphs.kernel import LatentConfig
from dpp_hypergraphs.parsing.config_files import validate_against_schema
from dpp_hypergraphs.parsing.objects import Version
from dpp_hypergraphs.parsing.schemas import model_file_validator
from dpp_hypergraphs.parsing.yaml_loader import (
    YamlConfigLoader,
    strip_parsing_context,
)
from dpp_hypergraphs.validations.validator import LatentConfigValidator
from dph_pydantic_shim import ValidationError as PydanticValidationError
from dph_pydantic_shim import validator

logger = logging.getLogger(__name__)

CHECKSUM_PREFIX = "# checksum: sha256:"
FLOAT_FORMAT = "%.16e"


class ModelProvenance(FrozenBaseModel):
    """How a model was produced."""

    fit_options: Optional[FitOptions] = None
    seed: Optional[int] = None
    final_objective: Optional[float] = None
    aic: Optional[float] = None
    bic: Optional[float] = None
    iterations_used: Optional[int] = None
    converged: Optional[bool] = None
    created_at: datetime

    @validator("created_at", pre=True)
    @classmethod
    def _parse_timestamp(cls, value: Union[str, datetime]) -> datetime:
        parsed = date_parser.isoparse(value) if isinstance(value, str) else value
        if parsed.tzinfo is None:
            return parsed.replace(tzinfo=tz.UTC)
        return parsed.astimezone(tz.UTC)


class ModelFile(FrozenBaseModel):
    """Contents of a model file: the fitted parameters, node labels and provenance."""

    format_version: str = MODEL_FILE_FORMAT_VERSION
    n_v: int
    d: int
    vocabulary: Optional[Tuple[str, ...]] = None
    beta: float
    alpha: Tuple[float, ...]
    V: Tuple[Tuple[float, ...], ...]
    provenance: Optional[ModelProvenance] = None

    @staticmethod
    def from_config(
        config: LatentConfig,
        vocabulary: Optional[Sequence[str]] = None,
        provenance: Optional[ModelProvenance] = None,
    ) -> ModelFile:
        """Wrap a configuration; the vocabulary, when given, must have one label per node."""
        if vocabulary is not None and len(vocabulary) != config.n_v:
            raise DimensionMismatchError(f"Vocabulary has {len(vocabulary)} labels, config has {config.n_v} nodes")
        return ModelFile(
            n_v=config.n_v,
            d=config.d,
            vocabulary=tuple(vocabulary) if vocabulary is not None else None,
            beta=float(config.beta),
            alpha=tuple(float(value) for value in config.alpha),
            V=tuple(tuple(float(value) for value in row) for row in config.V),
            provenance=provenance,
        )

    @staticmethod
    def from_fit_result(
        result: FitResult, vocabulary: Optional[Sequence[str]] = None, created_at: Optional[datetime] = None
    ) -> ModelFile:
        """Model file for a fit, stamped with `created_at` (default: now, to the second, in UTC)."""
        provenance = ModelProvenance(
            fit_options=result.options,
            seed=result.options.seed,
            final_objective=result.final_objective,
            aic=result.aic,
            bic=result.bic,
            iterations_used=result.iterations_used,
            converged=result.converged,
            created_at=created_at or datetime.now(timezone.utc).replace(microsecond=0),
        )
        return ModelFile.from_config(result.config, vocabulary=vocabulary, provenance=provenance)

    def to_config(self) -> LatentConfig:
        """The parameters as a LatentConfig; shapes are checked, invariants are not."""
        V = np.array(self.V, dtype=float)
        if V.shape != (self.n_v, self.d):
            raise DimensionMismatchError(f"V has shape {V.shape}, header declares n_v={self.n_v}, d={self.d}")
        if len(self.alpha) != self.n_v:
            raise DimensionMismatchError(f"alpha has {len(self.alpha)} entries, header declares n_v={self.n_v}")
        if self.vocabulary is not None and len(self.vocabulary) != self.n_v:
            raise DimensionMismatchError(
                f"vocabulary has {len(self.vocabulary)} labels, header declares n_v={self.n_v}"
            )
        return LatentConfig(V=V, beta=self.beta, alpha=np.array(self.alpha, dtype=float))

    def labels(self) -> Tuple[str, ...]:
        """Node labels, falling back to 0-based indices when the model has no vocabulary."""
        if self.vocabulary is not None:
            return self.vocabulary
        return tuple(str(node) for node in range(self.n_v))


class LoadedModel(NamedTuple):
    """A model file that passed every check on read, with its validated configuration."""

    config: LatentConfig
    file: ModelFile

    @property
    def provenance(self) -> Optional[ModelProvenance]:  # noqa: D
        return self.file.provenance

    @property
    def vocabulary(self) -> Optional[Tuple[str, ...]]:  # noqa: D
        return self.file.vocabulary

    def labels(self) -> Tuple[str, ...]:  # noqa: D
        return self.file.labels()


class _ModelFileDumper(yaml.SafeDumper):
    """SafeDumper writing every finite float with 17 significant digits."""

    def represent_float(self, data: float) -> yaml.ScalarNode:  # noqa: D
        if not math.isfinite(data):
            return super().represent_float(data)
        return self.represent_scalar("tag:yaml.org,2002:float", FLOAT_FORMAT % data)


_ModelFileDumper.add_representer(float, _ModelFileDumper.represent_float)
# numpy scalars subclass float
_ModelFileDumper.add_multi_representer(float, _ModelFileDumper.represent_float)


def _body_document(model_file: ModelFile) -> Dict[str, Any]:
    provenance: Optional[Dict[str, Any]] = None
    if model_file.provenance is not None:
        provenance = model_file.provenance.dict()
        provenance["created_at"] = model_file.provenance.created_at.isoformat()
    return {
        "format_version": model_file.format_version,
        "n_v": model_file.n_v,
        "d": model_file.d,
        "vocabulary": list(model_file.vocabulary) if model_file.vocabulary is not None else None,
        "beta": model_file.beta,
        "alpha": list(model_file.alpha),
        "V": [list(row) for row in model_file.V],
        "provenance": provenance,
    }


def _checksum(body: bytes) -> str:
    return hashlib.sha256(body).hexdigest()


def dump_model_file(model_file: ModelFile) -> bytes:
    """Serialized model file, checksum trailer included."""
    text = yaml.dump(
        _body_document(model_file),
        Dumper=_ModelFileDumper,
        sort_keys=False,
        default_flow_style=None,
        allow_unicode=True,
        width=2**31 - 1,
    )
    body = text.encode("utf-8")
    return body + f"{CHECKSUM_PREFIX}{_checksum(body)}\n".encode("utf-8")


def _verified_body(raw: bytes, name: str) -> bytes:
    lines = raw.splitlines(keepends=True)
    if not lines or not lines[-1].startswith(CHECKSUM_PREFIX.encode("utf-8")):
        raise ModelFileChecksumError(f"Model file {name} has no checksum trailer; it may be truncated")
    body = b"".join(lines[:-1])
    recorded = lines[-1][len(CHECKSUM_PREFIX) :].strip().decode("ascii", errors="replace")
    actual = _checksum(body)
    if recorded != actual:
        raise ModelFileChecksumError(f"Model file {name} checksum mismatch: recorded {recorded}, computed {actual}")
    return body


def _check_version(document: Dict[str, Any], name: str) -> None:
    declared = document.get("format_version")
    if not isinstance(declared, str):
        raise ModelFileVersionError(f"Model file {name} does not declare a format_version")
    supported = Version.parse(MODEL_FILE_FORMAT_VERSION)
    try:
        version = Version.parse(declared)
    except ParsingException as e:
        raise ModelFileVersionError(f"Model file {name} has an unreadable format_version: {e}") from e
    if version.major_version != supported.major_version:
        raise ModelFileVersionError(
            f"Model file {name} has format version {version}; this release reads {supported.major_version}.x files"
        )
    if version.minor_version > supported.minor_version:
        logger.warning(
            f"Model file {name} has format version {version}, newer than {supported}; reading it as {supported}"
        )


def load_model_file(raw: bytes, name: str = "<model>") -> LoadedModel:
    """Parse the bytes of a model file.

    Checks run in this order: the checksum trailer, the format version, the schema, the shapes, then the invariants
    of the configuration.

    Raises:
        ModelFileChecksumError: the trailer is missing or does not match.
        ModelFileVersionError: the format version is missing, malformed or of another major version.
        ParsingException: the body is not valid UTF-8 YAML or does not follow the schema.
        DimensionMismatchError: the arrays disagree with the declared n_v and d.
        ConfigValidationException: the parameters break the model invariants.
    """
    body = _verified_body(raw, name)
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParsingException(f"Model file is not valid UTF-8: {e}", file_path=name) from e
    try:
        documents = [document for document in YamlConfigLoader.load_all_with_context(name, text)]
    except yaml.YAMLError as e:
        raise ParsingException(f"Invalid YAML: {e}", file_path=name) from e
    if len(documents) != 1 or not isinstance(documents[0], dict):
        raise ParsingException("Expected a single YAML mapping", file_path=name)
    document = documents[0]

    _check_version(document, name)
    validate_against_schema(document, model_file_validator, name, "Model file")
    try:
        model_file = ModelFile.parse_obj(strip_parsing_context(document))
    except PydanticValidationError as e:
        raise ParsingException(f"Invalid model file contents: {e}", file_path=name) from e

    config = model_file.to_config()
    LatentConfigValidator().checked_validations(config)
    return LoadedModel(config=config, file=model_file)


def write_model_file(model_file: ModelFile, path: str) -> None:  # noqa: D
    with open(path, "wb") as f:
        f.write(dump_model_file(model_file))


def read_model_file(path: str) -> LoadedModel:  # noqa: D
    with open(path, "rb") as f:
        return load_model_file(f.read(), name=path)


def write_model(
    result: FitResult, path: str, vocabulary: Optional[Sequence[str]] = None, created_at: Optional[datetime] = None
) -> ModelFile:
    """Persist a fit with its provenance; returns what was written."""
    model_file = ModelFile.from_fit_result(result, vocabulary=vocabulary, created_at=created_at)
    write_model_file(model_file, path)
    logger.info(f"Wrote model with n_v={model_file.n_v}, d={model_file.d} to {path}")
    return model_file


def read_model(path: str) -> LoadedModel:
    """Read and fully check a model file; see `load_model_file`."""
    return read_model_file(path)
