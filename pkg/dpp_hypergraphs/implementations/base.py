from __future__ import annotations

import json
from typing import Any, Dict, TypeVar

from dph_pydantic_shim import BaseModel, Extra


class HashableBaseModel(BaseModel):
    """Extends BaseModel with a generic hash function."""

    def __hash__(self) -> int:  # noqa: D
        return hash(self.json(sort_keys=True))


FrozenModelT = TypeVar("FrozenModelT", bound="FrozenBaseModel")


class FrozenBaseModel(HashableBaseModel):
    """Faux-immutable options model; unknown fields are rejected so typos in config files surface early."""

    class Config:
        """Pydantic feature."""

        allow_mutation = False
        extra = Extra.forbid

    def to_pretty_json(self) -> str:
        """Convert to a pretty JSON representation."""
        return json.dumps(json.loads(self.json()), indent=4, sort_keys=True)

    def with_updates(self: FrozenModelT, **updates: Any) -> FrozenModelT:
        """Return a validated copy with the given fields replaced.

        `copy(update=...)` skips validation, so the merged values are parsed again.
        """
        values: Dict[str, Any] = self.dict()
        values.update(updates)
        return type(self).parse_obj(values)

    def __str__(self) -> str:  # noqa: D
        return self.__repr__()
