"""Single import point for the pydantic v1 API, whichever pydantic major version is installed.

All option and file-format models in `dpp_hypergraphs` are written against the v1 API. Pydantic 2 ships that API
under `pydantic.v1`, so this module resolves the right location once and the rest of the package imports from here.
"""
from importlib.metadata import version

pydantic_version = version("pydantic")
pydantic_major = int(pydantic_version.split(".")[0])

if pydantic_major == 1:
    from pydantic import (  # type: ignore  # noqa
        BaseModel,
        Extra,
        Field,
        ValidationError,
        root_validator,
        validator,
    )
elif pydantic_major == 2:
    from pydantic.v1 import (  # type: ignore  # noqa
        BaseModel,
        Extra,
        Field,
        ValidationError,
        root_validator,
        validator,
    )
else:
    raise RuntimeError(f"dpp-hypergraphs supports pydantic 1 and 2, found pydantic {pydantic_version}")
