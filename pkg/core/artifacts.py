"""
Stage artifacts on disk.

Every artifact is one JSON document carrying its schema name, the schema
version and the fingerprint of the config that produced it. Keys are sorted
and there are no timestamps, so equal inputs and config give equal bytes.
"""

import json
import os
from typing import Any, Dict, Optional

from core.config import SCHEMA_VERSION
from core.errors import IoError


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_artifact(path: str, schema: str, payload: Dict[str, Any], config_fingerprint: str) -> str:
    document = {"schema": schema, "schema_version": SCHEMA_VERSION, "config_fingerprint": config_fingerprint}
    document.update(payload)
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(dumps(document))
    except (OSError, ValueError) as exc:
        raise IoError(path, f"cannot write artifact: {exc}") from exc
    return path


def read_artifact(path: str, schema: Optional[str] = None) -> Dict[str, Any]:
    """
    Load an artifact, checking its schema name and version.

    Raises:
        IoError: file missing, not JSON, or of another schema/version
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except FileNotFoundError as exc:
        raise IoError(path, "artifact not found (run the earlier stage first)") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(path, f"unreadable artifact: {exc}") from exc
    if not isinstance(document, dict):
        raise IoError(path, "artifact is not a JSON object")
    if schema is not None and document.get("schema") != schema:
        raise IoError(path, f"expected schema '{schema}', found '{document.get('schema')}'")
    if document.get("schema_version") != SCHEMA_VERSION:
        raise IoError(path, f"unsupported schema_version {document.get('schema_version')}")
    return document
