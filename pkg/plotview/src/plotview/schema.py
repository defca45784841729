"""Artifact reading against the documented JSON schema.

The renderer deliberately has no dependency on the pipeline package: it reads
the ``{schema_version, kind, payload}`` envelope, checks the version, and
hands the payload dict to the matching renderer.
"""

from __future__ import annotations

import json
from pathlib import Path

SUPPORTED_SCHEMA_VERSION = 1

FIGURE_KINDS = (
    "timeseries",
    "psd",
    "correlation",
    "embedding",
    "significance",
    "confusion",
    "comparison",
)


class ArtifactError(Exception):
    """Malformed artifact, unsupported schema version, or unknown kind."""


def load_artifact(path) -> tuple[str, dict]:
    path = Path(path)
    try:
        document = json.loads(path.read_text())
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ArtifactError(f"{path}: artifact must be a JSON object")
    version = document.get("schema_version")
    if version != SUPPORTED_SCHEMA_VERSION:
        raise ArtifactError(
            f"{path}: schema_version {version!r} unsupported "
            f"(supported: {SUPPORTED_SCHEMA_VERSION})"
        )
    kind = document.get("kind")
    payload = document.get("payload")
    if not isinstance(kind, str) or not isinstance(payload, dict):
        raise ArtifactError(f"{path}: missing kind/payload fields")
    return kind, payload
