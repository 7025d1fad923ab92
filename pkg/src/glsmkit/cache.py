"""Content-addressed result cache for CLI computations.

Keys hash the canonical model serialization, the command, the truncation,
the insertion data, and the engine version, so identical inputs share a slot
and any change invalidates it.  Writes go to a temp file first and are
renamed into place.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import ENGINE_VERSION
from .model import GLSMModel, serialize_model

CACHE_ENV = "GLSMKIT_CACHE_DIR"


def job_key(model: GLSMModel, command: str, truncation: dict, extras: dict | None = None) -> str:
    payload = {
        "model": serialize_model(model),
        "command": command,
        "truncation": truncation,
        "extras": extras or {},
        "engine_version": ENGINE_VERSION,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "glsmkit"


def cache_get(key: str) -> str | None:
    path = cache_dir() / f"{key}.json"
    try:
        return path.read_text(encoding="utf-8")
    except OSError:
        return None


def cache_put(key: str, text: str) -> None:
    directory = cache_dir()
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, directory / f"{key}.json")
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
