"""Versioned JSON reports emitted by the command-line tool.

Reports are serialised canonically (sorted keys, fixed float repr) so that
identical invocations produce identical bytes.  Wall-clock time is only
recorded when explicitly requested.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from pathlib import Path

import jsonschema
import numpy as np

SCHEMA_VERSION = "1.0"
STATUSES = ("pass", "fail", "unsat", "sat", "indeterminate")

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "status", "input_digest", "metrics", "witnesses", "elapsed"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string", "minLength": 1},
        "status": {"enum": list(STATUSES)},
        "input_digest": {"type": ["string", "null"], "pattern": "^sha256:[0-9a-f]{64}$"},
        "metrics": {"type": "object"},
        "witnesses": {"type": ["object", "array", "null"]},
        "elapsed": {"type": ["number", "null"], "minimum": 0},
    },
}

_validator = jsonschema.Draft202012Validator(REPORT_SCHEMA)


class ReportError(ValueError):
    pass


def digest(*blobs: bytes) -> str | None:
    if not blobs:
        return None
    h = hashlib.sha256()
    for b in blobs:
        h.update(hashlib.sha256(b).digest())
    return "sha256:" + h.hexdigest()


def _plain(x):
    """Convert numpy scalars/arrays and tuples into JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return x
    return x


def make_report(command: str, status: str, metrics: dict, witnesses=None,
                inputs: tuple[bytes, ...] = (), elapsed: float | None = None) -> dict:
    rep = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "input_digest": digest(*inputs),
        "metrics": _plain(metrics),
        "witnesses": _plain(witnesses),
        "elapsed": None if elapsed is None else round(float(elapsed), 6),
    }
    validate(rep)
    return rep


def validate(rep: dict) -> None:
    errors = sorted(_validator.iter_errors(rep), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.path) or "<root>"
        raise ReportError(f"report fails schema at {where}: {e.message}")


def dumps(doc) -> str:
    return json.dumps(_plain(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
