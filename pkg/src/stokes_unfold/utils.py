"""Utility functions for stokes-unfold.

File output and report serialization shared by the CLI.

Design Philosophy:
- Atomic operations for file writes (temp file + rename)
- Safe parsing with error recovery
- One serialization path for complex numbers, matrices and enums
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from collections.abc import Iterable, Sequence
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import AtomicWriteError, ConfigurationError

SCHEMA_VERSION = 1

# ============================================================================
# File Operations (Atomic & Safe)
# ============================================================================


def atomic_write(path: Path, content: str) -> None:
    """Write file atomically using temp file + rename pattern.

    Strategy:
    1. Write to temporary file in same directory
    2. Sync to disk (fsync)
    3. Atomic rename to target path

    Args:
        path: Target file path
        content: Content to write

    Raises:
        AtomicWriteError: If write operation fails

    Example:
        >>> atomic_write(Path("/tmp/stokes.json"), '{"schema": 1}')
    """
    path.parent.mkdir(parents=True, exist_ok=True)

    try:
        fd, temp_path = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as e:
        raise AtomicWriteError(f"Failed to create temp file: {e}", str(path)) from e

    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(content)
            f.flush()
            os.fsync(f.fileno())
        os.replace(temp_path, path)
    except Exception as e:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise AtomicWriteError(f"Failed to write {path}: {e}", str(path)) from e


def parse_toml_safe(path: Path) -> dict[str, Any]:
    """Parse TOML file with graceful error handling.

    Args:
        path: Path to TOML file

    Returns:
        Parsed TOML as dictionary (empty dict for an empty file)

    Raises:
        ConfigurationError: If the file is missing or is invalid TOML

    Example:
        >>> config = parse_toml_safe(Path("run.toml"))
        >>> print(config.get("params", {}))
    """
    if not path.exists():
        raise ConfigurationError(f"Config file not found: {path}", config_path=str(path))

    try:
        # Python 3.11+ has tomllib in stdlib
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib

        content = path.read_bytes()
        if not content:
            return {}
        result: dict[str, Any] = tomllib.loads(content.decode("utf-8"))
        return result

    except Exception as e:
        raise ConfigurationError(f"Invalid TOML in {path}: {e}", config_path=str(path)) from e


# ============================================================================
# Serialization
# ============================================================================


def to_jsonable(value: Any) -> Any:
    """Convert report values to JSON-compatible data.

    Complex numbers become {"re": .., "im": ..}, numpy arrays nested lists,
    enums their value, and objects with to_dict() their dictionary.
    Non-finite floats become null.
    """
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    if isinstance(value, (complex, np.complexfloating)):
        number = complex(value)
        return {"re": to_jsonable(number.real), "im": to_jsonable(number.imag)}
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in value]
    return str(value)


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def render_json(command: str, body: dict[str, Any], timestamp: bool = True) -> str:
    """Versioned JSON document: schema, command, optional generated_at, then the body."""
    document: dict[str, Any] = {"schema": SCHEMA_VERSION, "command": command}
    if timestamp:
        document["generated_at"] = utc_timestamp()
    document.update(body)
    return json.dumps(to_jsonable(document), indent=2) + "\n"


def _csv_cell(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (complex, np.complexfloating)):
        number = complex(value)
        return f"{number.real!r},{number.imag!r}"
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text, header row first. The generated_at stamp is carried by JSON only."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buffer.getvalue()


def emit(content: str, out: Path | None) -> None:
    """Write to a file atomically, or to stdout."""
    if out is None:
        print(content, end="")
    else:
        atomic_write(out, content)
