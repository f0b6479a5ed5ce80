"""Low-level file and serialization helpers.

Canonical JSON here means: keys sorted, floats rendered with 9 significant
digits, booleans/None in JSON spelling, ASCII-escaped strings. Identical
values therefore always produce byte-identical documents.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

from .errors import IoError

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a over ``data``. Cheap provenance hash, not cryptographic."""
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _U64
    return h


def format_float(value: float) -> str:
    """Render a float at 9 significant digits (the on-disk float format)."""
    if not math.isfinite(value):
        raise ValueError(f"non-finite float cannot be serialized: {value!r}")
    return format(float(value), ".9g")


def quantize_float(value: float) -> float:
    """Round to the nearest float representable at 9 significant digits."""
    return float(format_float(value))


def dumps_canonical(obj: object) -> str:
    """Serialize ``obj`` to canonical JSON (no trailing newline)."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps_canonical(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"canonical JSON requires string keys, got {key!r}")
            items.append(f"{json.dumps(key, ensure_ascii=True)}: {dumps_canonical(obj[key])}")
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} canonically")


def atomic_write_text(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file and rename.

    Failures never leave a partial file at ``path``.
    """
    directory = os.path.dirname(os.path.abspath(path))
    tmp_name = None
    try:
        with tempfile.NamedTemporaryFile(
            "w", encoding="utf-8", dir=directory, prefix=".tmp-", delete=False
        ) as handle:
            tmp_name = handle.name
            handle.write(text)
        os.replace(tmp_name, path)
        tmp_name = None
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        if tmp_name is not None:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass


def read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
