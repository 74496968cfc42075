"""JSON input/output with deterministic formatting.

Output JSON has sorted keys and every float written with 17 significant
digits, so identical inputs give byte-identical documents.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .induced_fields import SystemPair


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    text = f"{x:.17g}"
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}"
            for k in sorted(obj, key=str)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def _matrix_field(d: dict, key: str) -> np.ndarray:
    if key not in d:
        raise ValueError(f"system file is missing {key!r}")
    M = d[key]
    if (not isinstance(M, list) or len(M) != 3
            or any(not isinstance(row, list) or len(row) != 3 for row in M)):
        raise ValueError(f"{key!r} must be a 3x3 array")
    try:
        arr = np.array(M, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{key!r} has non-numeric entries") from exc
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{key!r} has non-finite entries")
    return arr


def system_from_dict(d: dict) -> SystemPair:
    if not isinstance(d, dict):
        raise ValueError("system file must hold a JSON object")
    label = d.get("label")
    if label is not None and not isinstance(label, str):
        raise ValueError("'label' must be a string")
    return SystemPair(_matrix_field(d, "A"), _matrix_field(d, "B"), label=label)


def system_to_dict(sys: SystemPair) -> dict:
    out = {"A": sys.A.tolist(), "B": sys.B.tolist()}
    if sys.label is not None:
        out["label"] = sys.label
    return out


def load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON ({exc})") from exc


def load_system(path) -> SystemPair:
    return system_from_dict(load_json(path))


def parse_point(text: str, accept: float = 1e-6) -> np.ndarray:
    """Parse ``"x,y,z"``; points within ``accept`` of unit norm are normalized."""
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected x,y,z but got {text!r}")
    try:
        v = np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ValueError(f"non-numeric coordinate in {text!r}") from exc
    n = float(np.linalg.norm(v))
    if not math.isfinite(n) or abs(n - 1.0) > accept:
        raise ValueError(f"point {text!r} has norm {n:.17g}, not within {accept:g} of 1")
    return v / n
