"""Deterministic JSON and CSV rendering.

Floats are always written with 17 significant digits so that output is
byte-identical across runs and round-trips to the same doubles.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence

import numpy as np


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        # JSON has no literal for these; null keeps the document valid.
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def to_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """Serialise nested dicts, lists, numbers, strings and complex values.

    Complex numbers become ``[re, im]`` pairs.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _json_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return to_json([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(to_json(v) for v in seq) + "]"
        items = [pad + to_json(v, indent, _level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def csv_lines(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(fmt_float(v) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    return "\n".join(out) + "\n"
