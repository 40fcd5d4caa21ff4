"""Deterministic JSON output: fixed field order, floats at 12 significant digits."""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction

import numpy as np

from .rationals import ReducedRational

SCHEMA = "sqdiff/1"


def normalize(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(obj, complex):
        return {"re": normalize(obj.real), "im": normalize(obj.imag)}
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, ReducedRational):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return normalize(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return normalize(dataclasses.asdict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, schema: bool = True) -> str:
    data = normalize(obj)
    if schema and isinstance(data, dict):
        data = {"schema": SCHEMA, **data}
    return json.dumps(data, separators=(", ", ": "))
