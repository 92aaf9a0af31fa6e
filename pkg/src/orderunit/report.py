"""Structured, serialisable outcomes of checks and searches."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields, is_dataclass
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def fmt_real(x: float) -> str:
    """17 significant digits: round-trips any double exactly."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"  # also folds -0.0
    return f"{x:.17g}"


def to_jsonable(obj: Any) -> Any:
    """Convert reports, dataclasses and numpy values to plain JSON types.

    Vectors become lists of decimal strings; scalars stay numbers unless
    they are non-finite.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return str(obj.value)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else fmt_real(x)
    if isinstance(obj, np.ndarray):
        if obj.ndim == 0:
            return to_jsonable(obj.item())
        if obj.ndim == 1:
            return [fmt_real(v) for v in obj]
        return [to_jsonable(row) for row in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


@dataclass
class Report:
    """Outcome of a check.

    ``sampled`` marks evidence gathered from finitely many random probes;
    such a report supports a statement but does not prove it.
    """

    name: str
    anchor: str
    passed: bool = True
    sampled: bool = False
    data: dict[str, Any] = field(default_factory=dict)
    failures: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def fail(self, **info: Any) -> None:
        self.passed = False
        self.failures.append(info)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "passed": self.passed,
            "sampled": self.sampled,
            "data": self.data,
            "failures": self.failures,
            "notes": self.notes,
        }

    def __bool__(self) -> bool:
        return self.passed
