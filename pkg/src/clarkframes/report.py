"""Verification reports and deterministic JSON/CSV emission."""

from __future__ import annotations

import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

SCHEMA_VERSION = 1


def fmt_float(x: float) -> str:
    """17 significant digits; non-finite values are spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return format(x, ".17g")


def _plain(obj: Any) -> Any:
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats written by :func:`fmt_float`.

    Non-finite floats become strings, since JSON has no literal for them.
    """
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        s = fmt_float(obj)
        return s if math.isfinite(obj) else json.dumps(s)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        cells = []
        for v in row:
            v = _plain(v)
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(fmt_float(v))
            else:
                cells.append(str(v))
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def spec_hash(spec: dict) -> str:
    canonical = json.dumps(spec, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class CheckRecord:
    name: str
    residual: float
    tolerance: float
    parameters: dict = field(default_factory=dict)
    # "below" passes when residual < tolerance, "above" when residual > tolerance
    sense: str = "below"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.residual):
            return False
        if self.sense == "above":
            return self.residual > self.tolerance
        return self.residual < self.tolerance

    def as_dict(self) -> dict:
        return {"name": self.name, "parameters": self.parameters, "residual": self.residual,
                "tolerance": self.tolerance, "sense": self.sense, "pass": self.passed}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record

    def skip(self, name: str, reason: str):
        self.skipped.append({"name": name, "reason": reason})

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"schemaVersion": SCHEMA_VERSION, "verdict": "pass" if self.passed else "fail",
                "provenance": self.provenance, "checks": [c.as_dict() for c in self.checks],
                "skipped": self.skipped}

    def to_json(self) -> str:
        return dumps(self.as_dict()) + "\n"

    def to_csv(self) -> str:
        return write_csv(["name", "residual", "tolerance", "sense", "pass"],
                         [(c.name, c.residual, c.tolerance, c.sense, c.passed) for c in self.checks])
