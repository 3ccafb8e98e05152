"""Long-format experiment reports.

CSV columns, in order:

    experiment  kind of run
    n           sample size
    replicate   replicate index, or -1 for rows aggregated over replicates
    seed        derived 64-bit seed of the replicate (empty when aggregated)
    r_n, rho_n  graph radius and ball radius at this n (rho_n empty when unused)
    quantity    what the row measures (mu_n, h_n, h_ddag_min, exceedance, ...)
    param       sub-key of the quantity (test function name, t value, ...)
    value       estimator value
    target      continuum value it is compared with (empty when none)
    abs_error   |value - target|, signed margin for exceedance rows
    rel_error   abs_error / |target|
    flag        degenerate | failed | exceeds | violation | empty
    detail      free text (argmin description, standard error, ...)
    wall_ms     wall time per replicate, empty unless timing is recorded

Floats are written with 17 significant digits, infinity as ``inf``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import astuple, dataclass, field

import numpy as np

COLUMNS = (
    "experiment",
    "n",
    "replicate",
    "seed",
    "r_n",
    "rho_n",
    "quantity",
    "param",
    "value",
    "target",
    "abs_error",
    "rel_error",
    "flag",
    "detail",
    "wall_ms",
)
_INT_COLUMNS = {"n", "replicate", "seed"}
_FLOAT_COLUMNS = {"r_n", "rho_n", "value", "target", "abs_error", "rel_error", "wall_ms"}


def format_float(x: float | None) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def parse_float(text: str) -> float | None:
    return None if text == "" else float(text)


def errors(value: float, target: float | None) -> tuple[float | None, float | None]:
    """(|value - target|, relative error) with inf - inf read as a zero error.

    The relative error is left empty for a zero target.
    """
    if target is None:
        return None, None
    if value == target:
        return 0.0, 0.0
    err = abs(value - target)
    rel = err / abs(target) if target != 0 else None
    return err, rel


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    n: int
    replicate: int
    seed: int | None
    r_n: float | None
    rho_n: float | None
    quantity: str
    param: str = ""
    value: float | None = None
    target: float | None = None
    abs_error: float | None = None
    rel_error: float | None = None
    flag: str = ""
    detail: str = ""
    wall_ms: float | None = None

    def cells(self) -> list[str]:
        out = []
        for name, v in zip(COLUMNS, astuple(self)):
            if name in _FLOAT_COLUMNS:
                out.append(format_float(v))
            elif v is None:
                out.append("")
            else:
                out.append(str(v))
        return out

    @classmethod
    def from_cells(cls, cells: list[str]) -> "ReportRow":
        if len(cells) != len(COLUMNS):
            raise ValueError(f"expected {len(COLUMNS)} columns, got {len(cells)}")
        kw = {}
        for name, text in zip(COLUMNS, cells):
            if name in _FLOAT_COLUMNS:
                kw[name] = parse_float(text)
            elif name in _INT_COLUMNS:
                kw[name] = None if text == "" else int(text)
            else:
                kw[name] = text
        return cls(**kw)


def row_with_target(base: dict, quantity: str, value: float, target: float | None, param: str = "", flag: str = "", detail: str = "") -> ReportRow:
    err, rel = errors(value, target)
    return ReportRow(quantity=quantity, param=param, value=value, target=target, abs_error=err, rel_error=rel, flag=flag, detail=detail, **base)


@dataclass
class ExperimentReport:
    experiment: str
    rows: list[ReportRow]
    config: tuple[tuple[str, str], ...] = ()
    checks: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in self.rows:
            writer.writerow(row.cells())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ExperimentReport":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise ValueError("unexpected report header")
        rows = [ReportRow.from_cells(cells) for cells in reader]
        experiment = rows[0].experiment if rows else ""
        return cls(experiment, rows)

    def select(self, quantity: str, param: str | None = None) -> list[ReportRow]:
        return [r for r in self.rows if r.quantity == quantity and (param is None or r.param == param)]

    def medians(self, quantity: str, column: str = "abs_error", param: str | None = None) -> dict[int, float]:
        """Per-n median of a column over the selected rows."""
        grouped: dict[int, list[float]] = {}
        for r in self.select(quantity, param):
            grouped.setdefault(r.n, []).append(getattr(r, column))
        return {n: float(np.median(v)) for n, v in sorted(grouped.items())}

    def summary(self) -> list[dict]:
        groups: dict[tuple, list[ReportRow]] = {}
        for r in self.rows:
            groups.setdefault((r.quantity, r.param, r.n), []).append(r)
        out = []
        for (quantity, param, n), rows in groups.items():
            entry = {"quantity": quantity, "param": param, "n": n, "count": len(rows)}
            for column in ("value", "abs_error"):
                vals = np.array([getattr(r, column) for r in rows if getattr(r, column) is not None], dtype=float)
                if len(vals):
                    q1, med, q3 = np.percentile(vals, [25, 50, 75])
                    entry[column] = {"median": _json_float(med), "q1": _json_float(q1), "q3": _json_float(q3)}
            entry["flagged"] = sum(1 for r in rows if r.flag)
            out.append(entry)
        return out

    def to_json(self) -> str:
        doc = {
            "experiment": self.experiment,
            "config": dict(self.config),
            "summary": self.summary(),
            "checks": [c.as_dict() for c in self.checks],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def write(self, prefix: str) -> tuple[str, str]:
        """Write ``prefix.csv`` and ``prefix.json``; returns both paths."""
        csv_path, json_path = prefix + ".csv", prefix + ".json"
        with open(csv_path, "w", newline="") as fh:
            fh.write(self.to_csv())
        with open(json_path, "w") as fh:
            fh.write(self.to_json())
        return csv_path, json_path

    @property
    def failed(self) -> bool:
        return any(r.flag == "failed" for r in self.rows)


def _json_float(x: float):
    x = float(x)
    return x if math.isfinite(x) else format_float(x)
