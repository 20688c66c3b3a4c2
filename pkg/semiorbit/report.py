"""Rendering of solver results as text, CSV or JSON.

CSV columns for solve reports are fixed: ``D,l_or_L,n_or_N,method,r0,E0,deltaE,E,E_squared``.
JSON and CSV carry floats at full precision (``repr`` is the shortest string
that reads back to the same double); text mode rounds to 6 significant digits.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

CSV_COLUMNS = ("D", "l_or_L", "n_or_N", "method", "r0", "E0", "deltaE", "E", "E_squared")


@dataclass
class SolveReport:
    method: str
    D: int
    orbital: int
    radial: int
    r0: float
    E0: float
    deltaE: float
    E: float
    E_squared: float | None = None
    residual: float | None = None
    roots_found: int | None = None
    bound_class: str | None = None
    inputs: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "inputs": self.inputs,
            "method": self.method,
            "r0": _json_number(self.r0),
            "E0": _json_number(self.E0),
            "deltaE": _json_number(self.deltaE),
            "E": _json_number(self.E),
            "E_squared": _json_number(self.E_squared),
            "diagnostics": {
                "residual": _json_number(self.residual),
                "roots_found": self.roots_found,
                "bound_class": self.bound_class,
            },
        }

    def csv_row(self) -> list[Any]:
        return [
            self.D,
            self.orbital,
            self.radial,
            self.method,
            _full(self.r0),
            _full(self.E0),
            _full(self.deltaE),
            _full(self.E),
            _full(self.E_squared),
        ]


def _json_number(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _full(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _short(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_solve_reports(reports: Sequence[SolveReport], fmt: str) -> str:
    if fmt == "json":
        payload = [r.to_dict() for r in reports]
        return json.dumps(payload[0] if len(payload) == 1 else payload, indent=2)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for report in reports:
            writer.writerow(report.csv_row())
        return buffer.getvalue().rstrip("\n")

    blocks = []
    for r in reports:
        lines = [
            f"method: {r.method}   D={r.D}  orbital={r.orbital}  radial={r.radial}",
            f"  r0        = {_short(r.r0)}",
            f"  E0        = {_short(r.E0)}",
            f"  deltaE    = {_short(r.deltaE)}",
            f"  E         = {_short(r.E)}",
            f"  E_squared = {_short(r.E_squared)}",
        ]
        if r.residual is not None:
            lines.append(f"  residual  = {r.residual:.3g}  (roots found: {r.roots_found})")
        if r.bound_class is not None:
            lines.append(f"  bound     = {r.bound_class}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def format_table(columns: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str) -> str:
    """Render a generic table (table1, regge, check) in the chosen format."""
    if fmt == "json":
        return json.dumps(
            [{c: (_json_number(v) if isinstance(v, float) else v) for c, v in zip(columns, row)} for row in rows],
            indent=2,
        )
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_full(v) for v in row])
        return buffer.getvalue().rstrip("\n")

    cells = [[_short(v) for v in row] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells)
    return "\n".join(lines)
