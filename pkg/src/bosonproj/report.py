"""Deterministic JSON / CSV / text rendering of report tables.

JSON floats carry 17 significant digits, text tables 12.  Every document is a
``meta`` mapping plus a list of flat ``rows``.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np


def _float17(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    s = f"{x:.17g}"
    # keep a float visibly a float
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _to_json(obj) -> str:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float17(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(meta: dict, rows: list[dict]) -> str:
    body = ",\n".join("    " + _to_json(r) for r in rows)
    return "{\n  \"meta\": " + _to_json(meta) + ",\n  \"rows\": [\n" + body + ("\n" if rows else "") + "  ]\n}\n"


def _cell(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{digits}g}"
    return str(x)


def dumps_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    columns = columns or (list(rows[0]) if rows else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c), 17) for c in columns])
    return buf.getvalue()


def dumps_text(meta: dict, rows: list[dict], columns: list[str] | None = None) -> str:
    lines = [f"# {k}: {_cell(v, 12)}" for k, v in meta.items()]
    columns = columns or (list(rows[0]) if rows else [])
    cells = [[_cell(r.get(c), 12) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
    for row in cells:
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def render(fmt: str, meta: dict, rows: list[dict], columns: list[str] | None = None) -> str:
    if fmt == "json":
        return dumps_json(meta, rows)
    if fmt == "csv":
        return dumps_csv(rows, columns)
    if fmt == "text":
        return dumps_text(meta, rows, columns)
    raise ValueError(f"unknown format {fmt!r}")


CLOSURE_CSV_COLUMNS = ["pair_a", "pair_b", "coeff_index", "re", "im", "residual"]


def closure_long_rows(reports) -> list[dict]:
    """One CSV row per (pair, coefficient)."""
    rows = []
    for rep in reports:
        for i, c in enumerate(rep.coefficients):
            rows.append({"pair_a": rep.pair[0], "pair_b": rep.pair[1], "coeff_index": i,
                         "re": float(c.real), "im": float(c.imag), "residual": rep.residual})
    return rows


def closure_summary_rows(reports) -> list[dict]:
    """One CSV row per pair carrying its largest-magnitude coefficient."""
    rows = []
    for rep in reports:
        i = int(np.argmax(np.abs(rep.coefficients)))
        c = rep.coefficients[i]
        rows.append({"pair_a": rep.pair[0], "pair_b": rep.pair[1], "coeff_index": i,
                     "re": float(c.real), "im": float(c.imag), "residual": rep.residual})
    return rows


def ladder_rows(rows, labels) -> list[dict]:
    index = {lab: i for i, lab in enumerate(labels)}
    return [{"pair_a": "H", "pair_b": r.label, "coeff_index": index[r.label],
             "re": float(r.c.real), "im": float(r.c.imag), "residual": r.residual} for r in rows]
