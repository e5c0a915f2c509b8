"""Deterministic CSV/JSON writers.

Floats are always written with 17 significant digits (``%.17g``), ``.`` as
decimal separator and ``\\n`` line endings, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .analysis import MonogamyResult, RegionGrid, SweepRow
from .model import CovarianceMatrix, reorder
from .steering import SteeringReport, SteeringTable, party_label


def fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".17g")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_value(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _json_value(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_json_value(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _json_value(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def json_text(obj: Any, indent: int = 2) -> str:
    """JSON with 17-significant-digit floats and insertion-ordered keys."""
    return _json_value(obj, indent, 0) + "\n"


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


# -- layouts ---------------------------------------------------------------

REPORT_COLUMNS = ("value_a_to_b", "value_b_to_a", "classification")


def report_record(r: SteeringReport) -> dict:
    return {
        "a": list(r.partition.a),
        "b": list(r.partition.b),
        "value_a_to_b": r.a_to_b,
        "value_b_to_a": r.b_to_a,
        "classification": r.direction,
        "asymmetry": r.asymmetry,
    }


def report_table(reports: Sequence[SteeringReport]):
    header = ["a", "b", "value_a_to_b", "value_b_to_a", "classification", "asymmetry"]
    rows = [[party_label(r.partition.a), party_label(r.partition.b), r.a_to_b, r.b_to_a, r.direction, r.asymmetry]
            for r in reports]
    return header, rows


def sweep_table(param: str, rows: Sequence[SweepRow]):
    """``param,value_a_to_b,value_b_to_a,classification`` per partition group.

    With more than one partition the three value columns repeat for each
    partition and carry its label as prefix, e.g. ``1->2:value_a_to_b``.
    """
    partitions = [r.partition for r in rows[0].reports] if rows else []
    if len(partitions) == 1:
        header = ["param", *REPORT_COLUMNS]
    else:
        header = ["param"] + [f"{p.label}:{c}" for p in partitions for c in REPORT_COLUMNS]
    body = []
    for row in rows:
        line: list[Any] = [row.value]
        for r in row.reports:
            line.extend([r.a_to_b, r.b_to_a, r.direction])
        body.append(line)
    return header, body


def sweep_record(param: str, rows: Sequence[SweepRow], meta: dict | None = None) -> dict:
    return {
        **(meta or {}),
        "param": param,
        "partitions": [r.partition.label for r in rows[0].reports] if rows else [],
        "rows": [{"param": row.value, "reports": [report_record(r) for r in row.reports]} for row in rows],
    }


def matrix_table(table: SteeringTable):
    """Rows are steering parties, columns steered parties.

    The square single-mode matrix is written in full (zero diagonal); in
    grouped tables cells that were not evaluated are left empty.
    """
    full = table.is_single_mode
    header = ["steering", *table.col_labels]
    body = []
    for i, label in enumerate(table.row_labels):
        cells = [table.values[i, j] if full or table.evaluated[i, j] else None for j in range(len(table.cols))]
        body.append([label, *cells])
    return header, body


def matrix_record(table: SteeringTable, meta: dict | None = None) -> dict:
    return {
        **(meta or {}),
        "rows": table.row_labels,
        "cols": table.col_labels,
        "values": [[table.values[i, j] if table.is_single_mode or table.evaluated[i, j] else None
                    for j in range(len(table.cols))] for i in range(len(table.rows))],
    }


def region_table(grid: RegionGrid):
    if grid.axis_y is None:
        header = [grid.axis_x.name, "value", "passed"]
        passed = grid.passed if grid.passed is not None else np.ones_like(grid.values, dtype=bool)
        body = [[x, v, bool(p)] for x, v, p in zip(grid.axis_x.values(), grid.values, passed)]
        return header, body
    header = [grid.axis_x.name, grid.axis_y.name, "value", "passed"]
    passed = grid.passed if grid.passed is not None else np.ones_like(grid.values, dtype=bool)
    xs, ys = grid.axis_x.values(), grid.axis_y.values()
    body = [[xs[i], ys[j], grid.values[j, i], bool(passed[j, i])]
            for j in range(len(ys)) for i in range(len(xs))]
    return header, body


def axis_record(axis) -> dict | None:
    if axis is None:
        return None
    return {"name": axis.name, "from": axis.start, "to": axis.stop, "steps": axis.steps}


def region_record(grid: RegionGrid, meta: dict | None = None) -> dict:
    return {
        **(meta or {}),
        "predicate": grid.predicate_name,
        "axis_x": axis_record(grid.axis_x),
        "axis_y": axis_record(grid.axis_y),
        "fixed": grid.fixed.as_dict(),
        "values": grid.values,
        "passed": grid.passed if grid.passed is not None else None,
    }


def terms_text(terms) -> str:
    return ";".join(f"{label}={fmt(v)}" for label, v in terms)


MONOGAMY_HEADER = ["type", "instance", "lhs", "rhs", "residual", "satisfied"]


def monogamy_row(r: MonogamyResult) -> list:
    return [r.type_tag, r.instance.label, terms_text(r.lhs), terms_text(r.rhs), r.residual, r.satisfied]


def monogamy_record(r: MonogamyResult) -> dict:
    return {
        "type": r.type_tag,
        "instance": r.instance.label,
        "lhs": [{"partition": k, "value": v} for k, v in r.lhs],
        "rhs": [{"partition": k, "value": v} for k, v in r.rhs],
        "residual": r.residual,
        "satisfied": r.satisfied,
    }


def covariance_table(sigma: CovarianceMatrix):
    """Interleaved (X1, Y1, ..., X6, Y6) export with a leading row-label column."""
    inter = reorder(sigma, "interleaved")
    labels = [f"{q}{m}" for m in inter.modes for q in ("X", "Y")]
    header = ["row", *labels]
    body = [[labels[i], *inter.sigma[i]] for i in range(len(labels))]
    return header, body
