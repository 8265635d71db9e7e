"""CSV and JSON writers with stable number formatting.

Computed values are printed with 9 significant digits (round-half-even on
the exact binary value). Configuration echoes and axis coordinates in JSON
keep full precision so any cell can be recomputed from the file alone.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .sweep import SweepGrid

SIGNIFICANT_DIGITS = 9


@dataclass
class Record:
    """A single named result (one CSV row)."""

    values: dict
    metadata: dict = field(default_factory=dict)


@dataclass
class Table:
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)


def format_number(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    text = format(float(v), f".{SIGNIFICANT_DIGITS}g")
    return "0" if text == "-0" else text


def _rounded(v):
    if isinstance(v, (float, np.floating)):
        return float(format_number(v))
    return v


def _plain(v, rounded: bool):
    """Convert numpy containers and scalars to JSON-ready Python objects."""
    if isinstance(v, dict):
        return {str(k): _plain(x, rounded) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x, rounded) for x in v]
    if isinstance(v, np.generic):
        v = v.item()
    return _rounded(v) if rounded else v


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def to_csv(obj) -> str:
    if isinstance(obj, Record):
        return _csv_text(list(obj.values), [list(obj.values.values())])
    if isinstance(obj, Table):
        return _csv_text(obj.columns, obj.rows)
    if isinstance(obj, SweepGrid):
        aux = list(obj.row_aux)
        header = [obj.y_axis.name, *aux, obj.x_axis.name, obj.value_name]
        rows = []
        for i, y in enumerate(obj.y_axis.values):
            extra = [obj.row_aux[k][i] for k in aux]
            for j, x in enumerate(obj.x_axis.values):
                rows.append([y, *extra, x, obj.values[i, j]])
        return _csv_text(header, rows)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj) -> str:
    if isinstance(obj, Record):
        doc = {"metadata": obj.metadata, "axes": {}, "values": _plain(obj.values, True)}
    elif isinstance(obj, Table):
        doc = {
            "metadata": obj.metadata,
            "axes": {"columns": list(obj.columns)},
            "values": _plain(obj.rows, True),
        }
    elif isinstance(obj, SweepGrid):
        axes = {}
        for key, axis in (("x", obj.x_axis), ("y", obj.y_axis)):
            axes[key] = {"name": axis.name, "units": axis.units, "values": _plain(axis.values, False)}
        if obj.row_aux:
            axes["y_aux"] = {k: _plain(v, True) for k, v in obj.row_aux.items()}
        doc = {
            "metadata": obj.metadata,
            "axes": axes,
            "values": _plain(obj.values, True),
        }
        doc["metadata"] = {**obj.metadata, "value_name": obj.value_name, "value_units": obj.value_units}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    doc["metadata"] = _plain(doc["metadata"], False)
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"
