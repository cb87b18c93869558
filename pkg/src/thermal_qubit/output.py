"""Deterministic table serialization (CSV with ``#`` metadata, or JSON)."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field


def fmt(x):
    """17 significant digits, ``.`` decimal; NaN and None become empty fields."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        return ""
    return format(x, ".17g")


def _json_value(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        for key, val in self.metadata.items():
            buf.write(f"# {key} = {_meta_text(val)}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(fmt(v) for v in row) + "\n")
        return buf.getvalue()

    def to_json(self):
        doc = {"metadata": {k: _json_meta(v) for k, v in self.metadata.items()},
               "columns": list(self.columns),
               "rows": [[_json_value(v) for v in row] for row in self.rows]}
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"

    def render(self, format="csv"):
        if format == "csv":
            return self.to_csv()
        if format == "json":
            return self.to_json()
        raise ValueError(f"unknown format {format!r}")


def _meta_text(val):
    if isinstance(val, float):
        return fmt(val)
    if isinstance(val, dict):
        return json.dumps({k: _json_meta(v) for k, v in val.items()}, sort_keys=True)
    return str(val)


def _json_meta(val):
    if isinstance(val, dict):
        return {k: _json_meta(v) for k, v in val.items()}
    if isinstance(val, (list, tuple)):
        return [_json_meta(v) for v in val]
    if isinstance(val, float):
        return val if math.isfinite(val) else None
    return val


def read_csv(text):
    """Parse :meth:`Table.to_csv` output back into a :class:`Table` of floats."""
    meta, columns, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            meta[key.strip()] = val.strip()
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append([float(v) if v else math.nan for v in line.split(",")])
    return Table(columns or [], rows, meta)


def write(table, fmt_name, path=None, stream=None):
    text = table.render(fmt_name)
    if path is None:
        stream.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    return text
