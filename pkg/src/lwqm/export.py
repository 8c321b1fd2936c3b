"""Tabular artifacts and their CSV / JSON serialisations."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

FLOAT_FORMAT = "%.12e"


def _cell(v: Any) -> Any:
    """Canonical cell value: floats rounded to 12 significant digits, so CSV and JSON agree."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    f = float(v)
    if f != f or f in (float("inf"), float("-inf")):
        return f
    return float(FLOAT_FORMAT % f)


@dataclass(frozen=True)
class TableArtifact:
    """Named columns, rows of cells, and metadata describing how they were produced."""

    columns: Tuple[str, ...]
    rows: Tuple[Tuple[Any, ...], ...]
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row {r!r} does not match columns {self.columns!r}")

    @classmethod
    def build(cls, columns: Sequence[str], rows: Sequence[Sequence[Any]],
              meta: Dict[str, Any] | None = None) -> "TableArtifact":
        """Create a table, splitting complex columns into ``<name>_re`` / ``<name>_im``."""
        rows = [list(r) for r in rows]
        is_complex = [any(isinstance(r[j], complex) for r in rows) for j in range(len(columns))]
        cols: List[str] = []
        for name, cplx in zip(columns, is_complex):
            cols.extend([f"{name}_re", f"{name}_im"] if cplx else [name])
        out = []
        for r in rows:
            cells = []
            for v, cplx in zip(r, is_complex):
                if cplx:
                    c = complex(v)
                    cells.extend([_cell(c.real), _cell(c.imag)])
                else:
                    cells.append(_cell(v))
            out.append(tuple(cells))
        return cls(tuple(cols), tuple(out), dict(meta or {}))

    def column(self, name: str) -> List[Any]:
        j = self.columns.index(name)
        return [r[j] for r in self.rows]


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return FLOAT_FORMAT % v
    return str(v)


def to_csv(table: TableArtifact) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json_safe(v: Any) -> Any:
    # JSON has no inf/nan literals; they are written as null
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def to_json(table: TableArtifact) -> str:
    doc = {"meta": table.meta, "columns": list(table.columns), "rows": [list(r) for r in table.rows]}
    return json.dumps(_json_safe(doc), indent=1, sort_keys=True, allow_nan=False) + "\n"


def render(table: TableArtifact, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"unknown output format {fmt!r}")


def write_atomic(path: os.PathLike | str, text: str | bytes) -> None:
    """Write to a temporary file in the target directory, then rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(text, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"newline": ""})) as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(text: str) -> Tuple[List[str], List[List[str]]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return [], []
    return rows[0], rows[1:]
