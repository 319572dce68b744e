"""Deterministic CSV and JSON writers that carry run metadata.

CSV files start with one ``#`` line holding the metadata as JSON; JSON
documents get a top-level ``meta`` key. Keys are sorted and floats are
written with ``repr`` so identical runs produce identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from . import __version__

TOOL = "schatten-discord"


def metadata(command: str, seed: int | None, params: Mapping[str, Any]) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "seed": seed,
        "params": jsonable(dict(params)),
    }


def jsonable(x: Any) -> Any:
    """Plain Python types with NaN and infinities mapped to ``None``."""
    if isinstance(x, Mapping):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, Path):
        return str(x)
    return x


def dumps_json(payload: Mapping[str, Any], meta: Mapping[str, Any]) -> str:
    doc = dict(jsonable(payload))
    doc["meta"] = dict(meta)
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def dumps_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str], meta: Mapping[str, Any]) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(dict(meta), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def read_csv(path: str | Path) -> tuple[dict, list[dict]]:
    """Parse a file written by :func:`dumps_csv`; values stay strings."""
    lines = Path(path).read_text().splitlines()
    meta = json.loads(lines[0][1:]) if lines and lines[0].startswith("#") else {}
    body = lines[1:] if meta else lines
    return meta, list(csv.DictReader(body))


def emit(text: str, out: str | Path | None) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
