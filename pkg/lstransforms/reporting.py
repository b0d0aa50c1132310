"""
Report Output

Serializes command reports to JSON or CSV.

- JSON: the full report body, indent=2
- CSV: one line per result, floats in %.16e (17 significant digits)

Files are written to a temporary sibling first and moved into place with
``os.replace``, so a failing command never leaves a partial file behind.
"""

import csv
import dataclasses
import io
import json
import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel

from lstransforms.config import settings
from lstransforms.schemas import CommandReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.16e"


def make_json_safe(obj: Any) -> Any:
    """
    Recursively convert pydantic models, dataclasses, numpy scalars/arrays and
    paths into plain JSON-serializable Python types. Non-finite floats become
    None.
    """
    if isinstance(obj, BaseModel):
        obj = obj.model_dump()
    elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = dataclasses.asdict(obj)

    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return make_json_safe(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.integer, np.floating)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, complex):
        return {"real": obj.real, "imag": obj.imag}
    if isinstance(obj, Path):
        return str(obj)
    return obj


def render_json(report: BaseModel) -> str:
    return json.dumps(make_json_safe(report), indent=2) + "\n"


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    if isinstance(value, list):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


def render_csv(report: CommandReport) -> str:
    """Results as CSV; columns in first-seen order across rows."""
    rows = make_json_safe(report.results)
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def render(report: CommandReport, output_format: str = "json", document: Optional[BaseModel] = None) -> str:
    """Report text; a command document (the golden table) replaces the JSON body."""
    if output_format == "csv":
        return render_csv(report)
    return render_json(document if document is not None else report)


def resolve_path(output: str) -> Path:
    path = Path(output)
    if not path.is_absolute():
        path = Path(settings.output_dir) / path
    return path


def write_atomic(path: Path, text: str) -> Path:
    """Write text to path through a temporary file in the same directory."""
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
            stream.write(text)
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise
    logger.info("report written to %s", path)
    return path
