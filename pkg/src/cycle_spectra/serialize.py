"""Deterministic JSON and CSV output.

Multiprecision numbers are written as decimal strings in scientific
notation with a fixed significant-digit count, recorded once per document.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .numeric import Complex, Real, format_decimal

SCHEMA = "cycle-spectra/1"


def encode(value, digits: int):
    """Recursively turn results into JSON-compatible values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, (Real, Complex, Fraction, float)):
        return format_decimal(value, digits)
    if isinstance(value, dict):
        return {str(k): encode(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v, digits) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def json_document(kind: str, params: dict, data, digits: int) -> str:
    doc = {
        "schema": SCHEMA,
        "kind": kind,
        "digits": digits,
        "params": encode(params, digits),
        "data": encode(data, digits),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def csv_document(rows: list[dict], digits: int, columns: list[str] | None = None) -> str:
    """CSV with a header row, '.' decimals and LF line endings."""
    columns = columns or (list(rows[0].keys()) if rows else [])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else _cell(row.get(c), digits) for c in columns])
    return buffer.getvalue()


def _cell(value, digits: int) -> str:
    encoded = encode(value, digits)
    if isinstance(encoded, (list, dict)):
        return json.dumps(encoded, separators=(",", ":"))
    return str(encoded)


def render(kind: str, params: dict, rows: list[dict], digits: int, fmt: str, data=None) -> str:
    """Render rows as CSV or a JSON document (``data`` overrides the JSON payload)."""
    if fmt == "csv":
        return csv_document(rows, digits)
    return json_document(kind, params, rows if data is None else data, digits)
