"""Byte-stable JSON and CSV output.

Floats are written with 12 significant digits and JSON keys are sorted, so
identical inputs always produce identical files.
"""
from __future__ import annotations

import csv
import io
import json
import numbers
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SIG_DIGITS = 12


def fmt(x: float) -> str:
    s = format(float(x), f".{SIG_DIGITS}g")
    return "0" if s == "-0" else s


def round_sig(x: float) -> float:
    return float(fmt(x))


def complex_vector_to_list(v) -> dict:
    v = np.asarray(v, dtype=complex)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


def _normalize(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, numbers.Rational)):
        return round_sig(obj)
    if isinstance(obj, complex):
        return {"re": round_sig(obj.real), "im": round_sig(obj.imag)}
    if isinstance(obj, np.ndarray):
        return _normalize(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, indent=2) + "\n"


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, np.integer)) else fmt(v) for v in row])
    return buf.getvalue()


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
