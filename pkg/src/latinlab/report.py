"""Serialization of results: exact rationals as "p/q" strings, JSON/CSV/text emission."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

SCHEMA_VERSION = 1


def rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def jsonable(obj):
    """Recursively convert results into JSON-safe values."""
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, float)):
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def envelope(kind: str, payload: dict) -> dict:
    out = {"schema": f"latinlab/{kind}/v{SCHEMA_VERSION}"}
    out.update(jsonable(payload))
    return out


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list) and value and not isinstance(value[0], (dict, list)):
        out[prefix] = " ".join(str(v) for v in value)
    elif isinstance(value, list):
        out[prefix] = json.dumps(value)
    else:
        out[prefix] = value


def to_csv(data: dict) -> str:
    """``rows`` (a list of flat records) if present, otherwise key,value lines."""
    buf = io.StringIO()
    rows = data.get("rows")
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        flat = []
        for r in rows:
            f: dict = {}
            _flatten("", r, f)
            flat.append(f)
        fields = list(dict.fromkeys(k for f in flat for k in f))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
    else:
        flat = {}
        _flatten("", data, flat)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in flat.items():
            w.writerow([k, v])
    return buf.getvalue()


def to_text(data: dict) -> str:
    if "text" in data and isinstance(data["text"], str):
        return data["text"]
    lines = []
    for k, v in data.items():
        if k == "rows" and isinstance(v, list):
            for r in v:
                lines.append("  " + ", ".join(f"{a}={b}" for a, b in r.items()) if isinstance(r, dict)
                             else f"  {r}")
        elif isinstance(v, (dict, list)):
            lines.append(f"{k}: {json.dumps(v)}")
        else:
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def render(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        return to_csv(data)
    if fmt == "text":
        return to_text(data)
    raise ValueError(f"unknown format {fmt!r}")
