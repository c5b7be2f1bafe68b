"""Deterministic CSV/JSON output helpers.

Every float written by the package goes through :func:`fmt` (15 significant
digits) so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path

import numpy as np

SIG_DIGITS = 15


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.{SIG_DIGITS}g}"


def _round(x: float):
    if not math.isfinite(x):
        return str(x)  # JSON has no inf/nan
    return float(f"{x:.{SIG_DIGITS}g}")


def to_jsonable(obj):
    """Recursively convert numpy/complex values and round floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _round(obj.real), "im": _round(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def write_csv(path, header, rows) -> None:
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def parse_complex(value) -> complex:
    """Accept a number, a ``[re, im]`` pair, ``{"re":..,"im":..}`` or a string like ``"1+2j"``."""
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)):
        real, imag = value
        return complex(float(real), float(imag))
    if isinstance(value, str):
        text = value.replace(" ", "").replace("i", "j")
        # a bare unit ("1+j", "-j") needs its coefficient spelled out for complex()
        text = re.sub(r"(^|[+-])j", r"\g<1>1j", text)
        try:
            return complex(text)
        except ValueError as exc:
            raise ValueError(f"cannot parse {value!r} as a complex number") from exc
    return complex(value)
