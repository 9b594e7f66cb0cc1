"""Deterministic JSON and CSV writers (fixed key order, floats as %.12e)."""
from __future__ import annotations

import csv
import io
import math
from numbers import Integral, Real

import numpy as np

from .phase_algebra import Poly

FLOAT_FMT = "{:.12e}"


def fmt_float(v: float) -> str:
    v = float(v)
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    if v == 0.0:
        v = 0.0  # fold -0.0
    return FLOAT_FMT.format(v)


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, Integral):
        return str(int(obj))
    if isinstance(obj, Real):
        return fmt_float(obj)
    if isinstance(obj, complex):
        return _encode({"re": obj.real, "im": obj.imag}, indent, level)
    if isinstance(obj, str):
        return _quote(obj)
    if isinstance(obj, Poly):
        return _encode(poly_to_obj(obj), indent, level)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_quote(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (Real, str)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _quote(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch in '"\\':
            out.append("\\" + ch)
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def poly_to_obj(P: Poly) -> dict:
    """Monomial string -> coefficient, in a fixed order."""
    out = {}
    for k in sorted(P.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(P.space.names, k) if e)
        out[mono or "1"] = P.terms[k]
    return out


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt_float(v) for v in row])
    return buf.getvalue()
