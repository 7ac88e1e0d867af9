"""Deterministic CSV and JSON emitters for the CLI.

Every floating-point value is printed with up to 17 significant digits
(round-trip safe); identical run configurations produce byte-identical
files.  CSV is comma-separated with a header row and LF line endings.  JSON
files carry one top-level object with ``meta`` (config echo and artifact
version) and ``data``.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["fmt_float", "csv_text", "json_text", "write_text"]


def fmt_float(x: float) -> str:
    """Round-trip-safe decimal rendering with 17 significant digits."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".17g")


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (int, Fraction)):
        return str(v)
    s = str(v)
    if any(ch in s for ch in ",\"\n"):
        s = '"' + s.replace('"', '""') + '"'
    return s


def csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_value(v, indent: str, level: int) -> str:
    pad = indent * (level + 1)
    close_pad = indent * level
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return '"nan"'
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        return fmt_float(v)
    if isinstance(v, Fraction):
        return f'{{"numerator": {v.numerator}, "denominator": {v.denominator}}}'
    if isinstance(v, complex):
        return f"[{fmt_float(v.real)}, {fmt_float(v.imag)}]"
    if isinstance(v, str):
        out = v.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [
            f'{pad}"{key}": {_json_value(val, indent, level + 1)}'
            for key, val in v.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + close_pad + "}"
    if isinstance(v, (list, tuple)):
        seq = list(v)
        if not seq:
            return "[]"
        scalar = all(not isinstance(x, (dict, list, tuple)) for x in seq)
        if scalar:
            return "[" + ", ".join(_json_value(x, indent, level) for x in seq) + "]"
        items = [pad + _json_value(x, indent, level + 1) for x in seq]
        return "[\n" + ",\n".join(items) + "\n" + close_pad + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def json_text(meta: dict, data: dict) -> str:
    return _json_value({"meta": meta, "data": data}, "  ", 0) + "\n"


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
