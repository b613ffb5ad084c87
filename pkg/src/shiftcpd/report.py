"""Deterministic JSON documents and aligned-text renderings of reports."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Callable

from .classify import GridReport, MidReport
from .families import Cutoff, cutoff_p
from .scalars import format_scalar
from .verdicts import Status, Verdict

SYMBOLS = {Status.HOLDS: "+", Status.BOUNDARY: "=", Status.FAILS: "-", Status.ERROR: "!"}


def plain(value: Any) -> Any:
    """Convert a value to JSON-safe primitives with canonical scalar text."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, float) or type(value).__name__ == "mpf":
        # strings, so the 17-digit rendering survives any JSON reader
        return format_scalar(float(value))
    if isinstance(value, Verdict):
        return verdict_doc(value)
    if isinstance(value, Cutoff):
        return cutoff_doc(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if hasattr(value, "value"):  # enums
        return plain(value.value)
    return str(value)


def verdict_doc(v: Verdict) -> dict:
    doc: dict[str, Any] = {"status": v.status.value, "depth": v.depth}
    if v.witness is not None:
        doc["witness"] = plain(v.witness)
    if v.notes:
        doc["notes"] = list(v.notes)
    return doc


def cutoff_doc(c: Cutoff) -> dict:
    doc = {"value": format_scalar(c.value), "meaning": c.meaning, "provenance": c.provenance}
    if c.extra:
        doc.update(plain(c.extra))
    return doc


def mid_doc(mid: MidReport) -> dict:
    doc = {name: verdict_doc(v) for name, v in mid.parts().items()}
    if mid.delta.details:
        doc["delta"]["details"] = plain(mid.delta.details)
    doc["overall"] = verdict_doc(mid.overall)
    doc["contractive"] = mid.contractive
    return doc


def grid_doc(report: GridReport, config: dict) -> dict:
    cells = []
    for (k, m) in sorted(report.cells):
        cell = report.cells[k, m]
        entry: dict[str, Any] = {"k": k, "m": m, "pd": verdict_doc(cell.pd), "cpd": verdict_doc(cell.cpd)}
        if cell.cutoff is not None:
            entry["cutoff"] = format_scalar(cell.cutoff.value)
        cells.append(entry)
    return {
        "spec": report.spec,
        "config": plain(config),
        "grid": cells,
        "ladders": {
            "contractive": [dict(n=n, **verdict_doc(v)) for n, v in sorted(report.contractive_ladder.items())],
            "hyponormal": [dict(k=k, **verdict_doc(v)) for k, v in sorted(report.hyponormal_ladder.items())],
        },
        "mid": mid_doc(report.mid) if report.mid is not None else {},
        "warnings": list(report.warnings),
    }


def dumps(doc: dict) -> str:
    """Byte-stable serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def triangle(K: int, entry: Callable[[int, int], str], corner: str = "k\\m") -> str:
    """Lower-triangular (k, m) table, rows k = 1..K and columns m = 0..K."""
    header = [corner] + [str(m) for m in range(K + 1)]
    rows = [[str(k)] + [entry(k, m) if m <= k else "" for m in range(K + 1)] for k in range(1, K + 1)]
    return _table(rows, header)


def cutoff_table(j: int, K: int, cutoff: Callable[[int, int, int], Cutoff] = cutoff_p) -> str:
    return triangle(K, lambda k, m: format_scalar(cutoff(j, k, m).value))


def render_grid(report: GridReport) -> str:
    """Text form: one symbol pair per cell, PD then CPD.

    ``+`` holds, ``=`` boundary (holds with equality), ``-`` fails, ``!`` error.
    """

    def entry(k, m):
        c = report.cells[k, m]
        text = SYMBOLS[c.pd.status] + SYMBOLS[c.cpd.status]
        if c.cutoff is not None:
            text += f" {format_scalar(c.cutoff.value)}"
        return text

    out = [f"shift: {report.spec}", f"depth: {report.depth}", "", "(k,2m) cells: PD CPD [cutoff]   + holds  = boundary  - fails  ! error"]
    out.append(triangle(report.K, entry))
    out.append("")
    out.append("contractive: " + " ".join(f"{n}{SYMBOLS[v.status]}" for n, v in sorted(report.contractive_ladder.items())))
    out.append("hyponormal:  " + " ".join(f"{k}{SYMBOLS[v.status]}" for k, v in sorted(report.hyponormal_ladder.items())))
    if report.mid is not None:
        out.append("")
        out.append(render_mid(report.mid))
    if report.warnings:
        out.append("")
        out.extend(f"warning: {w}" for w in report.warnings)
    return "\n".join(out) + "\n"


def _witness_text(v: Verdict) -> str:
    if v.witness is None:
        return ""
    return " " + ", ".join(f"{k}={format_scalar(x) if isinstance(x, (Fraction, float)) else x}" for k, x in v.witness.items())


def render_mid(mid: MidReport) -> str:
    lines = [f"MID: {mid.overall.status.value}"]
    for name, v in mid.parts().items():
        lines.append(f"  {name:<16}{v.status.value}{_witness_text(v)}")
    return "\n".join(lines)
