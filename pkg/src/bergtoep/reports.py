"""JSON / CSV serialisation of reports, matrices, coefficient vectors and tables.

Complex numbers are always written as ``{"re": ..., "im": ...}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone

import numpy as np

from .bergman import CoeffVector
from .lab import ExperimentReport, MomentTable
from .toeplitz import TruncatedOperator

__all__ = [
    "ReportIOError",
    "to_jsonable",
    "report_to_dict",
    "matrix_to_dict",
    "coeffs_to_dict",
    "render",
    "write_report",
]


class ReportIOError(OSError):
    """Output could not be written."""


def _complex(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def to_jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return _complex(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return str(x)


def _timestamp():
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def report_to_dict(report: ExperimentReport, timestamp: str | None = None) -> dict:
    return {
        "experiment": report.name,
        "domain": report.domain.to_dict(),
        "params": to_jsonable(report.parameters),
        "metrics": to_jsonable(report.metrics),
        "tolerances": to_jsonable(report.tolerances),
        "verdict": report.verdict,
        "timestamp": timestamp or _timestamp(),
    }


def matrix_to_dict(op: TruncatedOperator) -> dict:
    return {
        "domain": op.domain.to_dict(),
        "symbol": str(op.symbol),
        "N": op.N,
        "method": op.method,
        "quadrature": op.rule,
        "indices": [int(i) for i in op.indices],
        "entries": [[_complex(v) for v in row] for row in op.entries],
    }


def coeffs_to_dict(v: CoeffVector) -> dict:
    return {
        "domain": v.domain.to_dict(),
        "N": v.index_set.N,
        "coefficients": [{"index": int(n), **_complex(c)}
                         for n, c in zip(v.index_set.indices, v.coeffs)],
    }


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _matrix_rows(op):
    idx = op.indices
    for a, j in enumerate(idx):
        for b, k in enumerate(idx):
            v = op.entries[a, b]
            yield int(j), int(k), float(v.real), float(v.imag)


def render(obj, fmt: str = "json", timestamp: str | None = None) -> str:
    """Text form of ``obj`` in ``fmt`` ('json' or 'csv').

    ``obj`` may be an ExperimentReport, a list of reports, a
    TruncatedOperator, a CoeffVector, a MomentTable, or a list of
    ``(N, metric)`` rows from a truncation sweep.
    """
    if fmt not in ("json", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "csv":
        if isinstance(obj, TruncatedOperator):
            return _csv(["j", "k", "re", "im"], _matrix_rows(obj))
        if isinstance(obj, CoeffVector):
            return _csv(["index", "re", "im"],
                        ((int(n), float(c.real), float(c.imag))
                         for n, c in zip(obj.index_set.indices, obj.coeffs)))
        if isinstance(obj, MomentTable):
            return _csv(["n", "j", "re", "im"], obj.rows())
        if isinstance(obj, list) and all(isinstance(r, tuple) and len(r) == 2 for r in obj):
            return _csv(["N", "metric"], ((int(n), float(m)) for n, m in obj))
        raise TypeError(f"no CSV format for {type(obj).__name__}")
    if isinstance(obj, ExperimentReport):
        data = report_to_dict(obj, timestamp)
    elif isinstance(obj, list) and all(isinstance(r, ExperimentReport) for r in obj):
        ts = timestamp or _timestamp()
        data = [report_to_dict(r, ts) for r in obj]
    elif isinstance(obj, TruncatedOperator):
        data = matrix_to_dict(obj)
    elif isinstance(obj, CoeffVector):
        data = coeffs_to_dict(obj)
    elif isinstance(obj, MomentTable):
        data = {"phi": str(obj.phi), "psi": str(obj.psi), "tolerance": obj.tolerance,
                "entries": [{"n": n, "j": j, "re": re, "im": im} for n, j, re, im in obj.rows()]}
    else:
        data = to_jsonable(obj)
    return json.dumps(data, indent=2) + "\n"


def write_report(obj, fmt: str = "json", path=None, timestamp: str | None = None) -> str:
    """Render ``obj`` and write it to ``path`` (returns the text either way)."""
    text = render(obj, fmt, timestamp)
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ReportIOError(f"cannot write {path}: {exc}") from exc
    return text
