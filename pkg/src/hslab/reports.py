"""JSON, CSV and text emission with a provenance header.

Every output starts from the run's configuration echo.  A UTC timestamp is
added unless suppressed, so that identical runs give byte-identical files.
"""

import csv
import io
import json
import math
from datetime import datetime, timezone

import numpy as np

from . import __version__

__all__ = ["header", "to_jsonable", "dumps_json", "dumps_csv", "dumps_text", "emit"]


def header(config_echo, timestamp=True, **extra):
    h = {"tool": "hslab", "version": __version__, "config": config_echo}
    h.update(extra)
    if timestamp:
        h["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return h


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    return obj


def dumps_json(head, body):
    return json.dumps(to_jsonable({"header": head, "result": body}), indent=2,
                      sort_keys=True) + "\n"


def dumps_csv(head, rows, columns):
    """CSV with the header as one leading ``# {json}`` comment line."""
    buf = io.StringIO()
    buf.write("# " + json.dumps(to_jsonable(head), sort_keys=True) + "\n")
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in columns})
    return buf.getvalue()


def _cell(v):
    v = to_jsonable(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


def dumps_text(head, rows, columns):
    cells = [[str(_cell(r.get(c))) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = [f"# {head['config']['subcommand']} (hslab {head['version']})"]
    lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
    lines.extend("  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells)
    return "\n".join(lines) + "\n"


def emit(head, body, rows, columns, fmt, out=None, stream=None):
    """Render in ``fmt`` and write to ``out`` (UTF-8) or ``stream``."""
    if fmt == "json":
        text = dumps_json(head, body)
    elif fmt == "csv":
        text = dumps_csv(head, rows, columns)
    elif fmt == "text":
        text = dumps_text(head, rows, columns)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif stream is not None:
        stream.write(text)
    return text
