"""CSV and JSON writers for series and records.

CSV files carry the resolved parameters and tool version as leading '#'
comment lines (sorted keys, 17 significant digits, '.' decimal) so reruns
are byte-for-byte reproducible; JSON files embed the same metadata inline.
"""

import json

import numpy as np

from . import __version__

_FMT = "%.17g"


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return _FMT % float(x)
    if isinstance(x, complex):
        return f"{_FMT % x.real}{'+' if x.imag >= 0 else '-'}{_FMT % abs(x.imag)}j"
    return str(x)


def _metadata_lines(meta):
    lines = [f"# tool=optbistab {__version__}"]
    for key in sorted(meta):
        val = meta[key]
        if isinstance(val, (list, tuple)):
            val = ",".join(_fmt(v) for v in val)
        else:
            val = _fmt(val)
        lines.append(f"# {key}={val}")
    return lines


def write_csv(path, columns, rows, meta=None, warnings_list=()):
    """Write a CSV table with '#'-prefixed metadata and warnings."""
    lines = _metadata_lines(meta or {})
    for w in warnings_list:
        lines.append(f"# warning: {w}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path, payload):
    payload = dict(payload)
    payload.setdefault("tool", f"optbistab {__version__}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def series_meta(series, seed=None):
    meta = dict(series.params)
    if getattr(series, "method", None) is not None:
        meta["method"] = series.method
    if getattr(series, "variant", None) is not None:
        meta["variant"] = series.variant
    if getattr(series, "kind", None) is not None:
        meta["kind"] = series.kind
    window = getattr(series, "validity_window", None)
    if window is not None:
        meta["validity_window"] = window
    if seed is not None:
        meta["seed"] = seed
    return meta
