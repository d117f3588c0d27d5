"""JSON/CSV writing with floats at 17 significant digits."""

import json
import math

import numpy as np


def fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        # not representable in strict JSON
        return "null"
    return f"{x:.17g}"


def dumps(obj, indent=None, _level=0):
    """Serialise ``obj`` like :func:`json.dumps` but with every float written
    as ``%.17g``."""
    nl = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{nl}{_str(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep numeric rows on one line
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if flat or indent is None:
            return "[" + ", ".join(dumps(v, None) for v in obj) + "]"
        items = [f"{nl}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[" + ",".join(items) + end + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return _str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _str(s):
    return json.dumps(str(s))
