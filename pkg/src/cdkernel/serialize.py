"""JSON encoding shared by the CLI and the report types.

Complex numbers become {"re": x, "im": y}, arrays become nested lists in
row-major order. Floats are written with Python's shortest round-trip repr,
so decoding gives back the same doubles and output is byte-stable.
"""

import dataclasses
import json
import math

import numpy as np


def _float(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return str(x)


def to_jsonable(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _float(obj.real), "im": _float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()] if obj.ndim else to_jsonable(obj.item())
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2)


def _is_complex(d):
    return isinstance(d, dict) and set(d) == {"re", "im"}


def from_jsonable(obj):
    """Inverse of to_jsonable for numbers and (nested) arrays."""
    if _is_complex(obj):
        return complex(float(obj["re"]), float(obj["im"]))
    if isinstance(obj, list):
        items = [from_jsonable(x) for x in obj]
        if items and all(isinstance(x, (complex, float, int, np.ndarray)) for x in items):
            try:
                return np.array(items)
            except ValueError:
                return items
        return items
    if isinstance(obj, dict):
        return {k: from_jsonable(v) for k, v in obj.items()}
    return obj


def loads(text):
    return from_jsonable(json.loads(text))


def report(test, inputs, outputs, tolerance=None, verdict=None):
    """Uniform report record emitted by every CLI subcommand."""
    return {"test": test, "inputs": inputs, "outputs": outputs,
            "tolerance": tolerance, "verdict": verdict}
