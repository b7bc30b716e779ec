"""Line-delimited JSON output.

Floats are written with 17 significant digits so that reading a record back
gives the identical double.  Non-finite floats become the strings ``"inf"``,
``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import json
import math

import jsonschema

_PARAMS = {
    "type": "object",
    "properties": {
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "beta": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "n": {"type": "integer", "minimum": 0},
    },
    "required": ["alpha", "beta", "n"],
}
_NUMBER = {"anyOf": [{"type": "number"}, {"enum": ["inf", "-inf", "nan"]}]}
_VERDICT = {"enum": ["validated", "sharp", "counterexample", "inconclusive"]}

SCHEMAS = {
    "config": {
        "type": "object",
        "properties": {"record": {"const": "config"}, "command": {"type": "string"}, "config": {"type": "object"}, "seed": {"type": "integer"}},
        "required": ["record", "command", "config", "seed"],
    },
    "coefficient": {
        "type": "object",
        "properties": {
            "record": {"const": "coefficient"},
            "series": {"enum": ["f", "f_over_z_pow", "L_n", "phi", "S"]},
            "k": {"type": "integer", "minimum": 0},
            "re": _NUMBER,
            "im": _NUMBER,
            "abs": _NUMBER,
        },
        "required": ["record", "series", "k", "re", "im", "abs"],
    },
    "member": {
        "type": "object",
        "properties": {
            "record": {"const": "member"},
            "params": _PARAMS,
            "spec": {"type": "object"},
            "order": {"type": "integer"},
            "roundtrip_error": _NUMBER,
        },
        "required": ["record", "params", "spec", "order", "roundtrip_error"],
    },
    "membership": {
        "type": "object",
        "properties": {
            "record": {"const": "membership"},
            "params": _PARAMS,
            "radii": {"type": "array", "items": {"type": "number"}},
            "angles": {"type": "integer"},
            "min_real_part": _NUMBER,
            "margin": _NUMBER,
            "tail_estimate": _NUMBER,
            "verdict": {"enum": ["member", "boundary", "violation"]},
        },
        "required": ["record", "params", "min_real_part", "margin", "tail_estimate", "verdict"],
    },
    "bound": {
        "type": "object",
        "properties": {
            "record": {"const": "bound"},
            "params": _PARAMS,
            "functional": {"type": "string"},
            "variant": {"type": "string"},
            "bound": _NUMBER,
        },
        "required": ["record", "params", "functional", "variant", "bound"],
    },
    "audit": {
        "type": "object",
        "properties": {
            "record": {"const": "audit"},
            "params": _PARAMS,
            "functional": {"type": "string"},
            "variant": {"type": "string"},
            "bound": _NUMBER,
            "empirical_max": _NUMBER,
            "margin": _NUMBER,
            "verdict": _VERDICT,
            "seed": {"type": "integer"},
            "trials": {"type": "integer", "minimum": 1},
            "order": {"type": "integer"},
            "argmax_spec": {"type": "object", "required": ["kind"]},
            "replay_value": _NUMBER,
        },
        "required": ["record", "params", "functional", "variant", "bound", "empirical_max", "margin", "verdict", "seed"],
    },
    "summary": {
        "type": "object",
        "properties": {
            "record": {"const": "summary"},
            "records": {"type": "integer"},
            "verdicts": {"type": "object"},
            "by_variant": {"type": "object"},
        },
        "required": ["record", "records", "verdicts"],
    },
}


def _encode(obj) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(int(obj))
    if isinstance(obj, float):
        if math.isfinite(obj):
            text = format(obj, ".17g")
            if "." not in text and "e" not in text:
                text += ".0"
            return text
        return json.dumps("nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf"))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(record: dict) -> str:
    return _encode(record)


def loads(line: str) -> dict:
    return json.loads(line)


def validate(record: dict) -> None:
    kind = record.get("record")
    if kind not in SCHEMAS:
        raise jsonschema.ValidationError(f"unknown record type {kind!r}")
    jsonschema.validate(record, SCHEMAS[kind])


def audit_lines(rec) -> list:
    """Flatten an :class:`~salagean.fuzz.AuditRecord` into one dict per bound variant."""
    d = rec.to_dict()
    out = []
    for b in d["bounds"]:
        out.append(
            {
                "record": "audit",
                "params": d["params"],
                "functional": d["functional"],
                "variant": b["variant"],
                "bound": b["bound"],
                "empirical_max": d["empirical_max"],
                "margin": b["margin"],
                "verdict": b["verdict"],
                "seed": d["seed"],
                "trials": d["trials"],
                "order": d["order"],
                "argmax_spec": d["argmax_spec"],
                "replay_value": d["replay_value"],
            }
        )
    return out
