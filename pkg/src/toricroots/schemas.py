"""JSON schemas for CLI inputs and reports (draft 2020-12)."""
from __future__ import annotations

import jsonschema

_INT_VECTOR = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
_RATIONAL = {"type": ["string", "integer"], "pattern": r"^-?\d+(/\d+)?$"}

CONE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cone",
    "type": "object",
    "properties": {
        "rank": {"type": "integer", "minimum": 1},
        "rays": {"type": "array", "items": _INT_VECTOR, "minItems": 1},
    },
    "required": ["rays"],
}

SUBTORUS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "subtorus",
    "type": "object",
    "properties": {
        "basis": {"type": "array", "items": _INT_VECTOR, "minItems": 1},
        "normal": _INT_VECTOR,
        "m_T": _INT_VECTOR,
    },
    "anyOf": [{"required": ["basis"]}, {"required": ["normal"]}],
}

ALGEBRA_ELEMENT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "algebra element",
    "type": "object",
    "properties": {
        "terms": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [_INT_VECTOR, _RATIONAL],
                      "minItems": 2, "maxItems": 2},
        },
    },
    "required": ["terms"],
}

DERIVATION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "derivation descriptor",
    "$defs": {
        "element": {k: v for k, v in ALGEBRA_ELEMENT.items() if not k.startswith("$")},
        "descriptor": {
            "type": "object",
            "required": ["kind"],
            "oneOf": [
                {"properties": {"kind": {"const": "root"}, "e": _INT_VECTOR,
                                "scalar": _RATIONAL},
                 "required": ["kind", "e"]},
                {"properties": {"kind": {"const": "nhrv"}, "e1": _INT_VECTOR,
                                "e2": _INT_VECTOR, "m_T": _INT_VECTOR,
                                "alpha": _RATIONAL, "beta": _RATIONAL},
                 "required": ["kind", "e1", "e2", "m_T", "alpha", "beta"]},
                {"properties": {"kind": {"const": "sum"},
                                "terms": {"type": "array", "minItems": 1,
                                          "items": {"$ref": "#/$defs/descriptor"}}},
                 "required": ["kind", "terms"]},
                {"properties": {"kind": {"const": "table"},
                                "generators": {"type": "array", "items": _INT_VECTOR},
                                "images": {"type": "array",
                                           "items": {"$ref": "#/$defs/element"}}},
                 "required": ["kind", "generators", "images"]},
            ],
        },
    },
    "$ref": "#/$defs/descriptor",
}

COMMANDS = ["roots", "classify", "fibers", "surface", "cremona", "lnd", "verify"]

REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "report",
    "type": "object",
    "properties": {
        "command": {"enum": COMMANDS},
        "status": {"enum": ["ok", "error", "fail"]},
        "bound": {"type": ["integer", "null"]},
        "seed": {"type": ["integer", "null"]},
        "result": {"type": "object"},
        "error": {
            "type": "object",
            "properties": {"code": {"type": "string"}, "message": {"type": "string"}},
            "required": ["code", "message"],
        },
    },
    "required": ["command", "status", "bound", "seed"],
    "if": {"properties": {"status": {"const": "error"}}},
    "then": {"required": ["error"]},
    "else": {"required": ["result"]},
}

SCHEMAS = {"cone": CONE, "subtorus": SUBTORUS, "element": ALGEBRA_ELEMENT,
           "derivation": DERIVATION, "report": REPORT}


def validate(data, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` unless ``data`` fits schema ``name``."""
    jsonschema.validate(data, SCHEMAS[name], cls=jsonschema.Draft202012Validator)
