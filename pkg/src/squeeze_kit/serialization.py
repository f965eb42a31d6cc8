"""JSON formats: domain specs, points, command outputs.

Numbers are written with 17 significant digits so a double survives the
round trip unchanged on any reader.
"""

from __future__ import annotations

import json
import math
from typing import Any

import jsonschema

from .domains import (
    Ball,
    DomainError,
    DomainSpec,
    DVector,
    GeneralizedEllipsoid,
    Point,
    Polydisk,
    Product,
    Sublevel,
    WeightedPowerDomain,
    validate,
)

__all__ = [
    "DOMAIN_SCHEMA",
    "POINT_SCHEMA",
    "OUTPUT_SCHEMAS",
    "domain_from_json",
    "domain_to_json",
    "point_from_json",
    "point_to_json",
    "load_domain",
    "load_point",
    "dumps",
    "parse_int_list",
]

_NUM = {"type": "number"}
_POS_INT_LIST = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_NUM_LIST = {"type": "array", "items": _NUM, "minItems": 1}

DOMAIN_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$ref": "#/$defs/domain",
    "$defs": {
        "domain": {
            "oneOf": [
                {"$ref": "#/$defs/ball"},
                {"$ref": "#/$defs/polydisk"},
                {"$ref": "#/$defs/gen_ellipsoid"},
                {"$ref": "#/$defs/weighted_power"},
                {"$ref": "#/$defs/product"},
                {"$ref": "#/$defs/sublevel"},
            ]
        },
        "ball": {
            "type": "object",
            "properties": {
                "type": {"const": "ball"},
                "n": {"type": "integer", "minimum": 1},
                "radius": _NUM,
            },
            "required": ["type", "n"],
            "additionalProperties": False,
        },
        "polydisk": {
            "type": "object",
            "properties": {"type": {"const": "polydisk"}, "radii": _NUM_LIST},
            "required": ["type", "radii"],
            "additionalProperties": False,
        },
        "gen_ellipsoid": {
            "type": "object",
            "properties": {
                "type": {"const": "gen_ellipsoid"},
                "p": _POS_INT_LIST,
                "m": {
                    "type": "array",
                    "items": {"oneOf": [_NUM, {"const": "inf"}]},
                    "minItems": 1,
                },
            },
            "required": ["type", "p", "m"],
            "additionalProperties": False,
        },
        "weighted_power": {
            "type": "object",
            "properties": {"type": {"const": "weighted_power"}, "c": _NUM_LIST, "s": _NUM_LIST},
            "required": ["type", "c", "s"],
            "additionalProperties": False,
        },
        "product": {
            "type": "object",
            "properties": {
                "type": {"const": "product"},
                "factors": {"type": "array", "items": {"$ref": "#/$defs/domain"}, "minItems": 1},
            },
            "required": ["type", "factors"],
            "additionalProperties": False,
        },
        "sublevel": {
            "type": "object",
            "properties": {
                "type": {"const": "sublevel"},
                "base": {"$ref": "#/$defs/domain"},
                "r": _NUM,
                "d": _POS_INT_LIST,
            },
            "required": ["type", "base", "r", "d"],
            "additionalProperties": False,
        },
    },
}

_COMPLEX = {
    "oneOf": [
        _NUM,
        {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
    ]
}

POINT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "oneOf": [
        {"type": "array", "items": _COMPLEX, "minItems": 1},
        {
            "type": "object",
            "properties": {
                "coords": {"type": "array", "items": _COMPLEX, "minItems": 1},
                "block_sizes": _POS_INT_LIST,
            },
            "required": ["coords"],
            "additionalProperties": False,
        },
    ],
}

_STEP = {
    "type": "object",
    "properties": {"rule": {"type": "string"}, "inputs": {"type": "object"}},
    "required": ["rule", "inputs"],
}

OUTPUT_SCHEMAS: dict[str, dict] = {
    "gauge": {
        "type": "object",
        "properties": {
            "value": {"type": "number", "minimum": 0},
            "method": {"enum": ["closed_form", "bisection"]},
            "residual": {"type": "number", "minimum": 0},
        },
        "required": ["value", "method", "residual"],
        "additionalProperties": False,
    },
    "constants": {
        "type": "object",
        "properties": {
            "alpha": {"type": "number", "exclusiveMinimum": 0},
            "R": {"type": "number", "exclusiveMinimum": 0},
            "P": {"type": "number", "exclusiveMinimum": 1},
            "L": {"type": "integer", "minimum": 1},
            "method": {"enum": ["analytic", "sampled"]},
        },
        "required": ["alpha", "R", "P", "L", "method"],
        "additionalProperties": False,
    },
    "distance": {
        "type": "object",
        "properties": {
            "lower": {"type": "number", "minimum": 0},
            "upper": {"type": "number", "minimum": 0},
            "exact": {"type": "boolean"},
        },
        "required": ["lower", "upper", "exact"],
        "additionalProperties": False,
    },
    "bounds": {
        "type": "object",
        "properties": {
            "lower": {"type": "number", "minimum": 0, "maximum": 1},
            "upper": {"type": "number", "minimum": 0, "maximum": 1},
            "provenance": {"type": "array", "items": _STEP},
        },
        "required": ["lower", "upper", "provenance"],
        "additionalProperties": False,
    },
    "verify": {
        "type": "object",
        "properties": {
            "suite": {"type": "string"},
            "passed": {"type": "boolean"},
            "vacuous": {"type": "boolean"},
            "cases_run": {"type": "integer", "minimum": 0},
            "max_violation": {"type": ["number", "null"]},
            "tolerance": {"type": "number"},
            "seed": {"type": "integer"},
            "failures": {"type": "array"},
            "wall_time": {"type": "number"},
        },
        "required": ["suite", "passed", "cases_run", "max_violation", "tolerance", "seed", "failures"],
    },
}
OUTPUT_SCHEMAS["example"] = OUTPUT_SCHEMAS["bounds"]


def _exp_from_json(x) -> float:
    return math.inf if x == "inf" else float(x)


def domain_from_json(obj: Any, *, normalize: bool = True) -> DomainSpec:
    """Build a validated domain spec from its JSON document."""
    try:
        jsonschema.validate(obj, DOMAIN_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise DomainError(f"domain spec does not match the schema: {exc.message}") from None
    spec = _build(obj)
    return validate(spec) if normalize else spec


def _build(obj: dict) -> DomainSpec:
    kind = obj["type"]
    if kind == "ball":
        return Ball(obj["n"], obj.get("radius", 1.0))
    if kind == "polydisk":
        return Polydisk(tuple(obj["radii"]))
    if kind == "gen_ellipsoid":
        return GeneralizedEllipsoid(tuple(obj["p"]), tuple(_exp_from_json(x) for x in obj["m"]))
    if kind == "weighted_power":
        return WeightedPowerDomain(tuple(obj["c"]), tuple(obj["s"]))
    if kind == "product":
        return Product(tuple(_build(f) for f in obj["factors"]))
    if kind == "sublevel":
        return Sublevel(_build(obj["base"]), obj["r"], DVector(tuple(obj["d"])))
    raise DomainError(f"unknown domain type {kind!r}")


def domain_to_json(spec: DomainSpec) -> dict:
    if isinstance(spec, Ball):
        return {"type": "ball", "n": spec.n, "radius": spec.radius}
    if isinstance(spec, Polydisk):
        return {"type": "polydisk", "radii": list(spec.radii)}
    if isinstance(spec, GeneralizedEllipsoid):
        return {
            "type": "gen_ellipsoid",
            "p": list(spec.p),
            "m": ["inf" if math.isinf(x) else x for x in spec.m],
        }
    if isinstance(spec, WeightedPowerDomain):
        return {"type": "weighted_power", "c": list(spec.c), "s": list(spec.s)}
    if isinstance(spec, Product):
        return {"type": "product", "factors": [domain_to_json(f) for f in spec.factors]}
    if isinstance(spec, Sublevel):
        return {
            "type": "sublevel",
            "base": domain_to_json(spec.base),
            "r": spec.level,
            "d": list(spec.d.exponents),
        }
    raise DomainError(f"not a domain spec: {spec!r}")


def _complex(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    return complex(x[0], x[1])


def point_from_json(obj: Any) -> Point:
    try:
        jsonschema.validate(obj, POINT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise DomainError(f"point does not match the schema: {exc.message}") from None
    if isinstance(obj, dict):
        blocks = obj.get("block_sizes")
        return Point(tuple(_complex(c) for c in obj["coords"]), tuple(blocks) if blocks else None)
    return Point(tuple(_complex(c) for c in obj))


def point_to_json(z: Point) -> Any:
    coords = [[c.real, c.imag] for c in z.coords]
    if z.block_sizes is None:
        return coords
    return {"coords": coords, "block_sizes": list(z.block_sizes)}


def _read(path: str) -> Any:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None


def load_domain(path: str) -> DomainSpec:
    return domain_from_json(_read(path))


def load_point(path: str) -> Point:
    return point_from_json(_read(path))


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from None


def _format(obj: Any) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_format(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_format(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return _format(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Compact JSON with every float written to 17 significant digits."""
    return _format(obj)
