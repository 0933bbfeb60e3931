"""JSON configuration parsing for the command-line front door.

All documents are schema-validated with unknown keys rejected; errors carry
the offending field path.  Formats:

  triplet   {"sigma": 1.0, "gamma": 0.0, "nu": {...}}
  nu        {"type": "none"}
            {"type": "compound", "rate": 1.0, "marks": {...}}
            {"type": "truncstable", "alpha": 1.5, "cutoff": 1e-3,
             "radius": 1.0, "scale": 0.01}
  marks     {"type": "point", "value": 1.0}
            {"type": "uniform", "low": -1.0, "high": 1.0}
            {"type": "normal", "mean": 0.0, "sd": 1.0}
            {"type": "twopoint", "values": [a, b], "prob_first": p}
  process   triplet fields plus {"dim": 2, "level": 6}
  region    {"u0": [1.0, 1.0], "sub": [[0.5, 1.0]]}
  flow      {"vertices": [[0,0], [1,1]], "params": [0, 1]}  (params optional)
  run       {"seed": 42, "suites": [...], "paths": ..., "threads": ...}
"""

from __future__ import annotations

import json

import jsonschema

from .errors import ConfigError
from .flows import ElementaryFlow
from .indexing import IncrementRegion, RectSet
from .laws import (
    CompoundJumps,
    LevyTriplet,
    NoJumps,
    NormalMark,
    PointMass,
    TruncStableJumps,
    TwoPointMark,
    UniformMark,
)
from .simulate import ProcessSpec

_MARKS_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"type": {"const": "point"}, "value": {"type": "number"}},
            "required": ["type", "value"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "uniform"},
                "low": {"type": "number"},
                "high": {"type": "number"},
            },
            "required": ["type", "low", "high"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "normal"},
                "mean": {"type": "number"},
                "sd": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["type", "mean", "sd"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "twopoint"},
                "values": {
                    "type": "array",
                    "items": {"type": "number"},
                    "minItems": 2,
                    "maxItems": 2,
                },
                "prob_first": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            },
            "required": ["type", "values", "prob_first"],
            "additionalProperties": False,
        },
    ]
}

_NU_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"type": {"const": "none"}},
            "required": ["type"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "compound"},
                "rate": {"type": "number", "exclusiveMinimum": 0},
                "marks": _MARKS_SCHEMA,
            },
            "required": ["type", "rate", "marks"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "truncstable"},
                "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 2},
                "cutoff": {"type": "number", "exclusiveMinimum": 0},
                "radius": {"type": "number", "exclusiveMinimum": 0},
                "scale": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["type", "alpha", "cutoff", "radius", "scale"],
            "additionalProperties": False,
        },
    ]
}

_TRIPLET_PROPERTIES = {
    "sigma": {"type": "number", "minimum": 0},
    "gamma": {"type": "number"},
    "nu": _NU_SCHEMA,
}

PROCESS_SCHEMA = {
    "type": "object",
    "properties": {
        **_TRIPLET_PROPERTIES,
        "dim": {"type": "integer", "enum": [1, 2, 3]},
        "level": {"type": "integer", "minimum": 1, "maximum": 12},
    },
    "required": ["sigma", "gamma", "dim", "level"],
    "additionalProperties": False,
}

REGION_SCHEMA = {
    "type": "object",
    "properties": {
        "u0": {"type": "array", "items": {"type": "number"}, "minItems": 1, "maxItems": 3},
        "sub": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 1, "maxItems": 3},
        },
    },
    "required": ["u0"],
    "additionalProperties": False,
}

REGIONS_SCHEMA = {"type": "array", "items": REGION_SCHEMA, "minItems": 1}

FLOW_SCHEMA = {
    "type": "object",
    "properties": {
        "vertices": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 1, "maxItems": 3},
            "minItems": 2,
        },
        "params": {"type": "array", "items": {"type": "number"}, "minItems": 2},
    },
    "required": ["vertices"],
    "additionalProperties": False,
}

RUN_SCHEMA = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "suites": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "paths": {"type": "integer", "minimum": 100},
        "threads": {"type": "integer", "minimum": 1},
    },
    "required": ["seed"],
    "additionalProperties": False,
}


def _validate(doc, schema, what: str):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or what
        raise ConfigError(f"{what}: invalid field '{path}': {exc.message}") from exc


def parse_marks(doc) -> object:
    kind = doc["type"]
    if kind == "point":
        return PointMass(doc["value"])
    if kind == "uniform":
        return UniformMark(doc["low"], doc["high"])
    if kind == "normal":
        return NormalMark(doc["mean"], doc["sd"])
    return TwoPointMark(tuple(doc["values"]), doc["prob_first"])


def parse_nu(doc) -> object:
    kind = doc["type"]
    if kind == "none":
        return NoJumps()
    if kind == "compound":
        return CompoundJumps(doc["rate"], parse_marks(doc["marks"]))
    try:
        return TruncStableJumps(doc["alpha"], doc["cutoff"], doc["radius"], doc["scale"])
    except ValueError as exc:
        raise ConfigError(f"nu: {exc}") from exc


def parse_triplet(doc) -> LevyTriplet:
    return LevyTriplet(doc["sigma"], doc["gamma"], parse_nu(doc.get("nu", {"type": "none"})))


def parse_process(doc, seed: int = 0) -> ProcessSpec:
    _validate(doc, PROCESS_SCHEMA, "process spec")
    return ProcessSpec(parse_triplet(doc), dim=doc["dim"], level=doc["level"], seed=seed)


def parse_region(doc, what: str = "region") -> IncrementRegion:
    _validate(doc, REGION_SCHEMA, what)
    try:
        u0 = RectSet(tuple(doc["u0"]))
        subs = tuple(RectSet(tuple(c)) for c in doc.get("sub", []))
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from exc
    return IncrementRegion(u0, subs)


def parse_regions(doc) -> list[IncrementRegion]:
    _validate(doc, REGIONS_SCHEMA, "regions")
    return [parse_region(item, f"region {i}") for i, item in enumerate(doc)]


def parse_flow(doc) -> ElementaryFlow:
    _validate(doc, FLOW_SCHEMA, "flow")
    try:
        return ElementaryFlow(
            tuple(tuple(v) for v in doc["vertices"]),
            tuple(doc.get("params", ())),
        )
    except ValueError as exc:
        raise ConfigError(f"flow: {exc}") from exc


def parse_run_config(doc) -> dict:
    _validate(doc, RUN_SCHEMA, "run config")
    return dict(doc)


def load_json(path: str, what: str = "document"):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"{what}: file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what}: invalid JSON in {path}: {exc}") from exc
