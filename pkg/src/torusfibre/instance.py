"""Instance files: schema, parsing and construction of (f, g).

An instance names a field, gives g as a series literal and f either as a
literal or as ``{"w_image": {"k", "W", "plus", "floor"}}``, meaning
f = W(g^(1/k)) + plus truncated at ``floor``. Optional keys: ``W`` and
``k_tilde`` (a precomputed W), ``level`` (torus level s), ``floor`` (truncate
f), ``budget`` (Hensel valuation budget), ``flags``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

import jsonschema

from .laurent2 import LaurentSeries2, series_kth_root
from .reduction import WPoly
from .scalars import Field, field_from_descriptor
from .serialize import scalar_from_json, series_from_json

_SCALAR = {"oneOf": [
    {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
    {"type": "integer"},
    {"type": "array", "items": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}},
]}

_SERIES = {
    "type": "object",
    "required": ["terms"],
    "additionalProperties": False,
    "properties": {
        "terms": {"type": "array", "items": {
            "type": "object", "required": ["i", "j", "c"], "additionalProperties": False,
            "properties": {"i": {"type": "integer"}, "j": {"type": "integer"}, "c": _SCALAR},
        }},
        "floor": {"type": ["integer", "null"]},
    },
}

_W = {"type": "array", "items": {
    "type": "object", "required": ["exp", "c"], "additionalProperties": False,
    "properties": {"exp": {"type": "integer"}, "c": _SCALAR},
}}

INSTANCE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["field", "f", "g"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "field": {"type": "string", "pattern": r"^(rational|gaussian|cyclotomic:[1-9]\d*)$"},
        "g": _SERIES,
        "f": {"oneOf": [
            _SERIES,
            {"type": "object", "required": ["w_image"], "additionalProperties": False,
             "properties": {"w_image": {
                 "type": "object", "required": ["k", "W", "floor"], "additionalProperties": False,
                 "properties": {"k": {"type": "integer", "minimum": 1}, "W": _W,
                                "plus": _SERIES, "floor": {"type": "integer"}}}}},
        ]},
        "W": _W,
        "k_tilde": {"type": "integer", "minimum": 1},
        "level": {"type": "string", "pattern": r"^\d+(/\d+)?$"},
        "floor": {"type": "integer"},
        "budget": {"type": "integer", "minimum": 1},
        "flags": {"type": "object"},
    },
}


class InstanceError(ValueError):
    """Malformed instance: bad JSON, schema violation or inconsistent content."""


@dataclass
class Instance:
    field: Field
    f: LaurentSeries2
    g: LaurentSeries2
    w: Optional[WPoly] = None
    level: Fraction = Fraction(1)
    budget: int = 10
    name: str = ""
    flags: dict = dc_field(default_factory=dict)


def parse_text(text: str) -> dict:
    """JSON text to a dict, with line/column diagnostics on failure."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    validate(data)
    return data


def validate(data) -> None:
    errors = sorted(jsonschema.Draft202012Validator(INSTANCE_SCHEMA).iter_errors(data),
                    key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise InstanceError(f"schema violation at {where}: {e.message}")


def _w_from_json(field: Field, items, k_tilde: int) -> WPoly:
    terms = {}
    for t in items:
        c = scalar_from_json(field, t["c"])
        terms[t["exp"]] = terms[t["exp"]] + c if t["exp"] in terms else c
    return WPoly(terms, k_tilde)


def w_image(g: LaurentSeries2, w: WPoly, k: int, floor: int,
            plus: Optional[LaurentSeries2] = None) -> LaurentSeries2:
    """W(g^(1/k)) + plus, known down to total degree ``floor``."""
    n = g.degree()
    wk = WPoly(w.terms, k)
    top = max([e * n // k for e in wk.terms] + ([plus.degree()] if plus is not None and plus.terms else []))
    rel = top - floor
    h = series_kth_root(g, k, floor=n // k - rel)
    out = wk.evaluate(h)
    if plus is not None:
        out = out + plus
    return out.truncate(floor)


def build(data: dict, floor: Optional[int] = None, field_override: Optional[str] = None) -> Instance:
    """Construct an Instance from a schema-valid dict.

    ``floor`` overrides the instance floor (the construction floor for
    ``w_image`` instances, a truncation for literal f).
    """
    field = field_from_descriptor(field_override or data["field"])
    try:
        g = series_from_json(field, data["g"])
        fd = data["f"]
        if "w_image" in fd:
            spec = fd["w_image"]
            w = _w_from_json(field, spec["W"], spec["k"])
            plus = series_from_json(field, spec["plus"]) if "plus" in spec else None
            use = floor if floor is not None else data.get("floor", spec["floor"])
            f = w_image(g, w, spec["k"], use, plus)
        else:
            f = series_from_json(field, fd)
            use = floor if floor is not None else data.get("floor")
            if use is not None:
                f = f.truncate(use)
        w = None
        if "W" in data:
            w = _w_from_json(field, data["W"], data.get("k_tilde", 1))
        if not g.terms:
            raise InstanceError("g is zero")
        if not f.terms:
            raise InstanceError("f is zero down to its floor")
    except InstanceError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(str(exc)) from None
    return Instance(field, f, g, w, Fraction(data.get("level", "1")), data.get("budget", 10),
                    data.get("name", ""), data.get("flags", {}))
