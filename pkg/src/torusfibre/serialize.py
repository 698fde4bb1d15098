"""JSON wire format for scalars, series and reports.

Rationals and exponents are strings so no integer width is implied. Scalars
in a cyclotomic field are lists of rational strings (coefficients of 1, z, z^2, ...
with z = zeta_K). Output is canonical: sorted keys, fixed separators.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .laurent2 import LaurentSeries2
from .puiseux import PuiseuxElement, PuiseuxRing
from .scalars import Field, Scalar


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def scalar_to_json(c: Scalar):
    if c.is_rational():
        return str(c.as_fraction())
    return [str(x) for x in c.coeffs]


def scalar_from_json(field: Field, data) -> Scalar:
    if isinstance(data, list):
        if len(data) > field.degree:
            raise ValueError(f"{len(data)} coefficients given for a field of degree {field.degree}")
        return field([Fraction(x) for x in data])
    if isinstance(data, (int, str)):
        return field(Fraction(data))
    raise ValueError(f"cannot read a scalar from {data!r}")


def puiseux_to_json(a: PuiseuxElement) -> dict:
    return {
        "terms": [{"q": str(q), "c": scalar_to_json(c)} for q, c in sorted(a.terms.items(), reverse=True)],
        "floor": None if a.floor is None else str(a.floor),
    }


def puiseux_from_json(field: Field, data) -> PuiseuxElement:
    terms = {Fraction(t["q"]): scalar_from_json(field, t["c"]) for t in data["terms"]}
    floor = data.get("floor")
    return PuiseuxElement(field, terms, None if floor is None else Fraction(floor))


def _coeff_to_json(c):
    return puiseux_to_json(c) if isinstance(c, PuiseuxElement) else scalar_to_json(c)


def series_to_json(f: LaurentSeries2) -> dict:
    return {
        "terms": [{"i": i, "j": j, "c": _coeff_to_json(c)} for (i, j), c in f.sorted_terms()],
        "floor": f.floor,
    }


def series_from_json(ring, data) -> LaurentSeries2:
    """Parse ``{"terms": [{"i", "j", "c"}], "floor"}``; repeated exponents add up."""
    terms = {}
    for t in data["terms"]:
        if isinstance(ring, PuiseuxRing):
            c = puiseux_from_json(ring.field, t["c"])
        else:
            c = scalar_from_json(ring, t["c"])
        e = (int(t["i"]), int(t["j"]))
        terms[e] = terms[e] + c if e in terms else c
    floor = data.get("floor")
    return LaurentSeries2(ring, terms, None if floor is None else int(floor))
