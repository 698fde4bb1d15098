"""Built-in instances and random series generators.

Each instance is a JSON-shaped dict accepted by ``instance.build``; the files
under ``instances/`` are written from these.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .laurent2 import LaurentSeries2
from .scalars import Field


def _series(*terms, floor=None):
    return {"terms": [{"i": i, "j": j, "c": str(c)} for i, j, c in terms], "floor": floor}


def _fixture(floor: int, budget: int) -> dict:
    return {
        "field": "rational",
        "g": _series((2, 4, 1), (1, 0, 1)),
        "f": {"w_image": {"k": 2, "W": [{"exp": 3, "c": "2"}],
                          "plus": _series((-1, -3, 5)), "floor": floor}},
        "level": "1",
        "budget": budget,
    }


INSTANCES: dict[str, dict] = {
    "fixture": dict(_fixture(-12, 6), name="fixture",
                    description="g = X^2 Y^4 + X, f = 2 (g^(1/2))^3 + 5 X^-1 Y^-3 at floor -12; "
                                "normalized precision 8 supports a Hensel budget of 6"),
    "fixture_deep": dict(_fixture(-24, 10), name="fixture_deep",
                         description="the fixture at floor -24, deep enough for a Hensel budget of 10"),
    "gcd_obstruction": {
        "name": "gcd_obstruction",
        "description": "g = X^2 Y^3 + X with coprime exponents, f = g^2",
        "field": "rational",
        "g": _series((2, 3, 1), (1, 0, 1)),
        "f": {"w_image": {"k": 1, "W": [{"exp": 2, "c": "1"}], "floor": -15}},
    },
    "non_proportional": {
        "name": "non_proportional",
        "description": "f = g^2 + X over g = X^2 Y^3 + X; the residual X is not proportional to (2, 3)",
        "field": "rational",
        "g": _series((2, 3, 1), (1, 0, 1)),
        "f": {"w_image": {"k": 1, "W": [{"exp": 2, "c": "1"}], "plus": _series((1, 0, 1)),
                          "floor": -15}},
    },
    "degenerate": {
        "name": "degenerate",
        "description": "pure monomials: g = X^2 Y^4, f = 2 X^3 Y^6 + 5 X^-1 Y^-3 (no tails)",
        "field": "rational",
        "g": _series((2, 4, 1)),
        "f": _series((3, 6, 2), (-1, -3, 5)),
    },
    "degenerate_26": {
        "name": "degenerate_26",
        "description": "pure monomials with n1 = 2, n2 = 6: two seeds per feasible branch",
        "field": "rational",
        "g": _series((2, 6, 1)),
        "f": _series((3, 9, 1), (-1, -5, 1)),
    },
    "order4": {
        "name": "order4",
        "description": "k = 4 over Q(zeta_4): g = X^4 Y^8 + X, f = 2 (g^(1/4))^3 + 5 X^-3 Y^-7",
        "field": "cyclotomic:4",
        "g": _series((4, 8, 1), (1, 0, 1)),
        "f": {"w_image": {"k": 4, "W": [{"exp": 3, "c": "2"}],
                          "plus": _series((-3, -7, 5)), "floor": -40}},
        "level": "1",
        "budget": 10,
    },
    "order4_rational": {
        "name": "order4_rational",
        "description": "the k = 4 instance over the rationals, which lack zeta_4",
        "field": "rational",
        "g": _series((4, 8, 1), (1, 0, 1)),
        "f": {"w_image": {"k": 4, "W": [{"exp": 3, "c": "2"}],
                          "plus": _series((-3, -7, 5)), "floor": -40}},
    },
}


# ---------------------------------------------------------------------------
# random generators


def random_scalar(rng: random.Random, field: Field, nonzero: bool = False, bound: int = 5):
    while True:
        coeffs = [Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(field.degree)]
        c = field(coeffs)
        if c or not nonzero:
            return c


def random_unit_leading(rng: random.Random, field: Field, lead=(0, 0), floor: int = -24,
                        n_terms: int = 6, depth: int = 8) -> LaurentSeries2:
    """c X^a Y^b plus random lower-degree terms, truncated at ``floor``."""
    a, b = lead
    d = a + b
    terms = {(a, b): random_scalar(rng, field, nonzero=True)}
    for _ in range(n_terms):
        deg = d - rng.randint(1, depth)
        i = a + rng.randint(-3, 3)
        terms[(i, deg - i)] = random_scalar(rng, field)
    return LaurentSeries2(field, terms, floor)


def random_laurent(rng: random.Random, field: Field, top: int = 3, floor: int = -10,
                   n_terms: int = 6) -> LaurentSeries2:
    terms = {}
    for _ in range(n_terms):
        deg = rng.randint(floor, top)
        i = rng.randint(-4, 4)
        terms[(i, deg - i)] = random_scalar(rng, field)
    return LaurentSeries2(field, terms, floor)
