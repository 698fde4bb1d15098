"""Embedded invariant suite run by ``torusfibre selfcheck``."""

from __future__ import annotations

import random
from fractions import Fraction

from . import scalars
from .fixtures import INSTANCES, random_laurent, random_unit_leading
from .instance import build
from .laurent2 import LaurentSeries2, series_invert, series_kth_root, series_power
from .puiseux import PuiseuxElement
from .reduction import REACHED_TARGET, reduce_full
from .scalars import CyclotomicField, RationalField
from .serialize import digest
from .torus_solver import TorusSpec, count_fibre, hensel_lift, newton_doubles

SEED = 20240601


def _ring_laws() -> bool:
    rng = random.Random(SEED)
    F = RationalField()
    for _ in range(5):
        a, b, c = (random_laurent(rng, F) for _ in range(3))
        if not (a * b).agrees(b * a):
            return False
        if not ((a * b) * c).agrees(a * (b * c)):
            return False
        if not (a * (b + c)).agrees(a * b + a * c):
            return False
    return True


def _inverse_round_trip() -> bool:
    rng = random.Random(SEED + 1)
    F = RationalField()
    for _ in range(5):
        g = random_unit_leading(rng, F)
        prod = g * series_invert(g)
        if not prod.agrees(LaurentSeries2.constant(F, 1)):
            return False
    return True


def _root_round_trip() -> bool:
    rng = random.Random(SEED + 2)
    for k, field in ((2, RationalField()), (3, CyclotomicField(3))):
        for _ in range(3):
            g = random_unit_leading(rng, field, lead=(2 * k, k), floor=-12 + 3 * k)
            one = field.one
            g = LaurentSeries2(field, {**g.terms, (2 * k, k): one}, g.floor)
            if not series_power(series_kth_root(g, k), k).agrees(g):
                return False
    return True


def _ultrametric() -> bool:
    rng = random.Random(SEED + 3)
    F = RationalField()
    for _ in range(20):
        a = PuiseuxElement(F, {Fraction(rng.randint(-6, 6), rng.randint(1, 3)): rng.randint(1, 4)
                               for _ in range(3)})
        b = PuiseuxElement(F, {Fraction(rng.randint(-6, 6), rng.randint(1, 3)): rng.randint(-4, -1)
                               for _ in range(3)})
        if a.valuation() + b.valuation() != (a * b).valuation():
            return False
        if (a + b).valuation() < min(a.valuation(), b.valuation()):
            return False
    return True


def _fixture_reduction() -> bool:
    inst = build(INSTANCES["fixture"])
    red = reduce_full(inst.f, inst.g)
    return (red.status == REACHED_TARGET and {e: str(c) for e, c in red.w.terms.items()} == {3: "2"}
            and red.residual_leading.exponent == (-1, -3) and red.d == 5)


def _hensel_contraction() -> bool:
    inst = build(INSTANCES["fixture_deep"])
    red = reduce_full(inst.f, inst.g)
    spec = TorusSpec.standard(inst.field, inst.level, red.k)
    rep = count_fibre(inst.f, inst.g, red, spec, inst.budget)
    branch = rep.branches[0]
    if not branch.lifts:
        return False
    lift = branch.lifts[0]
    again = hensel_lift(branch.system, branch.seeds[0], inst.budget, schedule="chord")
    floor = -inst.budget
    return (newton_doubles(lift.log, branch.system.caps()) and lift.x.agrees(again.x, floor)
            and lift.y.agrees(again.y, floor) and rep.gap == 1)


CHECKS = [
    ("ring laws", _ring_laws),
    ("inverse round-trip", _inverse_round_trip),
    ("root round-trip", _root_round_trip),
    ("ultrametric laws", _ultrametric),
    ("fixture reduction", _fixture_reduction),
    ("Hensel contraction", _hensel_contraction),
]


def run(corrupt_binomial: bool = False) -> list[tuple[str, bool]]:
    """Run all checks; ``corrupt_binomial`` is a fault-injection hook."""
    saved = dict(scalars._BINOMIAL_CACHE)
    try:
        if corrupt_binomial:
            # the true value of binom(1/2, 2) is -1/8
            scalars._BINOMIAL_CACHE[(Fraction(1, 2), 2)] = Fraction(1, 8)
        results = []
        for name, check in CHECKS:
            try:
                ok = bool(check())
            except Exception:
                ok = False
            results.append((name, ok))
        return results
    finally:
        scalars._BINOMIAL_CACHE.clear()
        scalars._BINOMIAL_CACHE.update(saved)


def format_table(results) -> str:
    width = max(len(name) for name, _ in results)
    lines = [f"{name.ljust(width)}  {'PASS' if ok else 'FAIL'}" for name, ok in results]
    body = "\n".join(lines)
    return body + f"\ndigest {digest(body.encode())[:16]}\n"
