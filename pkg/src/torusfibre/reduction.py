"""Degree reduction of f against roots of g, and the assembled W(T).

Starting from f, repeatedly subtract c * (g^(1/k'))^l, where c X^m1 Y^m2 is
the current leading term and l/k' = m1/n1 = m2/n2 in lowest terms, until the
residual reaches degree 2 - n. The subtracted terms assemble into a Laurent
polynomial W with f - W(g^(1/k~)) = residual, k~ = lcm of the k'.

The engine never checks det Jac(f, g) = 1; it only needs the structural
preconditions on the leading forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .errors import (
    FieldExtensionRequired,
    GcdObstruction,
    NoLeadingForm,
    NonMonomialLeading,
    NonProportionalLeading,
)
from .laurent2 import LaurentSeries2, LeadingForm, series_kth_root, series_power
from .scalars import Field, Scalar

REACHED_TARGET = "ReachedTarget"
GCD_OBSTRUCTION = "GcdObstruction"
NON_PROPORTIONAL = "NonProportionalLeading"
FLOOR_EXHAUSTED = "FloorExhausted"
ZERO_RESIDUAL = "ZeroResidual"
BELOW_TARGET = "BelowTarget"

STATUSES = (REACHED_TARGET, GCD_OBSTRUCTION, NON_PROPORTIONAL, FLOOR_EXHAUSTED,
            ZERO_RESIDUAL, BELOW_TARGET)


def _scalar_field(series: LaurentSeries2) -> Field:
    return series.ring if isinstance(series.ring, Field) else series.ring.field


@dataclass(frozen=True)
class ExponentRelation:
    m1: int
    m2: int
    n1: int
    n2: int

    @property
    def m(self) -> int:
        return self.m1 + self.m2

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def proportional(self) -> bool:
        return self.m1 * self.n2 == self.m2 * self.n1

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.m, self.n)

    @property
    def ratio_is_one(self) -> bool:
        return self.m == self.n

    @property
    def abs_diff_equal(self) -> bool:
        return abs(self.m1 - self.m2) == abs(self.n1 - self.n2)

    @property
    def dichotomy(self) -> Optional[str]:
        """Which side of |m1-m2| != |n1-n2|  or  both differences zero holds."""
        if not self.proportional or self.ratio_is_one:
            return None
        if not self.abs_diff_equal:
            return "distinct"
        if self.m1 == self.m2 and self.n1 == self.n2:
            return "both_zero"
        return "violated"

    def to_json(self) -> dict:
        return {
            "m1": self.m1, "m2": self.m2, "n1": self.n1, "n2": self.n2,
            "ratio": str(self.ratio), "proportional": self.proportional,
            "ratio_is_one": self.ratio_is_one, "abs_diff_equal": self.abs_diff_equal,
            "dichotomy": self.dichotomy, "n1_ne_n2": self.n1 != self.n2,
        }


def check_exponent_relations(f: LaurentSeries2, g: LaurentSeries2) -> ExponentRelation:
    m1, m2 = f.leading_form().exponent
    n1, n2 = g.leading_form().exponent
    rel = ExponentRelation(m1, m2, n1, n2)
    if rel.proportional and rel.n:
        # |m1 - m2| = (m/n) |n1 - n2|
        assert abs(m1 - m2) * rel.n == rel.m * abs(n1 - n2)
    assert rel.dichotomy != "violated"
    return rel


@dataclass
class WPoly:
    """W(T) = sum c_e T^e, meant to be evaluated at g^(1/k_tilde)."""

    terms: dict
    k_tilde: int = 1

    def __post_init__(self):
        self.terms = {int(e): c for e, c in self.terms.items() if c}

    @property
    def exponents(self) -> list[int]:
        return sorted(self.terms)

    def __eq__(self, other):
        return isinstance(other, WPoly) and self.terms == other.terms and self.k_tilde == other.k_tilde

    def evaluate(self, value, floor=None):
        """W(value) for a LaurentSeries2 or PuiseuxElement ``value``."""
        if isinstance(value, LaurentSeries2):
            total = LaurentSeries2.zero(value.ring)
            for e, c in sorted(self.terms.items(), reverse=True):
                total = total + series_power(value, e, floor).scale(c)
            return total
        total = None
        for e, c in sorted(self.terms.items(), reverse=True):
            term = (value ** e).scale(c)
            total = term if total is None else total + term
        if total is None:
            return value.scale(0)
        return total

    def twist(self, eps: Scalar) -> "WPoly":
        """W(eps T)."""
        return WPoly({e: c * eps ** e for e, c in self.terms.items()}, self.k_tilde)

    def to_json(self) -> list:
        from .serialize import scalar_to_json
        return [{"exp": e, "c": scalar_to_json(c)} for e, c in sorted(self.terms.items(), reverse=True)]


@dataclass(frozen=True)
class ReductionStep:
    c: Scalar
    l: int
    k: int
    degree_after: Optional[int]


class _RootPowers:
    """Powers of h = g^(1/k); (g^(1/k'))^l is h^(l k / k')."""

    def __init__(self, g: LaurentSeries2, k: int, rel: int):
        self.k = k
        n = g.degree()
        self.root = series_kth_root(g, k, floor=n // k - rel)
        self._cache: dict[int, LaurentSeries2] = {}

    def power(self, e: int, floor=None) -> LaurentSeries2:
        if e not in self._cache:
            self._cache[e] = series_power(self.root, e)
        p = self._cache[e]
        return p if floor is None else p.truncate(floor)


def reduce_once(h: LaurentSeries2, g: LaurentSeries2, _powers: Optional[_RootPowers] = None):
    """One reduction step; returns (ReductionStep, h - c (g^(1/k'))^l)."""
    lf = h.leading_form()
    if not lf.is_monomial:
        raise NonProportionalLeading(f"leading form of degree {lf.degree} is not a monomial")
    (m1, m2), c = lf.monomials[0]
    n1, n2 = g.leading_form().exponent
    if m1 * n2 != m2 * n1:
        raise NonProportionalLeading(f"({m1}, {m2}) is not proportional to ({n1}, {n2})")
    ratio = Fraction(m1 + m2, n1 + n2)
    l, kp = ratio.numerator, ratio.denominator
    if n1 % kp or n2 % kp:
        raise GcdObstruction(f"denominator {kp} does not divide ({n1}, {n2})")
    if _powers is None:
        rel = h.relative_precision()
        if rel is None:
            rel = h.degree() - (2 - (n1 + n2)) + 6
        _powers = _RootPowers(g, kp, rel)
    k = _powers.k
    if k % kp:
        raise GcdObstruction(f"denominator {kp} does not divide the root index {k}")
    sub = _powers.power(l * (k // kp), h.floor).scale(c)
    out = h - sub
    new_deg = out.degree()
    assert new_deg is None or new_deg < lf.degree, "reduction step did not lower the degree"
    return ReductionStep(c, l, kp, new_deg), out


@dataclass
class DistinctnessReport:
    k_tilde: int
    gcd_ok: bool
    all_distinct: bool
    failing_roots: list
    k: Optional[int] = None
    distinct_indices: list = dc_field(default_factory=list)
    epsilon0: Optional[Scalar] = None
    epsilon0_index: Optional[int] = None

    def to_json(self) -> dict:
        from .serialize import scalar_to_json
        return {
            "k_tilde": self.k_tilde, "gcd_ok": self.gcd_ok, "all_distinct": self.all_distinct,
            "failing_roots": self.failing_roots, "k": self.k,
            "distinct_indices": self.distinct_indices,
            "epsilon0": None if self.epsilon0 is None else scalar_to_json(self.epsilon0),
            "epsilon0_index": self.epsilon0_index,
        }


def rescale_w(w: WPoly, k: int) -> WPoly:
    """W~(T) = W(T^(k / k_tilde)), so that W~(g^(1/k)) = W(g^(1/k_tilde))."""
    if k % w.k_tilde:
        raise ValueError(f"k_tilde={w.k_tilde} does not divide k={k}")
    f = k // w.k_tilde
    return WPoly({e * f: c for e, c in w.terms.items()}, k)


def epsilon_distinctness(w: WPoly, field: Field, k: Optional[int] = None) -> DistinctnessReport:
    """Check W(eps T) != W(T) for every k_tilde-th root eps != 1.

    After rescaling to k (if given) also lists the k-th roots eps^i for which
    W~(eps^i T) != W~(T), with the first such root as witness epsilon0.
    """
    kt = w.k_tilde
    g = kt
    for e in w.terms:
        g = gcd(g, e)
    failing = []
    if kt > 1:
        if not field.has_roots_of_unity(kt):
            raise FieldExtensionRequired(kt)
        for i in range(1, kt):
            if w.twist(field.root_of_unity(kt, i)) == w:
                failing.append(i)
    report = DistinctnessReport(kt, g == 1, not failing, failing)
    if k is not None:
        wk = rescale_w(w, k)
        report.k = k
        if k > 1 and not field.has_roots_of_unity(k):
            raise FieldExtensionRequired(k)
        for i in range(1, k):
            eps = field.root_of_unity(k, i)
            if wk.twist(eps) != wk:
                report.distinct_indices.append(i)
        if report.distinct_indices:
            report.epsilon0_index = report.distinct_indices[0]
            report.epsilon0 = field.root_of_unity(k, report.epsilon0_index)
    return report


@dataclass(frozen=True)
class BranchResidual:
    """Leading data of f - W~(eps^i g^(1/k))."""

    i: int
    degree: Optional[int]
    exponent: Optional[tuple]
    coefficient: Optional[Scalar]

    def to_json(self) -> dict:
        from .serialize import scalar_to_json
        return {"i": self.i, "degree": self.degree,
                "exponent": None if self.exponent is None else {"i": self.exponent[0], "j": self.exponent[1]},
                "e": None if self.coefficient is None else scalar_to_json(self.coefficient)}


@dataclass
class ReductionResult:
    w: WPoly
    k_tilde: int
    k: int
    residual: LaurentSeries2
    residual_leading: Optional[LeadingForm]
    status: str
    trace: list
    relation: Optional[ExponentRelation] = None
    epsilon0: Optional[Scalar] = None
    distinctness: Optional[DistinctnessReport] = None
    branch_residuals: list = dc_field(default_factory=list)
    groot: Optional[LaurentSeries2] = None
    target_degree: int = 0
    message: str = ""

    @property
    def d(self) -> Optional[Scalar]:
        if self.status != REACHED_TARGET or self.residual_leading is None:
            return None
        if not self.residual_leading.is_monomial:
            return None
        return self.residual_leading.coefficient

    @property
    def w_rescaled(self) -> WPoly:
        return rescale_w(self.w, self.k)

    def to_json(self) -> dict:
        from .serialize import scalar_to_json, series_to_json
        lead = None
        if self.residual_leading is not None:
            mons = self.residual_leading.monomials
            if len(mons) == 1:
                lead = {"i": mons[0][0][0], "j": mons[0][0][1],
                        "degree": self.residual_leading.degree}
            else:
                lead = {"degree": self.residual_leading.degree,
                        "monomials": [{"i": e[0], "j": e[1], "c": scalar_to_json(c)} for e, c in mons]}
        return {
            "status": self.status,
            "W": self.w.to_json(),
            "k_tilde": self.k_tilde,
            "k": self.k,
            "target_degree": self.target_degree,
            "d": None if self.d is None else scalar_to_json(self.d),
            "residual_leading": lead,
            "residual": series_to_json(self.residual),
            "trace": [{"c": scalar_to_json(s.c), "l": s.l, "k": s.k, "degree_after": s.degree_after}
                      for s in self.trace],
            "relation": None if self.relation is None else self.relation.to_json(),
            "epsilon0": None if self.epsilon0 is None else scalar_to_json(self.epsilon0),
            "distinctness": None if self.distinctness is None else self.distinctness.to_json(),
            "branch_residuals": [b.to_json() for b in self.branch_residuals],
            "message": self.message,
        }


def _assemble_w(trace: list) -> tuple[WPoly, int]:
    kt = 1
    for s in trace:
        kt = lcm(kt, s.k)
    terms: dict[int, Scalar] = {}
    for s in trace:
        e = s.l * (kt // s.k)
        terms[e] = terms[e] + s.c if e in terms else s.c
    return WPoly(terms, kt), kt


def reduce_full(f: LaurentSeries2, g: LaurentSeries2, slack: int = 6,
                max_steps: Optional[int] = None) -> ReductionResult:
    """Reduce f against g until the residual has degree 2 - n.

    ``slack`` is the number of degrees below the target that f must be known
    to; with less precision the run stops with FloorExhausted before any step.
    """
    glf = g.leading_form()
    if not glf.is_monomial:
        raise NonMonomialLeading("leading form of g must be a single monomial")
    n1, n2 = glf.exponent
    if n1 <= 0 or n2 <= 0:
        raise ValueError(f"g must have leading exponents n1, n2 > 0, got ({n1}, {n2})")
    n = n1 + n2
    k = gcd(n1, n2)
    target = 2 - n
    field = _scalar_field(g)

    def finish(status, residual, trace, relation, powers, message=""):
        w, kt = _assemble_w(trace)
        overridable = (ZERO_RESIDUAL, BELOW_TARGET) if not trace else (ZERO_RESIDUAL, BELOW_TARGET, FLOOR_EXHAUSTED)
        if k == 1 and status in overridable:
            # gcd(n1, n2) = 1 forces every k_i = 1 and the target stays out of reach
            message = message or "gcd(n1, n2) = 1: all reduction denominators are 1"
            status = GCD_OBSTRUCTION
        lead = None
        if residual.terms:
            lead = residual.leading_form()
        res = ReductionResult(w, kt, k, residual, lead, status, trace, relation,
                              target_degree=target, message=message,
                              groot=None if powers is None else powers.root)
        if status == REACHED_TARGET:
            _distinctness(res, f, powers, field)
        return res

    relation = None
    try:
        relation = check_exponent_relations(f, g)
    except (NonMonomialLeading, NoLeadingForm):
        pass

    if not f.terms:
        status = ZERO_RESIDUAL if f.floor is None or f.floor <= target else FLOOR_EXHAUSTED
        return finish(status, f, [], relation, None)
    if f.floor is not None and f.floor > target - slack:
        return finish(FLOOR_EXHAUSTED, f, [], relation, None,
                      f"floor {f.floor} is above {target - slack} = (2 - n) - slack")

    rel = f.relative_precision() if f.floor is not None else f.degree() - (target - slack)
    powers = _RootPowers(g, k, max(rel, 0))
    if max_steps is None:
        max_steps = max(f.degree() - target, 0) * k + 1
    h = f
    trace: list[ReductionStep] = []
    while True:
        if not h.terms:
            if h.floor is None or h.floor <= target:
                return finish(ZERO_RESIDUAL, h, trace, relation, powers)
            return finish(FLOOR_EXHAUSTED, h, trace, relation, powers,
                          f"residual vanishes down to floor {h.floor} above the target")
        d = h.degree()
        if d == target:
            lf = h.leading_form()
            if n1 != n2 and lf.exponent != (1 - n1, 1 - n2):
                # single monomial at (1 - n1, 1 - n2) is forced for n1 != n2
                return finish(NON_PROPORTIONAL, h, trace, relation, powers,
                              f"residual leading form at degree {d} is not d X^{1 - n1} Y^{1 - n2}")
            return finish(REACHED_TARGET, h, trace, relation, powers)
        if d < target:
            return finish(BELOW_TARGET, h, trace, relation, powers)
        if len(trace) >= max_steps:
            raise RuntimeError(f"reduction exceeded the step guard {max_steps}")
        try:
            step, h = reduce_once(h, g, powers)
        except NonProportionalLeading as exc:
            return finish(NON_PROPORTIONAL, h, trace, relation, powers, str(exc))
        except GcdObstruction as exc:
            return finish(GCD_OBSTRUCTION, h, trace, relation, powers, str(exc))
        if trace and trace[-1].degree_after is not None and step.degree_after is not None:
            assert step.degree_after < trace[-1].degree_after
        trace.append(step)


def _distinctness(res: ReductionResult, f: LaurentSeries2, powers: _RootPowers, field: Field):
    try:
        res.distinctness = epsilon_distinctness(res.w, field, res.k)
    except FieldExtensionRequired as exc:
        res.message = str(exc)
        return
    res.epsilon0 = res.distinctness.epsilon0
    wk = res.w_rescaled
    for i in range(res.k):
        eps = field.root_of_unity(res.k, i)
        r = f - wk.twist(eps).evaluate(powers.root, f.floor)
        if r.terms:
            lf = r.leading_form()
            exp = lf.exponent if lf.is_monomial else None
            coeff = lf.coefficient if lf.is_monomial else None
            res.branch_residuals.append(BranchResidual(i, lf.degree, exp, coeff))
        else:
            res.branch_residuals.append(BranchResidual(i, None, None, None))


def reduction_from_w(f: LaurentSeries2, g: LaurentSeries2, w: WPoly) -> ReductionResult:
    """Build a ReductionResult from a supplied W instead of running the loop."""
    n1, n2 = g.leading_form().exponent
    n = n1 + n2
    k = gcd(n1, n2)
    target = 2 - n
    field = _scalar_field(g)
    rel = f.relative_precision() if f.floor is not None else f.degree() - target + 6
    powers = _RootPowers(g, k, max(rel, 0))
    residual = f - rescale_w(w, k).evaluate(powers.root, f.floor)
    lead = residual.leading_form() if residual.terms else None
    if lead is None:
        status = ZERO_RESIDUAL
    elif lead.degree == target and (n1 == n2 or lead.exponent == (1 - n1, 1 - n2)):
        status = REACHED_TARGET
    elif lead.degree < target:
        status = BELOW_TARGET
    else:
        status = NON_PROPORTIONAL
    res = ReductionResult(w, w.k_tilde, k, residual, lead, status, [], None,
                          target_degree=target, groot=powers.root,
                          message="W supplied by the instance")
    try:
        res.relation = check_exponent_relations(f, g)
    except (NonMonomialLeading, NoLeadingForm):
        pass
    if status == REACHED_TARGET:
        _distinctness(res, f, powers, field)
    return res
