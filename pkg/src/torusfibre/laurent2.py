"""Truncated bivariate Laurent series at infinity.

A series is a finite map (i, j) -> coefficient plus a floor on total degree:
terms of total degree below the floor are unknown. ``floor=None`` marks an
exact Laurent polynomial. Coefficients come from a scalar Field or from a
PuiseuxRing; every formula below is shared by both.

Floor propagation keeps "equal up to floor" sound:

* sum: max of the floors;
* product: max(floor_a + deg_b, floor_b + deg_a);
* inverse and k-th root: relative precision (deg - floor) is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import (
    DivisibilityError,
    FieldExtensionRequired,
    FieldMismatchError,
    NoLeadingForm,
    NonMonomialLeading,
    PrecisionError,
    TorusError,
)
from .puiseux import PuiseuxElement, PuiseuxRing, _fmax
from .scalars import Field, Scalar, binomial

Exponent2 = tuple[int, int]


def _deg(e: Exponent2) -> int:
    return e[0] + e[1]


@dataclass(frozen=True)
class LeadingForm:
    degree: int
    monomials: list

    @property
    def is_monomial(self) -> bool:
        return len(self.monomials) == 1

    @property
    def exponent(self) -> Exponent2:
        if not self.is_monomial:
            raise NonMonomialLeading(f"leading form has {len(self.monomials)} monomials")
        return self.monomials[0][0]

    @property
    def coefficient(self):
        if not self.is_monomial:
            raise NonMonomialLeading(f"leading form has {len(self.monomials)} monomials")
        return self.monomials[0][1]


class LaurentSeries2:
    __slots__ = ("ring", "terms", "floor")

    def __init__(self, ring, terms=None, floor: Optional[int] = None):
        self.ring = ring
        clean = {}
        for (i, j), c in (terms or {}).items():
            if floor is not None and i + j < floor:
                continue
            c = ring(c)
            if c:
                clean[(int(i), int(j))] = c
        self.terms = clean
        self.floor = floor

    # -- constructors ----------------------------------------------------

    @classmethod
    def monomial(cls, ring, i: int, j: int, c=1, floor=None) -> "LaurentSeries2":
        return cls(ring, {(i, j): ring(c)}, floor)

    @classmethod
    def constant(cls, ring, c=1, floor=None) -> "LaurentSeries2":
        return cls(ring, {(0, 0): ring(c)}, floor)

    @classmethod
    def zero(cls, ring, floor=None) -> "LaurentSeries2":
        return cls(ring, {}, floor)

    # -- inspection ------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_exact(self) -> bool:
        return self.floor is None

    def degree(self) -> Optional[int]:
        return max(_deg(e) for e in self.terms) if self.terms else None

    def _deg_bound(self):
        return self.degree() if self.terms else self.floor

    def relative_precision(self):
        if self.floor is None:
            return None
        return self._deg_bound() - self.floor

    def leading_form(self) -> LeadingForm:
        if not self.terms:
            raise NoLeadingForm("series is zero down to its floor")
        d = self.degree()
        mons = sorted(((e, c) for e, c in self.terms.items() if _deg(e) == d), key=lambda m: -m[0][0])
        return LeadingForm(d, mons)

    def _check(self, other: "LaurentSeries2"):
        if other.ring != self.ring:
            raise FieldMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def _coerce(self, other) -> Optional["LaurentSeries2"]:
        if isinstance(other, LaurentSeries2):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Scalar, PuiseuxElement)):
            return LaurentSeries2.constant(self.ring, other)
        return None

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return LaurentSeries2(self.ring, terms, _fmax(self.floor, o.floor))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries2(self.ring, {e: -c for e, c in self.terms.items()}, self.floor)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "LaurentSeries2":
        c = self.ring(c) if not isinstance(c, (int, Fraction)) else c
        return LaurentSeries2(self.ring, {e: v * c for e, v in self.terms.items()}, self.floor)

    def mul(self, other: "LaurentSeries2", cap: Optional[int] = None) -> "LaurentSeries2":
        self._check(other)
        o = other
        if (self.floor is None and not self.terms) or (o.floor is None and not o.terms):
            return LaurentSeries2(self.ring, {}, None)
        floors = []
        if self.floor is not None:
            floors.append(self.floor + o._deg_bound())
        if o.floor is not None:
            floors.append(o.floor + self._deg_bound())
        floor = _fmax(max(floors) if floors else None, cap)
        a = sorted(self.terms.items(), key=lambda t: -_deg(t[0]))
        b = sorted(o.terms.items(), key=lambda t: -_deg(t[0]))
        if isinstance(self.ring, Field):
            return LaurentSeries2(self.ring, _scalar_product(self.ring, a, b, floor), floor)
        out = {}
        for (ai, aj), ca in a:
            da = ai + aj
            for (bi, bj), cb in b:
                if floor is not None and da + bi + bj < floor:
                    break
                e = (ai + bi, aj + bj)
                v = ca * cb
                out[e] = out[e] + v if e in out else v
        return LaurentSeries2(self.ring, out, floor)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries2):
            return self.mul(other)
        if isinstance(other, (int, Fraction, Scalar, PuiseuxElement)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def truncate(self, floor: int) -> "LaurentSeries2":
        return LaurentSeries2(self.ring, self.terms, _fmax(self.floor, floor))

    def __pow__(self, n: int):
        return series_power(self, n)

    def shift(self, di: int, dj: int) -> "LaurentSeries2":
        """Multiply by the monomial X^di Y^dj."""
        f = None if self.floor is None else self.floor + di + dj
        return LaurentSeries2(self.ring, {(i + di, j + dj): c for (i, j), c in self.terms.items()}, f)

    # -- calculus ----------------------------------------------------------

    def diff_x(self) -> "LaurentSeries2":
        f = None if self.floor is None else self.floor - 1
        return LaurentSeries2(self.ring, {(i - 1, j): c * i for (i, j), c in self.terms.items() if i}, f)

    def diff_y(self) -> "LaurentSeries2":
        f = None if self.floor is None else self.floor - 1
        return LaurentSeries2(self.ring, {(i, j - 1): c * j for (i, j), c in self.terms.items() if j}, f)

    # -- comparison ------------------------------------------------------

    def agrees(self, other, floor: Optional[int] = None) -> bool:
        """Equality of all terms down to the common floor."""
        o = self._coerce(other)
        f = _fmax(self.floor, o.floor, floor)
        a = {e: c for e, c in self.terms.items() if f is None or _deg(e) >= f}
        b = {e: c for e, c in o.terms.items() if f is None or _deg(e) >= f}
        return a == b

    def __eq__(self, other):
        if isinstance(other, LaurentSeries2):
            return self.ring == other.ring and self.terms == other.terms and self.floor == other.floor
        return NotImplemented

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.floor))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-_deg(t[0]), -t[0][0]))

    def __repr__(self):
        return f"LaurentSeries2({self})"

    def __str__(self):
        body = " + ".join(f"({c})*X^{i}*Y^{j}" for (i, j), c in self.sorted_terms()) or "0"
        return body if self.floor is None else f"{body} + O(deg {self.floor})"

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x: PuiseuxElement, y: PuiseuxElement,
                 tail_slope: Fraction = Fraction(0), tail_shift: Fraction = Fraction(0),
                 floor=None) -> PuiseuxElement:
        """Value at a point (x, y) of K^2 with v(x) = v(y).

        The unknown tail (degrees below the floor) is assumed to have
        coefficients of valuation >= -tail_slope * deg + tail_shift; scalar
        coefficients satisfy this with slope = shift = 0. With sigma the common
        valuation of the point, the value is known for t-exponents at or above
        (tail_slope - sigma) * floor - tail_shift. ``floor`` optionally raises
        that value floor, which is needed at exact non-monomial points with
        negative exponents.
        """
        field = x.field
        if self.floor is None:
            cap = None
        else:
            sx, sy = x.valuation(), y.valuation()
            if sx != sy:
                raise TorusError(f"point not on a torus: v(x)={sx}, v(y)={sy}")
            margin = Fraction(tail_slope) - sx
            if margin <= 0:
                raise TorusError("tail does not converge at this point")
            cap = margin * self.floor - Fraction(tail_shift)
        cap = _fmax(cap, None if floor is None else Fraction(floor))
        xs, ys = _PowerCache(x, cap), _PowerCache(y, cap)
        total = PuiseuxElement(field, {}, cap)
        for (i, j), c in self.sorted_terms():
            if isinstance(c, PuiseuxElement):
                term = xs.get(i).mul(ys.get(j), cap).mul(c, cap)
            else:
                term = xs.get(i).mul(ys.get(j), cap).scale(c)
            if term.terms or term.floor is not None:
                total = total + term
        return total if cap is None else total.truncate(cap)


class _PowerCache:
    def __init__(self, x: PuiseuxElement, cap):
        self.cap = cap
        self.pos = {0: PuiseuxElement.constant(x.field, 1), 1: x}
        self.neg = {0: self.pos[0]}
        self.x = x

    def get(self, n: int) -> PuiseuxElement:
        table = self.pos if n >= 0 else self.neg
        m = abs(n)
        if m in table:
            return table[m]
        if 1 not in self.neg:
            self.neg[1] = self.x.inv(self.cap)
        top = max(table)
        base = table[1]
        while top < m:
            table[top + 1] = table[top].mul(base, None)
            top += 1
        return table[m]


def _scalar_product(field: Field, a: list, b: list, floor) -> dict:
    """Term products accumulated on raw coefficient vectors, reduced once per exponent."""
    acc: dict = {}
    if field.degree == 1:
        for (ai, aj), ca in a:
            da, x = ai + aj, ca.coeffs[0]
            for (bi, bj), cb in b:
                if floor is not None and da + bi + bj < floor:
                    break
                e = (ai + bi, aj + bj)
                acc[e] = acc.get(e, 0) + x * cb.coeffs[0]
        return {e: Scalar(field, (v,)) for e, v in acc.items()}
    width = 2 * field.degree - 1
    for (ai, aj), ca in a:
        da, xs = ai + aj, ca.coeffs
        for (bi, bj), cb in b:
            if floor is not None and da + bi + bj < floor:
                break
            e = (ai + bi, aj + bj)
            vec = acc.get(e)
            if vec is None:
                vec = acc[e] = [0] * width
            for p, x in enumerate(xs):
                for q, y in enumerate(cb.coeffs):
                    vec[p + q] += x * y
    return {e: Scalar(field, tuple(v)) for e, v in acc.items()}


# ---------------------------------------------------------------------------
# module-level operations


def series_add(a: LaurentSeries2, b: LaurentSeries2) -> LaurentSeries2:
    return a + b


def series_mul(a: LaurentSeries2, b: LaurentSeries2) -> LaurentSeries2:
    return a.mul(b)


def leading_form(f: LaurentSeries2) -> LeadingForm:
    return f.leading_form()


def _split_unit(g: LaurentSeries2):
    """g = c X^a Y^b (1 + u); returns (a, b, c, u) with u exact over its known terms."""
    lf = g.leading_form()
    if not lf.is_monomial:
        raise NonMonomialLeading(
            f"leading form of degree {lf.degree} has {len(lf.monomials)} monomials")
    (a, b), c = lf.monomials[0]
    ci = c.inv()
    u = {(i - a, j - b): v * ci for (i, j), v in g.terms.items() if (i, j) != (a, b)}
    return a, b, c, u


def _rel_precision(g: LaurentSeries2, out_deg: int, floor: Optional[int]):
    rho = g.relative_precision()
    if floor is not None:
        req = out_deg - floor
        rho = req if rho is None else min(rho, req)
    return rho


def _series_in_u(ring, u: dict, coeff, rel_floor: int) -> dict:
    one = ring.one
    total = {(0, 0): one}
    power = {(0, 0): one}
    u_items = list(u.items())
    i = 0
    while True:
        i += 1
        nxt = {}
        for (p, q), c1 in power.items():
            for (r, s), c2 in u_items:
                if p + q + r + s < rel_floor:
                    continue
                e = (p + r, q + s)
                v = c1 * c2
                nxt[e] = nxt[e] + v if e in nxt else v
        power = {e: c for e, c in nxt.items() if c}
        if not power:
            return total
        k = coeff(i)
        if k:
            for e, c in power.items():
                v = c * k
                total[e] = total[e] + v if e in total else v


def series_invert(g: LaurentSeries2, floor: Optional[int] = None) -> LaurentSeries2:
    """Inverse via the geometric series after factoring out the leading monomial.

    ``floor`` requests a result floor; the result floor is the larger of the
    requested one and the one determined by the precision of ``g``.
    """
    a, b, c, u = _split_unit(g)
    ci = c.inv()
    if not u and g.floor is None:
        return LaurentSeries2(g.ring, {(-a, -b): ci}, None)
    rho = _rel_precision(g, -(a + b), floor)
    if rho is None:
        raise PrecisionError("inverse of an exact non-monomial series needs a floor")
    s = _series_in_u(g.ring, u, lambda i: (-1) ** i, -rho)
    return LaurentSeries2(g.ring, {(i - a, j - b): v * ci for (i, j), v in s.items()}, -(a + b) - rho)


def series_kth_root(g: LaurentSeries2, k: int, floor: Optional[int] = None) -> LaurentSeries2:
    """Principal k-th root c^(1/k) X^(a/k) Y^(b/k) sum_i binom(1/k, i) u^i."""
    if k < 1:
        raise ValueError("k must be positive")
    a, b, c, u = _split_unit(g)
    if a % k or b % k:
        raise DivisibilityError(f"{k} does not divide both leading exponents ({a}, {b})")
    r = c.kth_root(k)
    if r is None:
        raise FieldExtensionRequired(k, what=f"{k}-th root of the leading coefficient {c}")
    ak, bk = a // k, b // k
    if not u and g.floor is None:
        return LaurentSeries2(g.ring, {(ak, bk): r}, None)
    rho = _rel_precision(g, ak + bk, floor)
    if rho is None:
        raise PrecisionError("root of an exact non-monomial series needs a floor")
    e = Fraction(1, k)
    s = _series_in_u(g.ring, u, lambda i: binomial(e, i), -rho)
    return LaurentSeries2(g.ring, {(i + ak, j + bk): v * r for (i, j), v in s.items()}, ak + bk - rho)


def all_kth_roots(g: LaurentSeries2, k: int, floor: Optional[int] = None) -> list[LaurentSeries2]:
    """The k roots eps^i h; the scalar field must contain the k-th roots of unity."""
    field = g.ring if isinstance(g.ring, Field) else g.ring.field
    h = series_kth_root(g, k, floor)
    return [h.scale(field.root_of_unity(k, i)) for i in range(k)]


def series_power(h: LaurentSeries2, n: int, floor: Optional[int] = None) -> LaurentSeries2:
    """h^n for any integer n; negative powers go through series_invert."""
    if n < 0:
        d = h.degree() or 0
        inv_floor = None if floor is None else -d - (n * d - floor)
        h = series_invert(h, inv_floor)
        n = -n
    result = LaurentSeries2.constant(h.ring, 1)
    base = h
    while n:
        if n & 1:
            result = result.mul(base, floor)
        n >>= 1
        if n:
            base = base.mul(base)
    return result if floor is None else result.truncate(floor)


def jacobian_det(f: LaurentSeries2, g: LaurentSeries2) -> LaurentSeries2:
    """df/dX * dg/dY - df/dY * dg/dX."""
    f._check(g)
    return f.diff_x().mul(g.diff_y()) - f.diff_y().mul(g.diff_x())


def torus_substitute(f: LaurentSeries2, x1: PuiseuxElement, y1: PuiseuxElement) -> LaurentSeries2:
    """X -> x1 X, Y -> y1 Y; the result has Puiseux coefficients c x1^i y1^j."""
    if not isinstance(f.ring, Field):
        raise TypeError("torus_substitute expects scalar coefficients")
    vx, vy = x1.valuation(), y1.valuation()
    if vx != vy:
        raise TorusError(f"base point not on a torus: v(x1)={vx}, v(y1)={vy}")
    if not vx < 0:
        raise TorusError(f"torus level must be positive, got s={-vx}")
    ring = PuiseuxRing(f.ring)
    xs, ys = _PowerCache(x1, None), _PowerCache(y1, None)
    terms = {(i, j): xs.get(i).mul(ys.get(j)).scale(c) for (i, j), c in f.terms.items()}
    return LaurentSeries2(ring, terms, f.floor)


def from_terms(ring, items: Iterable, floor: Optional[int] = None) -> LaurentSeries2:
    """Build from (i, j, c) triples, summing repeats."""
    terms = {}
    for i, j, c in items:
        c = ring(c)
        terms[(i, j)] = terms[(i, j)] + c if (i, j) in terms else c
    return LaurentSeries2(ring, terms, floor)


def X(ring, floor=None) -> LaurentSeries2:
    return LaurentSeries2.monomial(ring, 1, 0, 1, floor)


def Y(ring, floor=None) -> LaurentSeries2:
    return LaurentSeries2.monomial(ring, 0, 1, 1, floor)


Coefficient = Union[Scalar, PuiseuxElement]
