"""Truncated Puiseux series in t^-1: a desk-scale model of the valued field K.

An element is a finite sum of c_q t^q with rational exponents q, together
with a floor: exponents below the floor are unknown. ``floor=None`` marks an
exact element. The valuation is v(a) = -max q; absolute values are never
materialised, all comparisons are made on valuations.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import lcm
from typing import Optional, Union

from .errors import FieldExtensionRequired, FieldMismatchError, PrecisionError
from .scalars import Field, Scalar, binomial

INF = math.inf


def _fmax(*floors):
    known = [f for f in floors if f is not None]
    return max(known) if known else None


class PuiseuxElement:
    __slots__ = ("field", "terms", "floor", "D")

    def __init__(self, field: Field, terms=None, floor=None, D: int = 1):
        self.field = field
        floor = None if floor is None else Fraction(floor)
        clean: dict[Fraction, Scalar] = {}
        den = D
        for q, c in (terms or {}).items():
            q = Fraction(q)
            if floor is not None and q < floor:
                continue
            c = field(c)
            if c:
                clean[q] = c
                den = lcm(den, q.denominator)
        self.terms = clean
        self.floor = floor
        self.D = den

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, field: Field, c=1) -> "PuiseuxElement":
        return cls(field, {Fraction(0): field(c)})

    @classmethod
    def monomial(cls, field: Field, q, c=1) -> "PuiseuxElement":
        q = Fraction(q)
        return cls(field, {q: field(c)}, D=q.denominator)

    @classmethod
    def zero(cls, field: Field, floor=None) -> "PuiseuxElement":
        return cls(field, {}, floor)

    # -- inspection ------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_exact(self) -> bool:
        return self.floor is None

    def degree(self) -> Optional[Fraction]:
        return max(self.terms) if self.terms else None

    def _deg_bound(self):
        # upper bound on the degree of the true (untruncated) element
        if self.terms:
            return max(self.terms)
        return self.floor

    def valuation(self):
        """-(max exponent); +inf for the (truncated) zero element."""
        return -max(self.terms) if self.terms else INF

    def valuation_bound(self):
        """Exact valuation if nonzero, else the bound implied by the floor."""
        if self.terms:
            return -max(self.terms)
        return INF if self.floor is None else -self.floor

    def leading(self) -> tuple[Fraction, Scalar]:
        q = max(self.terms)
        return q, self.terms[q]

    def relative_precision(self):
        if self.floor is None:
            return None
        return self._deg_bound() - self.floor

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> Optional["PuiseuxElement"]:
        if isinstance(other, PuiseuxElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return PuiseuxElement.constant(self.field, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for q, c in o.terms.items():
            terms[q] = terms[q] + c if q in terms else c
        return PuiseuxElement(self.field, terms, _fmax(self.floor, o.floor), lcm(self.D, o.D))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxElement(self.field, {q: -c for q, c in self.terms.items()}, self.floor, self.D)

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

    def scale(self, c) -> "PuiseuxElement":
        c = self.field(c)
        if not c:
            return PuiseuxElement(self.field, {}, None)
        return PuiseuxElement(self.field, {q: v * c for q, v in self.terms.items()}, self.floor, self.D)

    def mul(self, other: "PuiseuxElement", cap=None) -> "PuiseuxElement":
        """Product; terms below ``cap`` (if given) are discarded as unknown."""
        o = self._coerce(other)
        if self.floor is None and not self.terms or o.floor is None and not o.terms:
            return PuiseuxElement(self.field, {}, None)
        floors = []
        if self.floor is not None:
            floors.append(self.floor + o._deg_bound())
        if o.floor is not None:
            floors.append(o.floor + self._deg_bound())
        floor = _fmax(max(floors) if floors else None, cap)
        a = sorted(self.terms.items(), reverse=True)
        b = sorted(o.terms.items(), reverse=True)
        out: dict[Fraction, Scalar] = {}
        for qa, ca in a:
            for qb, cb in b:
                q = qa + qb
                if floor is not None and q < floor:
                    break
                v = ca * cb
                out[q] = out[q] + v if q in out else v
        return PuiseuxElement(self.field, out, floor, lcm(self.D, o.D))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, PuiseuxElement):
            return NotImplemented
        return self.mul(other)

    __rmul__ = __mul__

    def _split(self):
        """Write self = c t^q (1 + u); return (q, c, u-terms with negative exponents)."""
        if not self.terms:
            raise ZeroDivisionError("element is zero up to its floor")
        q, c = self.leading()
        cinv = c.inv()
        u = {e - q: v * cinv for e, v in self.terms.items() if e != q}
        return q, c, u

    def _series_in_u(self, u, coeff, rel_floor):
        """sum_i coeff(i) u^i, dropping relative exponents below rel_floor."""
        one = self.field.one
        total = {Fraction(0): one}
        power = {Fraction(0): one}
        i = 0
        while True:
            i += 1
            nxt: dict[Fraction, Scalar] = {}
            for e1, c1 in power.items():
                for e2, c2 in u.items():
                    e = e1 + e2
                    if e < rel_floor:
                        continue
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

    def _resolve_rel(self, floor_req, out_deg):
        """Relative precision for an inverse/root with result degree out_deg."""
        rho = self.relative_precision()
        if floor_req is not None:
            req = out_deg - Fraction(floor_req)
            rho = req if rho is None else min(rho, req)
        return rho

    def inv(self, floor=None) -> "PuiseuxElement":
        q, c, u = self._split()
        if not u and self.floor is None:
            return PuiseuxElement(self.field, {-q: c.inv()}, None, self.D)
        rho = self._resolve_rel(floor, -q)
        if rho is None:
            raise PrecisionError("inverse of an exact non-monomial element needs a floor")
        s = self._series_in_u(u, lambda i: (-1) ** i, -rho)
        ci = c.inv()
        return PuiseuxElement(self.field, {e - q: v * ci for e, v in s.items()}, -q - rho, self.D)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(self.field(other).inv())
        if not isinstance(other, PuiseuxElement):
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = PuiseuxElement.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, floor) -> "PuiseuxElement":
        return PuiseuxElement(self.field, self.terms, _fmax(self.floor, Fraction(floor)), self.D)

    def principal_root(self, k: int, floor=None) -> "PuiseuxElement":
        q, c, u = self._split()
        r = c.kth_root(k)
        if r is None:
            raise FieldExtensionRequired(k, what=f"{k}-th root of the leading coefficient {c}")
        D = lcm(self.D, (q / k).denominator)
        if not u and self.floor is None:
            return PuiseuxElement(self.field, {q / k: r}, None, D)
        rho = self._resolve_rel(floor, q / k)
        if rho is None:
            raise PrecisionError("root of an exact non-monomial element needs a floor")
        e = Fraction(1, k)
        s = self._series_in_u(u, lambda i: binomial(e, i), -rho)
        return PuiseuxElement(self.field, {x + q / k: v * r for x, v in s.items()}, q / k - rho, D)

    # -- comparison --------------------------------------------------------

    def agrees(self, other, floor=None) -> bool:
        """Equality down to the common floor (and ``floor`` if given)."""
        o = self._coerce(other)
        f = _fmax(self.floor, o.floor, floor)
        a = {q: c for q, c in self.terms.items() if f is None or q >= f}
        b = {q: c for q, c in o.terms.items() if f is None or q >= f}
        return a == b

    def __eq__(self, other):
        if isinstance(other, PuiseuxElement):
            return self.field == other.field and self.terms == other.terms and self.floor == other.floor
        if isinstance(other, (int, Fraction, Scalar)):
            return self.floor is None and self == PuiseuxElement.constant(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash((tuple(sorted(self.terms.items())), self.floor))

    def __repr__(self):
        return f"PuiseuxElement({self})"

    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"({c})*t^({q})" for q, c in sorted(self.terms.items(), reverse=True))
        return body if self.floor is None else f"{body} + O(t^({self.floor}))"


class PuiseuxRing:
    """Coefficient-ring descriptor for series with Puiseux coefficients."""

    __slots__ = ("field",)

    def __init__(self, field: Field):
        self.field = field

    def __eq__(self, other):
        return isinstance(other, PuiseuxRing) and other.field == self.field

    def __hash__(self):
        return hash(("puiseux", self.field))

    def __repr__(self):
        return f"PuiseuxRing({self.field!r})"

    def __call__(self, value) -> PuiseuxElement:
        if isinstance(value, PuiseuxElement):
            if value.field != self.field:
                raise FieldMismatchError(f"{value.field!r} vs {self.field!r}")
            return value
        return PuiseuxElement.constant(self.field, value)

    @property
    def zero(self) -> PuiseuxElement:
        return PuiseuxElement(self.field, {}, None)

    @property
    def one(self) -> PuiseuxElement:
        return PuiseuxElement.constant(self.field, 1)


def pz_valuation(a: PuiseuxElement):
    return a.valuation()


def pz_add(a: PuiseuxElement, b: PuiseuxElement) -> PuiseuxElement:
    return a + b


def pz_mul(a: PuiseuxElement, b: PuiseuxElement) -> PuiseuxElement:
    return a * b


def pz_inv(a: PuiseuxElement, floor=None) -> PuiseuxElement:
    return a.inv(floor)


def pz_all_kth_roots(a: PuiseuxElement, k: int, floor=None) -> list[PuiseuxElement]:
    """All k roots eps^i * h of ``a``, h the principal root."""
    h = a.principal_root(k, floor)
    return [h.scale(a.field.root_of_unity(k, i)) for i in range(k)]


def t_power(field: Field, q: Union[int, Fraction]) -> PuiseuxElement:
    return PuiseuxElement.monomial(field, q)


def in_valuation_ring(a: PuiseuxElement) -> bool:
    return a.valuation_bound() >= 0


def in_maximal_ideal(a: PuiseuxElement) -> bool:
    return a.valuation_bound() > 0
