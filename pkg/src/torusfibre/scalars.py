"""Exact coefficient fields: Q, Q(i) and cyclotomic fields Q(zeta_K).

Every field is represented as Q[x] / Phi_K(x); an element stores its
coefficient vector on the power basis 1, zeta, ..., zeta^(phi(K)-1).
The rationals are the case K = 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Union

from sympy import Poly, Symbol, cyclotomic_poly, integer_nthroot

from .errors import FieldExtensionRequired, FieldMismatchError

Number = Union[int, Fraction]

_x = Symbol("x")


def _phi(order: int) -> tuple[int, ...]:
    coeffs = Poly(cyclotomic_poly(order, _x), _x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = Fraction(a[-1]) / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
    return _trim(q), a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ac in enumerate(a):
        if ac:
            for j, bc in enumerate(b):
                out[i + j] += ac * bc
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


class Field:
    """The field Q(zeta_K), tagged as rational, gaussian or cyclotomic.

    Two fields are the same instance only if both tag and order agree;
    arithmetic between different instances raises FieldMismatchError.
    """

    __slots__ = ("kind", "order", "modulus", "degree", "_zeta_cache")

    def __init__(self, kind: str, order: int):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        self.kind = kind
        self.order = order
        self.modulus = _phi(order)
        self.degree = len(self.modulus) - 1
        self._zeta_cache: dict[int, Scalar] = {}

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.order) == (other.kind, other.order)

    def __hash__(self):
        return hash((self.kind, self.order))

    def __repr__(self):
        if self.kind == "cyclotomic":
            return f"CyclotomicField({self.order})"
        return "RationalField()" if self.kind == "rational" else "GaussianField()"

    @property
    def descriptor(self) -> str:
        if self.kind == "cyclotomic":
            return f"cyclotomic:{self.order}"
        return self.kind

    # -- construction ----------------------------------------------------

    def __call__(self, value: Union[Number, str, "Scalar", Iterable]) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatchError(f"{value.field!r} element used in {self!r}")
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(self, (Fraction(value),))
        if isinstance(value, str):
            return Scalar(self, (Fraction(value),))
        return Scalar(self, tuple(Fraction(c) for c in value))

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, ())

    @property
    def one(self) -> "Scalar":
        return Scalar(self, (Fraction(1),))

    @property
    def gen(self) -> "Scalar":
        """zeta_K itself (equal to 1 when K = 1)."""
        return Scalar(self, (Fraction(0), Fraction(1)))

    # -- roots of unity --------------------------------------------------

    @property
    def unity_order(self) -> int:
        """Order of the (cyclic) group of roots of unity in the field."""
        return self.order if self.order % 2 == 0 else 2 * self.order

    def has_roots_of_unity(self, k: int) -> bool:
        return self.unity_order % k == 0

    def _zeta_power(self, j: int) -> "Scalar":
        """zeta_N^j for N = unity_order."""
        n = self.unity_order
        j %= n
        cached = self._zeta_cache.get(j)
        if cached is not None:
            return cached
        if n == self.order:
            base = self.gen
        else:
            # K odd: zeta_{2K} = -zeta_K^((K+1)/2)
            base = -(self.gen ** ((self.order + 1) // 2))
        out = base ** j
        self._zeta_cache[j] = out
        return out

    def root_of_unity(self, k: int, power: int = 1) -> "Scalar":
        """(zeta_k)^power for the canonical primitive k-th root zeta_k."""
        if k < 1:
            raise ValueError("k must be positive")
        if not self.has_roots_of_unity(k):
            raise FieldExtensionRequired(k)
        return self._zeta_power((self.unity_order // k) * power)

    def primitive_root_of_unity(self, k: int) -> "Scalar":
        return self.root_of_unity(k, 1)

    def roots_of_unity(self, k: int) -> list["Scalar"]:
        return [self.root_of_unity(k, i) for i in range(k)]


def RationalField() -> Field:
    return Field("rational", 1)


def GaussianField() -> Field:
    return Field("gaussian", 4)


def CyclotomicField(order: int) -> Field:
    return Field("cyclotomic", order)


def field_from_descriptor(desc: str) -> Field:
    """Parse ``rational``, ``gaussian`` or ``cyclotomic:K``."""
    if desc == "rational":
        return RationalField()
    if desc == "gaussian":
        return GaussianField()
    if desc.startswith("cyclotomic:"):
        try:
            order = int(desc.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad field descriptor {desc!r}") from None
        return CyclotomicField(order)
    raise ValueError(f"bad field descriptor {desc!r}")


class Scalar:
    """Immutable element of a Field, kept reduced modulo Phi_K."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: tuple):
        coeffs = list(coeffs)
        if len(coeffs) > field.degree:
            _, coeffs = _poly_divmod(coeffs, field.modulus)
        self.field = field
        self.coeffs = tuple(_trim(coeffs))

    # -- helpers ---------------------------------------------------------

    def _coerce(self, other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(self.field, (Fraction(other),))
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return Scalar(self.field, tuple(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, tuple(-c for c in self.coeffs))

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

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.field.zero
            return Scalar(self.field, tuple(c * other for c in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.field.degree == 1:
            if not self.coeffs or not o.coeffs:
                return self.field.zero
            return Scalar(self.field, (self.coeffs[0] * o.coeffs[0],))
        return Scalar(self.field, tuple(_poly_mul(list(self.coeffs), list(o.coeffs))))

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero scalar")
        if len(self.coeffs) == 1:
            return Scalar(self.field, (1 / self.coeffs[0],))
        # extended Euclid against the cyclotomic modulus
        r0, r1 = [Fraction(c) for c in self.field.modulus], list(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return Scalar(self.field, tuple(x / c for x in s1))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Scalar(self.field, tuple(c / other for c in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((Fraction(other),) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def normalized(self) -> "Scalar":
        return Scalar(self.field, self.coeffs)

    def kth_root(self, k: int) -> Optional["Scalar"]:
        return scalar_kth_root(self, k)

    def __repr__(self):
        return f"Scalar({self.field!r}, {self})"

    def __str__(self):
        if self.is_rational():
            return str(self.as_fraction())
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"({c})*z^{i}")
        return " + ".join(parts)


def field_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def field_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def field_inv(a: Scalar) -> Scalar:
    return a.inv()


def primitive_root_of_unity(field: Field, k: int) -> Scalar:
    return field.primitive_root_of_unity(k)


def rational_kth_root(q: Fraction, k: int) -> Optional[Fraction]:
    """Exact rational k-th root, None when q has none."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign, q = -1, -q
    num, exact_n = integer_nthroot(q.numerator, k)
    den, exact_d = integer_nthroot(q.denominator, k)
    if not (exact_n and exact_d):
        return None
    return sign * Fraction(int(num), int(den))


def scalar_kth_root(a: Scalar, k: int) -> Optional[Scalar]:
    """A k-th root of ``a`` of the form r * zeta^m with r rational.

    Returns None when no such root exists in the field. For positive
    rationals the positive real root is returned.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if a.is_zero():
        raise ZeroDivisionError("k-th root of zero is not defined here")
    field = a.field
    n = field.unity_order
    g = gcd(k, n)
    for j in range(n):
        b = a * field._zeta_power(-j)
        if not b.is_rational():
            continue
        r = rational_kth_root(b.as_fraction(), k)
        if r is None or j % g:
            continue
        # solve m*k = j (mod n)
        m = ((j // g) * pow(k // g, -1, n // g)) % (n // g) if n // g > 1 else 0
        return field._zeta_power(m) * r
    return None


_BINOMIAL_CACHE: dict[tuple[Fraction, int], Fraction] = {}


def binomial(r: Fraction, i: int) -> Fraction:
    """Generalized binomial coefficient (r choose i), cached."""
    key = (Fraction(r), i)
    hit = _BINOMIAL_CACHE.get(key)
    if hit is not None:
        return hit
    out = Fraction(1)
    for j in range(i):
        out = out * (key[0] - j) / (j + 1)
    _BINOMIAL_CACHE[key] = out
    return out
