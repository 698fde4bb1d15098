import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torusfibre.errors import FieldExtensionRequired, FieldMismatchError
from torusfibre.scalars import (
    CyclotomicField,
    GaussianField,
    RationalField,
    binomial,
    field_from_descriptor,
    rational_kth_root,
    scalar_kth_root,
)


def embed(c, order):
    """Complex value of a scalar under zeta_K -> exp(2 pi i / K); the oracle for field arithmetic."""
    z = cmath.exp(2j * cmath.pi / order)
    return sum(complex(float(a)) * z ** i for i, a in enumerate(c.coeffs))


fracs = st.fractions(min_value=-20, max_value=20, max_denominator=7)


def scalars_in(field):
    return st.lists(fracs, min_size=field.degree, max_size=field.degree).map(field)


FIELDS = [RationalField(), GaussianField(), CyclotomicField(3), CyclotomicField(5), CyclotomicField(12)]


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.descriptor)
def test_modulus_matches_sympy(field):
    from sympy import Poly, cyclotomic_poly, symbols

    x = symbols("x")
    expected = Poly(cyclotomic_poly(field.order, x), x).all_coeffs()[::-1]
    assert list(field.modulus) == [int(c) for c in expected]


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.descriptor)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_arithmetic_matches_complex_embedding(field, data):
    a = data.draw(scalars_in(field))
    b = data.draw(scalars_in(field))
    K = field.order
    assert abs(embed(a + b, K) - (embed(a, K) + embed(b, K))) < 1e-9
    assert abs(embed(a * b, K) - embed(a, K) * embed(b, K)) < 1e-6
    if b:
        assert a / b * b == a
        assert abs(embed(b.inv(), K) * embed(b, K) - 1) < 1e-9


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.descriptor)
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_ring_laws(field, data):
    a, b, c = (data.draw(scalars_in(field)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == field.zero


def test_known_values():
    K3 = CyclotomicField(3)
    z = K3.gen
    assert (1 + z).inv() == -z  # 1 + z = -z^2 and z^3 = 1
    Q4 = GaussianField()
    assert Q4.gen ** 2 == -1
    assert RationalField()(Fraction(4, 9)).kth_root(2) == Fraction(2, 3)
    assert RationalField()(2).kth_root(2) is None


@pytest.mark.parametrize("K,k", [(1, 2), (4, 4), (3, 6), (3, 3), (5, 10), (12, 12)])
def test_roots_of_unity_are_primitive(K, k):
    field = CyclotomicField(K)
    z = field.primitive_root_of_unity(k)
    powers = [z ** j for j in range(k)]
    assert len(set(powers)) == k
    assert z ** k == field.one
    assert abs(embed(z, K) - cmath.exp(2j * cmath.pi / k)) < 1e-9


def test_missing_root_of_unity_names_order():
    with pytest.raises(FieldExtensionRequired) as exc:
        RationalField().primitive_root_of_unity(4)
    assert exc.value.order == 4
    assert "4" in str(exc.value)


@settings(max_examples=50, deadline=None)
@given(q=st.fractions(min_value=-50, max_value=50, max_denominator=30), k=st.integers(1, 5))
def test_rational_root_of_power(q, k):
    r = rational_kth_root(q ** k, k)
    assert r is not None and r ** k == q ** k


@pytest.mark.parametrize("K", [3, 4, 6])
def test_scalar_root_round_trip(K):
    field = CyclotomicField(K)
    for j in range(K):
        a = field.root_of_unity(K, j) * 8
        r = scalar_kth_root(a, 3)
        if r is not None:
            assert r ** 3 == a


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        CyclotomicField(3).gen + GaussianField().gen


def test_descriptors_round_trip():
    for d in ("rational", "gaussian", "cyclotomic:5"):
        assert field_from_descriptor(d).descriptor == d
    with pytest.raises(ValueError):
        field_from_descriptor("quaternion")


def test_binomial_against_sympy():
    from sympy import Rational, binomial as sbin

    for r in (Fraction(1, 2), Fraction(1, 3), Fraction(-1), Fraction(3, 2)):
        for i in range(8):
            assert binomial(r, i) == Fraction(str(sbin(Rational(r.numerator, r.denominator), i)))
