from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torusfibre.errors import NonProportionalLeading
from torusfibre.instance import w_image
from torusfibre.laurent2 import LaurentSeries2, from_terms
from torusfibre.reduction import (
    BELOW_TARGET,
    FLOOR_EXHAUSTED,
    GCD_OBSTRUCTION,
    NON_PROPORTIONAL,
    REACHED_TARGET,
    ZERO_RESIDUAL,
    WPoly,
    check_exponent_relations,
    epsilon_distinctness,
    reduce_full,
    reduce_once,
    reduction_from_w,
    rescale_w,
)
from torusfibre.scalars import CyclotomicField, RationalField

Q = RationalField()
G = from_terms(Q, [(2, 4, 1), (1, 0, 1)])


def sympy_fixture(floor):
    """f = 2 (X Y^2)^3 (1 + u)^(3/2) + 5 X^-1 Y^-3 with u = X^-1 Y^-4, expanded by sympy."""
    from sympy import Rational, series, symbols

    u = symbols("u")
    s = series((1 + u) ** Rational(3, 2), u, 0, 12).removeO()
    terms = {(-1, -3): Q(5)}
    for m in range(12):
        c = Fraction(str(s.coeff(u, m)))
        e = (3 - m, 6 - 4 * m)
        if sum(e) >= floor and c:
            terms[e] = terms.get(e, Q(0)) + Q(2 * c)
    return LaurentSeries2(Q, terms, floor)


def test_fixture_against_independent_expansion():
    f = sympy_fixture(-12)
    red = reduce_full(f, G)
    assert red.status == REACHED_TARGET
    assert red.w == WPoly({3: Q(2)}, 2)
    assert (red.k_tilde, red.k) == (2, 2)
    assert red.d == 5
    assert red.residual_leading.exponent == (-1, -3)
    assert red.residual_leading.degree == 2 - 6
    assert red.epsilon0 == -1
    assert [(s.c, s.l, s.k) for s in red.trace] == [(Q(2), 3, 2)]


def test_built_fixture_equals_sympy_expansion():
    built = w_image(G, WPoly({3: Q(2)}, 2), 2, -12, from_terms(Q, [(-1, -3, 5)]))
    assert built == sympy_fixture(-12)


def test_branch_residual_degrees():
    red = reduce_full(sympy_fixture(-12), G)
    by_i = {b.i: b for b in red.branch_residuals}
    assert by_i[0].degree == -4 and by_i[0].coefficient == 5
    # f - W(-g^(1/2)) = 4 (g^(1/2))^3 + 5 X^-1 Y^-3
    assert by_i[1].degree == 9 and by_i[1].exponent == (3, 6) and by_i[1].coefficient == 4


def test_exponent_relations():
    rel = check_exponent_relations(sympy_fixture(-12), G)
    assert rel.proportional and rel.ratio == Fraction(3, 2)
    assert rel.dichotomy == "distinct"
    assert abs(rel.m1 - rel.m2) * rel.n == rel.m * abs(rel.n1 - rel.n2)


def test_reduce_once_non_proportional():
    h = from_terms(Q, [(3, 5, 1)], floor=-10)
    with pytest.raises(NonProportionalLeading):
        reduce_once(h, G)


@pytest.mark.parametrize("lead,n", [((1, 2), (2, 4)), ((1, 2), (3, 6)), ((2, 4), (3, 6)), ((5, 10), (2, 4))])
def test_step_denominator_divides_gcd(lead, n):
    g = from_terms(Q, [(n[0], n[1], 1), (1, 0, 1)])
    h = from_terms(Q, [(lead[0], lead[1], 1)], floor=-12)
    step, rest = reduce_once(h, g)
    assert Fraction(step.l, step.k) == Fraction(sum(lead), sum(n))
    assert n[0] % step.k == 0 and n[1] % step.k == 0
    assert rest.degree() is None or rest.degree() < sum(lead)


@pytest.mark.parametrize("plus", [None, [(1, 0, 1)]])
def test_coprime_exponents(plus):
    g = from_terms(Q, [(2, 3, 1), (1, 0, 1)])
    f = w_image(g, WPoly({2: Q(1)}, 1), 1, -15, None if plus is None else from_terms(Q, plus))
    red = reduce_full(f, g)
    assert red.k == 1
    assert all(s.k == 1 for s in red.trace)
    assert red.status == (GCD_OBSTRUCTION if plus is None else NON_PROPORTIONAL)


def test_floor_exhausted_before_any_step():
    red = reduce_full(sympy_fixture(-8), G)
    assert red.status == FLOOR_EXHAUSTED and not red.trace


def test_below_target():
    f = from_terms(Q, [(-3, -3, 1)], floor=-14)
    assert reduce_full(f, G).status == BELOW_TARGET


def test_prescribed_w_round_trip():
    w0 = WPoly({5: Q(3), 3: Q(-1), 1: Q(2)}, 2)
    f = w_image(G, w0, 2, -20)
    red = reduce_full(f, G)
    assert red.w == w0
    assert red.status == ZERO_RESIDUAL


def test_equal_exponents_degenerate_case():
    g = from_terms(Q, [(2, 2, 1), (1, 0, 1)])
    f = w_image(g, WPoly({3: Q(2)}, 2), 2, -12, from_terms(Q, [(0, -2, 7), (-2, 0, 1)]))
    red = reduce_full(f, g)
    assert red.status == REACHED_TARGET
    assert not red.residual_leading.is_monomial  # n1 = n2 allows a two-term leading form


def test_epsilon_distinctness():
    rep = epsilon_distinctness(WPoly({3: Q(2)}, 2), Q, 2)
    assert rep.gcd_ok and rep.all_distinct and rep.distinct_indices == [1]
    bad = epsilon_distinctness(WPoly({2: Q(1)}, 2), Q)
    assert not bad.gcd_ok and bad.failing_roots == [1]
    K = CyclotomicField(3)
    w = WPoly({4: K(1), 1: K(1)}, 3)
    rep = epsilon_distinctness(w, K, 3)
    assert rep.all_distinct and rep.distinct_indices == [1, 2]


def test_rescale_w():
    assert rescale_w(WPoly({3: Q(2)}, 2), 4) == WPoly({6: Q(2)}, 4)
    with pytest.raises(ValueError):
        rescale_w(WPoly({1: Q(1)}, 3), 4)


def test_supplied_w_agrees_with_engine():
    f = sympy_fixture(-12)
    a = reduce_full(f, G)
    b = reduction_from_w(f, G, WPoly({3: Q(2)}, 2))
    assert b.status == a.status and b.d == a.d
    assert b.residual.agrees(a.residual)


@settings(max_examples=20, deadline=None)
@given(w=st.dictionaries(st.integers(1, 6), st.integers(-4, 4).filter(bool), min_size=1, max_size=3),
       d=st.integers(-5, 5).filter(bool))
def test_reduction_recovers_w(w, d):
    w0 = WPoly({e: Q(c) for e, c in w.items()}, 2)
    top = 3 * max(w)
    f = w_image(G, w0, 2, min(-12, -top), from_terms(Q, [(-1, -3, d)]))
    red = reduce_full(f, G)
    assert red.status == REACHED_TARGET
    # the engine returns W in lowest terms, e.g. T^2 at g^(1/2) comes back as T at g
    assert rescale_w(red.w, 2) == w0
    assert red.distinctness.gcd_ok
    assert red.d == d
