from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torusfibre.fixtures import INSTANCES
from torusfibre.instance import InstanceError, build, parse_text, validate
from torusfibre.laurent2 import LaurentSeries2
from torusfibre.puiseux import PuiseuxElement, PuiseuxRing
from torusfibre.scalars import CyclotomicField, RationalField
from torusfibre.serialize import (
    dumps,
    puiseux_from_json,
    puiseux_to_json,
    scalar_from_json,
    scalar_to_json,
    series_from_json,
    series_to_json,
)

Q = RationalField()
K5 = CyclotomicField(5)
fracs = st.fractions(min_value=-30, max_value=30, max_denominator=11)


@settings(max_examples=50, deadline=None)
@given(coeffs=st.lists(fracs, min_size=4, max_size=4))
def test_cyclotomic_scalar_round_trip(coeffs):
    c = K5(coeffs)
    assert scalar_from_json(K5, scalar_to_json(c)) == c


def test_rational_scalar_is_a_string():
    assert scalar_to_json(Q(Fraction(-3, 7))) == "-3/7"
    assert scalar_from_json(Q, "-3/7") == Fraction(-3, 7)
    with pytest.raises(ValueError):
        scalar_from_json(Q, ["1", "2"])


@settings(max_examples=40, deadline=None)
@given(d=st.dictionaries(st.fractions(-6, 6, max_denominator=3), st.integers(-5, 5).filter(bool), max_size=4),
       floor=st.sampled_from([None, Fraction(-7), Fraction(-15, 2)]))
def test_puiseux_round_trip(d, floor):
    a = PuiseuxElement(Q, d, floor)
    assert puiseux_from_json(Q, puiseux_to_json(a)) == a


@settings(max_examples=40, deadline=None)
@given(d=st.dictionaries(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.integers(-5, 5).filter(bool),
                         max_size=5),
       floor=st.sampled_from([None, -6, -12]))
def test_series_round_trip(d, floor):
    f = LaurentSeries2(Q, d, floor)
    assert series_from_json(Q, series_to_json(f)) == f


def test_series_with_puiseux_coefficients():
    R = PuiseuxRing(Q)
    f = LaurentSeries2(R, {(1, 0): PuiseuxElement(Q, {Fraction(1, 2): 3}, floor=-4)})
    assert series_from_json(R, series_to_json(f)) == f


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
    assert dumps({}).endswith("\n")


@pytest.mark.parametrize("name", sorted(INSTANCES))
def test_corpus_validates_and_builds(name):
    data = INSTANCES[name]
    validate(data)
    inst = build(data)
    assert inst.f.ring == inst.g.ring


def test_parse_error_location():
    with pytest.raises(InstanceError) as exc:
        parse_text('{"field": "rational",\n  "g": }')
    assert "line 2" in str(exc.value)


def test_schema_rejects_bad_keys():
    data = dict(INSTANCES["fixture"])
    data["unknown"] = 1
    with pytest.raises(InstanceError):
        validate(data)
    with pytest.raises(InstanceError):
        validate({"field": "rational"})
