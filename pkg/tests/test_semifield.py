import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import ADDITIVE, ALL, raw_values
from tropopt import (
    MAX_PLUS,
    MAX_TIMES,
    MIN_PLUS,
    MIN_TIMES,
    Scalar,
    compare,
    get_semifield,
    inverse,
    oplus,
    otimes,
    power,
)
from tropopt.errors import BottomInversionError, ParseError, SemifieldMismatch
from tropopt.semifield import as_exponent


def S(sf, v):
    return Scalar.of(sf, v)


class TestExamples:
    def test_oplus(self):
        assert oplus(S(MAX_PLUS, 2), S(MAX_PLUS, 4)) == S(MAX_PLUS, 4)
        assert oplus(S(MAX_PLUS, 7), Scalar.zero(MAX_PLUS)) == S(MAX_PLUS, 7)
        assert oplus(S(MIN_TIMES, 3), S(MIN_TIMES, 5)).value == 3.0

    def test_otimes(self):
        assert otimes(S(MAX_PLUS, 2), S(MAX_PLUS, 3)) == S(MAX_PLUS, 5)
        assert otimes(S(MAX_TIMES, 2), S(MAX_TIMES, 3)).value == 6.0
        for sf in ALL:
            assert otimes(S(sf, 2), Scalar.zero(sf)).is_zero

    def test_inverse(self):
        assert inverse(S(MAX_PLUS, 3)) == S(MAX_PLUS, -3)
        assert inverse(S(MAX_PLUS, 0)) == S(MAX_PLUS, 0)
        assert inverse(S(MAX_TIMES, 4)).value == 0.25
        with pytest.raises(BottomInversionError):
            inverse(Scalar.zero(MAX_PLUS))

    def test_power(self):
        assert power(S(MAX_PLUS, 8), Fraction(1, 3)) == S(MAX_PLUS, Fraction(8, 3))
        assert power(S(MAX_TIMES, 9), Fraction(1, 2)).value == pytest.approx(3.0)
        for sf in ALL:
            assert power(S(sf, 2), 0) == Scalar.one(sf)

    def test_power_of_zero(self):
        assert power(Scalar.zero(MAX_PLUS), Fraction(1, 3)).is_zero
        with pytest.raises(BottomInversionError):
            power(Scalar.zero(MAX_PLUS), 0)
        with pytest.raises(BottomInversionError):
            power(Scalar.zero(MAX_PLUS), -1)

    def test_float_exponent_refused(self):
        with pytest.raises(TypeError):
            power(S(MAX_PLUS, 2), 0.5)
        assert as_exponent((1, 3)) == Fraction(1, 3)

    def test_compare(self):
        assert compare(S(MAX_PLUS, 2), S(MAX_PLUS, 4)) == -1
        assert compare(S(MIN_PLUS, 2), S(MIN_PLUS, 4)) == 1
        for sf in ALL:
            assert compare(Scalar.zero(sf), S(sf, 1)) == -1
            assert compare(S(sf, 1), S(sf, 1)) == 0

    def test_identities(self):
        assert MAX_PLUS.one == 0 and MIN_PLUS.one == 0
        assert MAX_TIMES.one == 1.0 and MIN_TIMES.one == 1.0


class TestCoercion:
    def test_strings_and_numbers(self):
        assert MAX_PLUS.coerce("3/6") == Fraction(1, 2)
        assert MAX_PLUS.coerce("zero") is None
        assert MAX_PLUS.coerce(0.25) == Fraction(1, 4)
        assert MAX_PLUS.coerce(float("-inf")) is None
        assert MIN_PLUS.coerce(float("inf")) is None
        assert MAX_TIMES.coerce(0) is None
        assert MIN_TIMES.coerce(float("inf")) is None

    @pytest.mark.parametrize("sf, bad", [
        (MAX_PLUS, float("inf")), (MIN_PLUS, float("-inf")), (MAX_TIMES, -1),
        (MIN_TIMES, 0), (MAX_PLUS, "abc"), (MAX_PLUS, True), (MAX_PLUS, float("nan")),
    ])
    def test_rejects(self, sf, bad):
        with pytest.raises(ParseError):
            sf.coerce(bad)

    def test_mixing_semifields(self):
        with pytest.raises(SemifieldMismatch):
            S(MAX_PLUS, 1) + S(MIN_PLUS, 1)
        with pytest.raises(SemifieldMismatch):
            MAX_PLUS.coerce(S(MAX_TIMES, 2))

    def test_lookup(self):
        assert get_semifield("min-times") is MIN_TIMES
        with pytest.raises(ParseError):
            get_semifield("plus-plus")

    def test_render(self):
        assert MAX_PLUS.render(Fraction(6, 4)) == "3/2"
        assert MAX_PLUS.render(Fraction(4)) == 4
        assert MAX_PLUS.render(None) == "zero"
        assert MAX_PLUS.human(None) == "-inf"
        assert MIN_PLUS.human(None) == "+inf"


# --- properties ----------------------------------------------------------

semifield = st.sampled_from(ALL)


@st.composite
def triple(draw):
    sf = draw(semifield)
    vals = raw_values(sf, zero_weight=0.15)
    return sf, draw(vals), draw(vals), draw(vals)


def same(sf, a, b):
    return sf.eq(a, b)


@given(triple())
def test_idempotent_commutative_associative(t):
    sf, a, b, c = t
    assert same(sf, sf.add(a, a), a)
    assert same(sf, sf.add(a, b), sf.add(b, a))
    assert same(sf, sf.add(sf.add(a, b), c), sf.add(a, sf.add(b, c)))
    assert same(sf, sf.mul(sf.mul(a, b), c), sf.mul(a, sf.mul(b, c)))
    assert same(sf, sf.mul(a, b), sf.mul(b, a))


@given(triple())
def test_distributive_and_absorbing(t):
    sf, a, b, c = t
    assert same(sf, sf.mul(sf.add(a, b), c), sf.add(sf.mul(a, c), sf.mul(b, c)))
    assert sf.mul(a, None) is None
    assert same(sf, sf.add(a, None), a)
    assert same(sf, sf.mul(a, sf.one), a)


@given(semifield.flatmap(lambda sf: st.tuples(st.just(sf), raw_values(sf, 0))),
       st.integers(-6, 6), st.integers(1, 6), st.integers(-6, 6), st.integers(1, 6))
def test_inverse_and_power_laws(sa, pn, pd, qn, qd):
    sf, a = sa
    p, q = Fraction(pn, pd), Fraction(qn, qd)
    assert same(sf, sf.mul(sf.inv(a), a), sf.one)
    assert same(sf, sf.mul(sf.pow(a, p), sf.pow(a, q)), sf.pow(a, p + q))


@given(triple())
def test_order_matches_addition(t):
    sf, a, b, _ = t
    sa, sb = Scalar(sf, a), Scalar(sf, b)
    less = compare(sa, sb) == -1
    assert less == (sf.add(a, b) == b and a != b)
    if a is not None and b is not None and sf.le(a, b):
        assert sf.magnitude(a) <= sf.magnitude(b)


def _random_expression(rng, depth):
    """Random expression tree over +, *, inverse and rational roots."""
    if depth == 0 or rng.random() < 0.25:
        return ("leaf", Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4))))
    op = rng.choice(("add", "mul", "inv", "pow"))
    if op in ("add", "mul"):
        return (op, _random_expression(rng, depth - 1), _random_expression(rng, depth - 1))
    if op == "inv":
        return (op, _random_expression(rng, depth - 1))
    return (op, _random_expression(rng, depth - 1), Fraction(rng.randint(1, 5), rng.randint(1, 5)))


def _evaluate(sf, expr, leaf):
    tag = expr[0]
    if tag == "leaf":
        return leaf(expr[1])
    if tag == "add":
        return sf.add(_evaluate(sf, expr[1], leaf), _evaluate(sf, expr[2], leaf))
    if tag == "mul":
        return sf.mul(_evaluate(sf, expr[1], leaf), _evaluate(sf, expr[2], leaf))
    if tag == "inv":
        return sf.inv(_evaluate(sf, expr[1], leaf))
    return sf.pow(_evaluate(sf, expr[1], leaf), expr[2])


@given(st.integers(0, 2**32 - 1))
def test_exp_map_is_isomorphism(seed):
    rng = random.Random(seed)
    expr = _random_expression(rng, 5)
    additive = _evaluate(MAX_PLUS, expr, lambda v: v)
    multiplicative = _evaluate(MAX_TIMES, expr, lambda v: math.exp(v))
    assert math.isclose(math.exp(additive), multiplicative, rel_tol=1e-6)


@given(st.sampled_from(ADDITIVE).flatmap(lambda sf: st.tuples(st.just(sf), raw_values(sf, 0))))
def test_lift_inverts_magnitude(sa):
    sf, a = sa
    assert sf.lift(sf.magnitude(a)) == a
