import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from crosscert.errors import InvalidParameterError, RadicandMismatchError
from crosscert.exactnum import QuadraticNumber, gauss, parse_rational, qn_arith, qn_sign

from oracles import gauss_pascal


def QN(a, b, d):
    return QuadraticNumber(d, a, b)


def test_gauss_examples():
    assert 15 * 7 // (3 * 1) == 35
    assert gauss(4, 2, 2) == 35
    assert gauss(7, 0, 3) == 1
    assert gauss(0, 0, 5) == 1
    assert gauss(-1, 2, 2) == 0
    assert gauss(2, 3, 2) == 0
    assert gauss(3, -1, 2) == 0


def test_gauss_rejects_small_q():
    with pytest.raises(InvalidParameterError):
        gauss(3, 1, 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9])
def test_gauss_matches_pascal_oracle(q):
    for a in range(0, 12):
        for b in range(-1, a + 2):
            assert gauss(a, b, q) == gauss_pascal(a, b, q)


@given(st.integers(0, 20), st.integers(0, 20), st.integers(2, 11))
def test_gauss_symmetry_and_positivity(a, b, q):
    if b > a:
        a, b = b, a
    v = gauss(a, b, q)
    assert isinstance(v, int) and v >= 1
    assert v == gauss(a, a - b, q)


@given(st.integers(1, 20), st.integers(0, 20), st.integers(2, 11))
def test_gauss_pascal_recurrence(a, b, q):
    assert gauss(a, b, q) == gauss(a - 1, b - 1, q) + q ** b * gauss(a - 1, b, q)


def test_arith_examples():
    D = 4805
    r = QuadraticNumber.sqrt(D) * QuadraticNumber.sqrt(D)
    assert (r.a, r.b) == (D, 0)
    c = QN(1, 1, 2) * QN(1, -1, 2)
    assert (c.a, c.b) == (-1, 0)
    # (3)/(sqrt 5) = 3 sqrt5 / 5
    q = qn_arith(QN(3, 0, 5), QN(0, 1, 5), "div")
    assert (q.a, q.b) == (0, Fraction(3, 5))


def test_arith_errors():
    with pytest.raises(RadicandMismatchError):
        QN(1, 1, 2) + QN(1, 1, 3)
    with pytest.raises(ZeroDivisionError):
        QN(1, 1, 2) / QN(0, 0, 2)
    with pytest.raises(InvalidParameterError):
        QuadraticNumber(0, 1, 1)


def test_sign_examples():
    assert qn_sign(QN(0, 0, 7)) == 0
    assert 3 ** 2 > 1 * 8
    assert qn_sign(QN(3, -1, 8)) == 1
    assert 1 * 10 > 3 ** 2
    assert qn_sign(QN(-3, 1, 10)) == 1
    assert qn_sign(QN(-3, 0, 10)) == -1
    assert qn_sign(QN(2, -1, 4)) == 0


def test_perfect_square_radicand_collapses_consistently():
    x = QN(Fraction(1, 3), Fraction(2, 5), 9)
    assert x == Fraction(1, 3) + Fraction(6, 5)
    assert x.to_rational() == Fraction(23, 15)
    y = QN(6, -2, 9)
    assert y.is_zero()
    # dividing by a number whose conjugate norm vanishes
    assert QN(1, 0, 9) / QN(1, 1, 9) == Fraction(1, 4)


def test_sign_agrees_with_200_bit_floats():
    rng = random.Random(20261018)
    mpmath.mp.prec = 200
    checked = 0
    while checked < 10_000:
        d = rng.randint(1, 10 ** rng.randint(1, 30))
        a = Fraction(rng.randint(-10 ** 20, 10 ** 20), rng.randint(1, 10 ** 6))
        b = Fraction(rng.randint(-10 ** 12, 10 ** 12), rng.randint(1, 10 ** 6))
        approx = (mpmath.mpf(a.numerator) / a.denominator
                  + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(d))
        scale = abs(mpmath.mpf(a.numerator) / a.denominator) + 1
        if abs(approx) < scale * mpmath.mpf(2) ** -150:
            continue
        assert qn_sign(QN(a, b, d)) == (1 if approx > 0 else -1)
        checked += 1


def test_sign_near_cancellation():
    # 99 - 70 sqrt 2 > 0 with a^2 - 2 b^2 = 1
    assert qn_sign(QN(99, -70, 2)) == 1
    assert qn_sign(QN(-99, 70, 2)) == -1
    big = 10 ** 40
    assert qn_sign(QN(big, -1, big * big + 1)) == -1


rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@settings(max_examples=200)
@given(st.integers(1, 60), rationals, rationals, rationals, rationals, rationals, rationals)
def test_field_axioms(d, a1, b1, a2, b2, a3, b3):
    x, y, z = QN(a1, b1, d), QN(a2, b2, d), QN(a3, b3, d)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if not y.is_zero():
        assert (x / y) * y == x


def test_json_roundtrip():
    x = QN(Fraction(-7, 8), Fraction(1, 3968), 4805)
    doc = x.to_json()
    assert doc == {"d": "4805", "a": "-7/8", "b": "1/3968"}
    assert QuadraticNumber.from_json(doc) == x
    assert parse_rational("3/6") == Fraction(1, 2)
    with pytest.raises(InvalidParameterError):
        parse_rational("x/y")
