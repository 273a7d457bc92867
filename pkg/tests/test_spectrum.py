from fractions import Fraction

import mpmath
import pytest

from crosscert.errors import InvalidParameterError
from crosscert.spectrum import Parameters, is_prime_power, multiplicities, theta, theta_ratio_squared

from oracles import gauss_pascal


def P(q, n, k, l):
    return Parameters.make(q, n, k, l)


def theta_float(q, n, i, k, l):
    G = gauss_pascal
    if G(n - 2 * i, k - i, q) == 0:
        return mpmath.mpf(0)
    e = mpmath.mpf(i * (i - 1)) / 2 + k * l - mpmath.mpf(i * (k + l)) / 2
    return ((-1) ** i * mpmath.power(q, e) * G(n - k - i, l - i, q)
            * mpmath.sqrt(mpmath.mpf(G(n - 2 * i, k - i, q)) / G(n - 2 * i, l - i, q)))


def test_parameters_validation_and_swap():
    p = P(2, 6, 2, 3)
    assert (p.k, p.l, p.swapped) == (3, 2, True)
    for bad in [(1, 4, 1, 1), (2, 3, 2, 1), (2, 4, 0, 1), (2, 1, 1, 1)]:
        with pytest.raises(InvalidParameterError):
            P(*bad)
    assert P(4, 4, 2, 2).q_prime_power
    assert not P(6, 4, 2, 2).q_prime_power


def test_is_prime_power():
    assert [q for q in range(2, 30) if is_prime_power(q)] == \
        [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 8, 3), (5, 6, 1)])
def test_theta_zero_index(q, n, k):
    t = theta(P(q, n, k, k), 0, k, k)
    assert t.rational_value() == q ** (k * k) * gauss_pascal(n - k, k, q)


def test_theta_known_values():
    p = P(2, 4, 2, 2)
    assert theta(p, 1, 2, 2).rational_value() == -4
    assert theta(p, 2, 2, 2).rational_value() == 2
    assert theta(p, 0, 2, 2).rational_value() == 16


def test_theta_zero_when_k_below_i():
    p = P(2, 8, 3, 3)
    assert theta(p, 3, 2, 3).is_zero
    assert theta(p, 2, 7, 3).is_zero  # k > n - i


def test_theta_out_of_range():
    p = P(2, 6, 3, 3)
    with pytest.raises(InvalidParameterError):
        theta(p, 4, 3, 3)
    with pytest.raises(InvalidParameterError):
        theta(p, 2, 3, 1)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("n", [4, 5, 7, 8])
def test_theta_matches_float_formula(q, n):
    mpmath.mp.prec = 120
    params = Parameters(q, n, n // 2, n // 2)
    for i in range(n // 2 + 1):
        for l in range(i, n - i + 1):
            for k in range(n + 1):
                t = theta(params, i, k, l)
                expect = theta_float(q, n, i, k, l)
                assert abs(mpmath.mpf(float(t)) - expect) <= 1e-9 * (1 + abs(expect))


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n", [4, 6, 9])
def test_theta_symmetry_exact(q, n):
    params = Parameters(q, n, n // 2, n // 2)
    for i in range(n // 2 + 1):
        for k in range(i, n - i + 1):
            for l in range(i, n - i + 1):
                a, b = theta(params, i, k, l), theta(params, i, l, k)
                assert a.squared() == b.squared()
                assert (a.rho > 0) == (b.rho > 0)


def test_half_integer_exponent_absorbed_into_radical():
    # i(k+l) odd: i=1, k=2, l=1
    t = theta(P(3, 6, 2, 1), 1, 2, 1)
    assert t.num_rad % 3 == 0 and t.rho.denominator == 1


@pytest.mark.parametrize("q,n,k,l", [(2, 8, 4, 3), (3, 10, 5, 4), (5, 12, 6, 6), (2, 14, 7, 5)])
def test_ratio_chain(q, n, k, l):
    p = P(q, n, k, l)
    for i in range(2, l):
        ratio = theta(p, i + 1, k, l).squared() / theta(p, i, k, l).squared()
        assert ratio == theta_ratio_squared(p, i)
        assert ratio < 1


def test_multiplicities_examples():
    m = multiplicities(P(2, 4, 2, 2))
    assert m[0] == 1
    assert (m[1], m[2]) == (15 - 1, 35 - 15)
    assert m[0] + m[1] + m[2] == 35


@pytest.mark.parametrize("q", [2, 3, 4, 7])
@pytest.mark.parametrize("n", [2, 5, 8, 11])
def test_spectral_completeness(q, n):
    m = multiplicities(Parameters(q, n, n // 2, n // 2))
    for k in range(n // 2 + 1):
        assert all(m[i] >= 0 for i in range(n // 2 + 1))
        assert sum(m[i] for i in range(k + 1)) == gauss_pascal(n, k, q)


def test_theta_json():
    t = theta(P(2, 4, 2, 1), 0, 2, 1)
    assert t.to_json() == {"rho": f"{t.rho.numerator}/{t.rho.denominator}",
                           "num_rad": t.num_rad, "den_rad": t.den_rad}
    assert Fraction(t.rho) == 2 ** 2 * gauss_pascal(2, 1, 2)
