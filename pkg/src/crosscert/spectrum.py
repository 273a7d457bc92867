"""Closed-form eigenvalues of the disjointness matrices.

On the harmonic piece U_i the disjointness map from l-spaces to k-spaces acts
by a scalar theta_i^{k,l}.  The scalar is stored as rho * sqrt(num_rad /
den_rad) with rational rho, so all comparisons stay exact.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidParameterError
from .exactnum import gauss, rational_str

__all__ = ["Parameters", "Theta", "theta", "multiplicities", "is_prime_power"]


def is_prime_power(q):
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


@dataclass(frozen=True)
class Parameters:
    """Validated (q, n, k, l), normalised so that k >= l."""

    q: int
    n: int
    k: int
    l: int
    swapped: bool = field(default=False, compare=False)

    @classmethod
    def make(cls, q, n, k, l):
        q, n, k, l = int(q), int(n), int(k), int(l)
        if q < 2:
            raise InvalidParameterError(f"q must be >= 2, got {q}")
        if n < 2:
            raise InvalidParameterError(f"n must be >= 2, got {n}")
        if k < 1 or l < 1:
            raise InvalidParameterError(f"k and l must be >= 1, got k={k}, l={l}")
        if n < 2 * k or n < 2 * l:
            raise InvalidParameterError(
                f"need n >= 2k and n >= 2l, got n={n}, k={k}, l={l}")
        if k < l:
            return cls(q, n, l, k, swapped=True)
        return cls(q, n, k, l)

    @property
    def q_prime_power(self):
        return is_prime_power(self.q)

    def as_dict(self):
        return {"q": self.q, "n": self.n, "k": self.k, "l": self.l}

    def gauss(self, a, b):
        return gauss(a, b, self.q)


@dataclass(frozen=True)
class Theta:
    i: int
    k: int
    l: int
    rho: Fraction
    num_rad: int
    den_rad: int

    @property
    def is_zero(self):
        return self.rho == 0

    @property
    def is_rational(self):
        return self.rho == 0 or self.num_rad == self.den_rad

    def rational_value(self):
        if self.rho == 0:
            return Fraction(0)
        if self.num_rad != self.den_rad:
            raise ValueError("theta has a nontrivial radical part")
        return self.rho

    def squared(self):
        """theta^2 as an exact rational."""
        if self.rho == 0:
            return Fraction(0)
        return self.rho * self.rho * Fraction(self.num_rad, self.den_rad)

    def __float__(self):
        if self.rho == 0:
            return 0.0
        return float(self.rho) * (self.num_rad / self.den_rad) ** 0.5

    def to_json(self):
        return {"rho": rational_str(self.rho), "num_rad": self.num_rad,
                "den_rad": self.den_rad}


def theta(params, i, k, l):
    """Eigenvalue theta_i^{k,l} of the (k,l) disjointness matrix on U_i."""
    return _theta(params.q, params.n, i, k, l)


@lru_cache(maxsize=None)
def _theta(q, n, i, k, l):
    if not (0 <= i <= n // 2 and i <= l <= n - i and 0 <= k <= n):
        raise InvalidParameterError(
            f"theta index out of range: n={n}, i={i}, k={k}, l={l}")
    den_rad = gauss(n - 2 * i, l - i, q)
    num_rad = gauss(n - 2 * i, k - i, q)
    if num_rad == 0:
        return Theta(i, k, l, Fraction(0), 1, 1)
    # twice the q-exponent binom(i,2) + kl - i(k+l)/2
    twice = i * (i - 1) + 2 * k * l - i * (k + l)
    e, half = divmod(twice, 2)
    if half:
        num_rad *= q
    rho = Fraction(q) ** e * gauss(n - k - i, l - i, q)
    if i % 2:
        rho = -rho
    if num_rad == den_rad:
        num_rad = den_rad = 1
    return Theta(i, k, l, rho, num_rad, den_rad)


@dataclass(frozen=True)
class MultiplicityTable:
    d: dict

    def __getitem__(self, i):
        return self.d[i]

    def total(self, k):
        return sum(self.d[i] for i in range(min(k, max(self.d)) + 1))


def multiplicities(params):
    """d_i = dim U_i for i = 0..floor(n/2)."""
    q, n = params.q, params.n
    return MultiplicityTable(
        {i: gauss(n, i, q) - gauss(n, i - 1, q) for i in range(n // 2 + 1)})


def theta_ratio_squared(params, i):
    """Closed form of (theta_{i+1}^{k,l} / theta_i^{k,l})^2."""
    q, n, k, l = params.q, params.n, params.k, params.l
    return (Fraction(q) ** (2 * i - k - l)
            * (q ** (k - i) - 1) * (q ** (l - i) - 1)
            / ((q ** (n - k - i) - 1) * (q ** (n - l - i) - 1)))
