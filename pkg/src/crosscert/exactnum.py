"""Exact scalars: rationals, Gaussian coefficients and numbers a + b*sqrt(d).

Everything here is integer/Fraction based; no floating point is used to
decide a sign or an equality.
"""
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import InvalidParameterError, RadicandMismatchError

__all__ = [
    "QuadraticNumber",
    "gauss",
    "qn_arith",
    "qn_sign",
    "parse_rational",
    "rational_str",
]


def gauss(a, b, q):
    """Gaussian binomial coefficient [a, b]_q as an exact integer.

    Zero when a < 0, b < 0 or a < b.
    """
    if q < 2:
        raise InvalidParameterError(f"q must be >= 2, got {q}")
    if a < 0 or b < 0 or a < b:
        return 0
    return _gauss(a, min(b, a - b), q)


@lru_cache(maxsize=None)
def _gauss(a, b, q):
    num = 1
    den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (b - i) - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def parse_rational(text):
    """Parse "p/r", "p" or a Fraction/int into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameterError(f"not a rational number: {text!r}") from exc


def rational_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _sign(x):
    return (x > 0) - (x < 0)


class QuadraticNumber:
    """Exact value a + b*sqrt(d) with rational a, b and integer d >= 1.

    The radicand is kept as given (not reduced to squarefree form).  Mixing
    with ints and Fractions is allowed; mixing two different radicands is not.
    """

    __slots__ = ("d", "a", "b")

    def __init__(self, d, a=0, b=0):
        d = int(d)
        if d < 1:
            raise InvalidParameterError(f"radicand must be >= 1, got {d}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    @classmethod
    def sqrt(cls, d):
        return cls(d, 0, 1)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise RadicandMismatchError(
                    f"radicands differ: {self.d} vs {other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(self.d, other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.d, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(self.d, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.d, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(self.d, self.a * other, self.b * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(
            self.d,
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + o.a * self.b,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.d, self.a, -self.b)

    def norm(self):
        """a^2 - d*b^2, the field norm to Q."""
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadraticNumber(self.d, self.a / other, self.b / other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero")
        n = o.norm()
        if n == 0:
            # d is a perfect square and o collapses to a rational
            return self / o.to_rational()
        return (self * o.conjugate()) / n

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def is_zero(self):
        return qn_sign(self) == 0

    def sign(self):
        return qn_sign(self)

    def to_rational(self):
        """Exact rational value; only defined when the sqrt part vanishes."""
        if self.b == 0:
            return self.a
        r = isqrt(self.d)
        if r * r == self.d:
            return self.a + self.b * r
        raise ValueError(f"{self!r} is irrational")

    def square(self):
        return self * self

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber) and other.d != self.d:
            return NotImplemented
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return qn_sign(self - o) == 0

    def __hash__(self):
        r = isqrt(self.d)
        if r * r == self.d or self.b == 0:
            return hash(self.a + self.b * r if self.b else self.a)
        return hash((self.d, self.a, self.b))

    def __lt__(self, other):
        return qn_sign(self - other) < 0

    def __le__(self, other):
        return qn_sign(self - other) <= 0

    def __gt__(self, other):
        return qn_sign(self - other) > 0

    def __ge__(self, other):
        return qn_sign(self - other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __repr__(self):
        return f"QuadraticNumber(d={self.d}, a={self.a}, b={self.b})"

    def to_json(self):
        return {"d": str(self.d), "a": rational_str(self.a), "b": rational_str(self.b)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["d"]), parse_rational(obj["a"]), parse_rational(obj["b"]))


def qn_sign(x):
    """Exact sign of a + b*sqrt(d) in {-1, 0, 1}."""
    sa = _sign(x.a)
    sb = _sign(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 d
    lhs = x.a * x.a
    rhs = x.b * x.b * x.d
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def qn_arith(x, y, op):
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")
