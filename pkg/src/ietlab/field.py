"""Exact arithmetic in a real quadratic field ``Q(sqrt(N))``.

Every value is ``a + b*sqrt(N)`` with rational ``a, b`` and a fixed
square-free ``N``.  Signs, and hence all comparisons, are decided with
rational arithmetic only.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Tuple, Union

__all__ = ["ExactNumber", "sign_of", "is_squarefree", "DEFAULT_SQRT"]

DEFAULT_SQRT = 5

Scalar = Union[int, Fraction]


def sign_of(u, v, n: int) -> int:
    """Sign of ``u + v*sqrt(n)`` for rationals (or integers) ``u, v``."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return (v > 0) - (v < 0)
    if u > 0 and v > 0:
        return 1
    if u < 0 and v < 0:
        return -1
    # opposite signs: compare u^2 with n v^2
    diff = u * u - n * v * v
    s = (diff > 0) - (diff < 0)
    return s if u > 0 else -s


def is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class ExactNumber:
    """``a + b*sqrt(N)`` with exact rational parts.

    Values with ``b == 0`` are compatible with any ``N``, so plain rationals
    mix freely with field elements.

    Examples
    --------
    >>> phi = ExactNumber(Fraction(-1, 2), Fraction(1, 2), 5)   # (sqrt5 - 1)/2
    >>> 0 < phi < 1
    True
    >>> phi * phi + phi == 1
    True
    """

    __slots__ = ("a", "b", "N")

    def __init__(self, a: Scalar = 0, b: Scalar = 0, N: int = DEFAULT_SQRT):
        self.a = _frac(a)
        self.b = _frac(b)
        self.N = int(N)
        if self.N < 2:
            raise ValueError("N must be a square-free integer >= 2")

    # construction ------------------------------------------------------
    @classmethod
    def sqrt(cls, N: int = DEFAULT_SQRT) -> "ExactNumber":
        return cls(0, 1, N)

    @classmethod
    def coerce(cls, x, N: int = DEFAULT_SQRT) -> "ExactNumber":
        if isinstance(x, ExactNumber):
            return x
        return cls(_frac(x), 0, N)

    def _pair(self, other) -> Tuple["ExactNumber", int]:
        if not isinstance(other, ExactNumber):
            other = ExactNumber(_frac(other), 0, self.N)
        if other.N == self.N or other.b == 0:
            return other, self.N
        if self.b == 0:
            return other, other.N
        raise ValueError(f"mixing sqrt({self.N}) and sqrt({other.N})")

    # predicates ---------------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        return sign_of(self.a, self.b, self.N)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o, n = self._pair(other)
        except TypeError:
            return NotImplemented
        return ExactNumber(self.a + o.a, self.b + o.b, n)

    __radd__ = __add__

    def __neg__(self):
        return ExactNumber(-self.a, -self.b, self.N)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o, n = self._pair(other)
        except TypeError:
            return NotImplemented
        return ExactNumber(self.a - o.a, self.b - o.b, n)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            o, n = self._pair(other)
        except TypeError:
            return NotImplemented
        return ExactNumber(
            self.a * o.a + n * self.b * o.b, self.a * o.b + self.b * o.a, n
        )

    __rmul__ = __mul__

    def conjugate(self) -> "ExactNumber":
        return ExactNumber(self.a, -self.b, self.N)

    def norm(self) -> Fraction:
        return self.a * self.a - self.N * self.b * self.b

    def __truediv__(self, other):
        try:
            o, n = self._pair(other)
        except TypeError:
            return NotImplemented
        if o.b == 0:
            if o.a == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt N)")
            return ExactNumber(self.a / o.a, self.b / o.a, n)
        nrm = o.a * o.a - n * o.b * o.b  # nonzero since N is not a square
        num = ExactNumber(self.a, self.b, n) * ExactNumber(o.a, -o.b, n)
        return ExactNumber(num.a / nrm, num.b / nrm, n)

    def __rtruediv__(self, other):
        return ExactNumber.coerce(other, self.N).__truediv__(self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = ExactNumber(1, 0, self.N)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison ---------------------------------------------------------
    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        if not isinstance(other, (ExactNumber, int, Fraction)):
            return NotImplemented
        try:
            o, _ = self._pair(other)
        except ValueError:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.N))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    # conversion ---------------------------------------------------------
    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.N)

    def to_decimal(self, digits: int = 30) -> str:
        """Display-only decimal rendering."""
        import mpmath

        with mpmath.workdps(digits + 5):
            v = mpmath.mpf(self.a.numerator) / self.a.denominator + (
                mpmath.mpf(self.b.numerator) / self.b.denominator
            ) * mpmath.sqrt(self.N)
            return mpmath.nstr(v, digits)

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, data, N: int = DEFAULT_SQRT) -> "ExactNumber":
        if isinstance(data, (int, str)):
            return cls(_frac(data), 0, N)
        return cls(Fraction(data["a"]), Fraction(data.get("b", "0")), N)

    def __repr__(self):
        if self.b == 0:
            return f"ExactNumber({self.a})"
        return f"ExactNumber({self.a} + {self.b}*sqrt({self.N}))"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.N})"
