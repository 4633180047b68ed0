"""Exact rationals and truncated power series over them.

Rationals are plain :class:`fractions.Fraction` values; this module adds
the constructors and the ``"p/q"`` text form used by every output format,
plus a small immutable :class:`PowerSeries` type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable

__all__ = [
    "Fraction",
    "rat_make",
    "as_rational",
    "parse_rational",
    "format_rational",
    "PowerSeries",
    "NonInvertibleSeriesError",
    "series_mul",
    "series_div",
    "series_sqrt",
]


def rat_make(num: int, den: int = 1) -> Fraction:
    """Return ``num/den`` reduced, with a positive denominator."""
    if den == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(num, den)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: a float has already lost the exact value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or a bare integer such as ``"-3"``."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    return rat_make(p, q)


def format_rational(r: Fraction) -> str:
    """Lowest-terms ``"p/q"`` form; integers keep the ``/1``."""
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


class NonInvertibleSeriesError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients of x**0 .. x**order; nothing beyond ``order`` is known.

    Binary operations truncate to the smaller order of their operands.
    """

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"expected {self.order + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order: int) -> "PowerSeries":
        """Build a series, zero-padding or truncating ``coeffs`` to ``order``."""
        cs = [as_rational(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        return cls(order, tuple(cs))

    @classmethod
    def constant(cls, c, order: int) -> "PowerSeries":
        return cls.from_coeffs([c], order)

    @classmethod
    def x(cls, order: int) -> "PowerSeries":
        return cls.from_coeffs([0, 1], order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(order, self.coeffs[: order + 1])

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.constant(as_rational(other), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        k = min(self.order, other.order)
        return PowerSeries(k, tuple(a + b for a, b in zip(self.coeffs[: k + 1], other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        c = as_rational(other)
        return PowerSeries(self.order, tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return series_div(self, other)
        c = as_rational(other)
        return PowerSeries(self.order, tuple(a / c for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at ``min(a.order, b.order)``."""
    k = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for n in range(k + 1):
        out.append(sum((ac[i] * bc[n - i] for i in range(n + 1)), Fraction(0)))
    return PowerSeries(k, tuple(out))


def series_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Quotient ``q`` with ``q*b == a`` through ``min(a.order, b.order)``."""
    b0 = b.coeffs[0]
    if b0 == 0:
        raise NonInvertibleSeriesError("non-invertible series")
    k = min(a.order, b.order)
    q: list[Fraction] = []
    for n in range(k + 1):
        acc = a.coeffs[n] - sum((q[i] * b.coeffs[n - i] for i in range(n)), Fraction(0))
        q.append(acc / b0)
    return PowerSeries(k, tuple(q))


def series_sqrt(a: PowerSeries) -> PowerSeries:
    """Square root of a series with constant term 1.

    Uses s0 = 1, s_n = (a_n - sum_{k=1}^{n-1} s_k s_{n-k}) / 2.
    """
    if a.coeffs[0] != 1:
        raise ValueError("sqrt requires unit constant term")
    s: list[Fraction] = [Fraction(1)]
    for n in range(1, a.order + 1):
        acc = a.coeffs[n] - sum((s[k] * s[n - k] for k in range(1, n)), Fraction(0))
        s.append(acc / 2)
    return PowerSeries(a.order, tuple(s))

