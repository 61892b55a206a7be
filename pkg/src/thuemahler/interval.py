"""Closed float intervals with outward rounding.

Every operation widens its result by one ulp on each side, which covers the
rounding of a single IEEE operation. ``pow`` (libm, not correctly rounded)
is widened by a few ulps more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_down = lambda x: math.nextafter(x, -math.inf)  # noqa: E731
_up = lambda x: math.nextafter(x, math.inf)  # noqa: E731


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @classmethod
    def point(cls, x) -> "Interval":
        x = float(x)
        return cls(x, x)

    @classmethod
    def of(cls, x) -> "Interval":
        """Enclosure of an exact number (int or Fraction)."""
        f = float(x)
        if f == x:
            return cls(f, f)
        return cls(_down(f), _up(f))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def __add__(self, o):
        o = _lift(o)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-_lift(o))

    def __rsub__(self, o):
        return _lift(o) - self

    def __mul__(self, o):
        o = _lift(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def sqr(self) -> "Interval":
        a = self.abs()
        return Interval(_down(a.lo * a.lo), _up(a.hi * a.hi))

    def rpow(self, e: float) -> "Interval":
        """x^e for x > 0 (any real e)."""
        if self.lo <= 0:
            raise ValueError("rpow needs a positive interval")
        a, b = math.pow(self.lo, e), math.pow(self.hi, e)
        lo, hi = (a, b) if e >= 0 else (b, a)
        return Interval(lo * (1 - 4e-16), hi * (1 + 4e-16))

    def recip(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return Interval(_down(1.0 / self.hi), _up(1.0 / self.lo))

    def __truediv__(self, o):
        return self * _lift(o).recip()

    def hull(self, o) -> "Interval":
        o = _lift(o)
        return Interval(min(self.lo, o.lo), max(self.hi, o.hi))


def _lift(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.of(x)


def horner(coeffs_low, x: Interval) -> Interval:
    """Enclosure of sum c_i x^i over the interval x (coefficients exact)."""
    acc = Interval.of(coeffs_low[-1])
    for c in reversed(coeffs_low[:-1]):
        acc = acc * x + Interval.of(c)
    return acc
