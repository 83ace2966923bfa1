"""Exact complex arithmetic over the field Q(sqrt(2), i).

Every coefficient that shows up in the interferometer states handled by this
package (1/2, i/sqrt(2), -1/(2*sqrt(2)), ...) lives in Q(sqrt(2), i), so all
state algebra can be done without floating point.  An amplitude is stored as
a + b*sqrt(2) + (c + d*sqrt(2))*i with exact rational a, b, c, d; squared
moduli land in the real subfield Q(sqrt(2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


class NoExactRootError(ValueError):
    """Raised when a square root does not exist inside Q(sqrt(2))."""


def rational_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if value < 0:
        return None
    p, q = value.numerator, value.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _fmt_fraction(f: Fraction) -> str:
    return str(f)


@dataclass(frozen=True)
class RootTwo:
    """Element x + y*sqrt(2) of the real quadratic field Q(sqrt(2))."""

    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def of(cls, x: RationalLike, y: RationalLike = 0) -> RootTwo:
        return cls(Fraction(x), Fraction(y))

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __add__(self, other: RootTwo | RationalLike) -> RootTwo:
        other = _as_root_two(other)
        if other is NotImplemented:
            return NotImplemented
        return RootTwo(self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self) -> RootTwo:
        return RootTwo(-self.x, -self.y)

    def __sub__(self, other: RootTwo | RationalLike) -> RootTwo:
        return self + (-other)

    def __rsub__(self, other: RootTwo | RationalLike) -> RootTwo:
        return (-self) + other

    def __mul__(self, other: RootTwo | RationalLike) -> RootTwo:
        other = _as_root_two(other)
        if other is NotImplemented:
            return NotImplemented
        return RootTwo(
            self.x * other.x + 2 * self.y * other.y,
            self.x * other.y + self.y * other.x,
        )

    __rmul__ = __mul__

    def inverse(self) -> RootTwo:
        # 1/(x + y*sqrt2) = (x - y*sqrt2)/(x^2 - 2 y^2); the denominator is
        # nonzero for any nonzero element because sqrt2 is irrational.
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        norm = self.x * self.x - 2 * self.y * self.y
        return RootTwo(self.x / norm, -self.y / norm)

    def __truediv__(self, other: RootTwo | RationalLike) -> RootTwo:
        return self * _as_root_two(other).inverse()

    def __rtruediv__(self, other: RootTwo | RationalLike) -> RootTwo:
        return _as_root_two(other) * self.inverse()

    def sign(self) -> int:
        """Exact sign of the real number x + y*sqrt(2)."""
        if self.x == 0 and self.y == 0:
            return 0
        if self.x >= 0 and self.y >= 0:
            return 1
        if self.x <= 0 and self.y <= 0:
            return -1
        # Mixed signs: compare x^2 with 2 y^2, the larger magnitude wins.
        cmp = self.x * self.x - 2 * self.y * self.y
        bigger_is_x = 1 if cmp > 0 else -1 if cmp < 0 else 0
        return bigger_is_x if self.x > 0 else -bigger_is_x

    def sqrt(self) -> RootTwo:
        """Exact non-negative square root inside Q(sqrt(2)).

        Raises NoExactRootError when no such element exists (for example
        sqrt(1/3)); callers that can tolerate approximation should fall back
        to math.sqrt(float(value)).
        """
        if self.sign() < 0:
            raise NoExactRootError(f"no real square root of negative value {self}")
        if self.y == 0:
            r = rational_sqrt(self.x)
            if r is not None:
                return RootTwo(r, Fraction(0))
            r = rational_sqrt(self.x / 2)
            if r is not None:
                return RootTwo(Fraction(0), r)
            raise NoExactRootError(
                f"sqrt({self}) is not in Q(sqrt2); use float() and math.sqrt for an"
                " approximate value"
            )
        # (u + v*sqrt2)^2 = u^2 + 2 v^2 + 2uv*sqrt2, so u^2 is a root of
        # t^2 - x t + y^2/2 = 0 and must be rational.
        disc = self.x * self.x - 2 * self.y * self.y
        s = rational_sqrt(disc) if disc >= 0 else None
        if s is not None:
            for t in ((self.x + s) / 2, (self.x - s) / 2):
                u = rational_sqrt(t)
                if u is None or u == 0:
                    continue
                v = self.y / (2 * u)
                cand = RootTwo(u, v)
                if cand * cand == self:
                    return cand if cand.sign() >= 0 else -cand
        raise NoExactRootError(
            f"sqrt({self}) is not in Q(sqrt2); use float() and math.sqrt for an"
            " approximate value"
        )

    def __float__(self) -> float:
        return float(self.x) + math.sqrt(2.0) * float(self.y)

    def __str__(self) -> str:
        if self.y == 0:
            return _fmt_fraction(self.x)
        sqrt_part = f"{_fmt_fraction(abs(self.y))}·√2"
        if self.x == 0:
            return sqrt_part if self.y > 0 else f"-{sqrt_part}"
        joiner = " + " if self.y > 0 else " - "
        return f"{_fmt_fraction(self.x)}{joiner}{sqrt_part}"


def _as_root_two(value: RootTwo | RationalLike) -> RootTwo:
    if isinstance(value, RootTwo):
        return value
    if isinstance(value, (int, Fraction)):
        return RootTwo(Fraction(value), Fraction(0))
    return NotImplemented  # type: ignore[return-value]


RootTwo.ZERO = RootTwo(Fraction(0), Fraction(0))  # type: ignore[attr-defined]
RootTwo.ONE = RootTwo(Fraction(1), Fraction(0))  # type: ignore[attr-defined]
RootTwo.SQRT2 = RootTwo(Fraction(0), Fraction(1))  # type: ignore[attr-defined]
RootTwo.INV_SQRT2 = RootTwo(Fraction(0), Fraction(1, 2))  # type: ignore[attr-defined]


@dataclass(frozen=True)
class Amplitude:
    """Exact complex number a + b*sqrt(2) + (c + d*sqrt(2))*i."""

    re: RootTwo
    im: RootTwo

    @classmethod
    def of(
        cls,
        a: RationalLike = 0,
        b: RationalLike = 0,
        c: RationalLike = 0,
        d: RationalLike = 0,
    ) -> Amplitude:
        return cls(RootTwo.of(a, b), RootTwo.of(c, d))

    @classmethod
    def rational(cls, value: RationalLike) -> Amplitude:
        return cls.of(a=value)

    @property
    def a(self) -> Fraction:
        return self.re.x

    @property
    def b(self) -> Fraction:
        return self.re.y

    @property
    def c(self) -> Fraction:
        return self.im.x

    @property
    def d(self) -> Fraction:
        return self.im.y

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __add__(self, other: Amplitude) -> Amplitude:
        return Amplitude(self.re + other.re, self.im + other.im)

    def __neg__(self) -> Amplitude:
        return Amplitude(-self.re, -self.im)

    def __sub__(self, other: Amplitude) -> Amplitude:
        return Amplitude(self.re - other.re, self.im - other.im)

    def __mul__(self, other: Amplitude | RootTwo | RationalLike) -> Amplitude:
        if isinstance(other, (int, Fraction, RootTwo)):
            scale = _as_root_two(other)
            return Amplitude(self.re * scale, self.im * scale)
        if not isinstance(other, Amplitude):
            return NotImplemented
        return Amplitude(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self) -> Amplitude:
        return Amplitude(self.re, -self.im)

    def abs2(self) -> RootTwo:
        """Squared modulus, an exact element of Q(sqrt(2))."""
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other: Amplitude) -> Amplitude:
        if other.is_zero():
            raise ZeroDivisionError("division by zero amplitude")
        num = self * other.conj()
        denom = other.abs2()
        return Amplitude(num.re / denom, num.im / denom)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if not self.re.is_zero():
            parts.append(str(self.re))
        if not self.im.is_zero():
            if self.im == RootTwo.ONE:
                imag = "i"
            elif self.im == -RootTwo.ONE:
                imag = "-i"
            else:
                imag = f"{self.im}·i" if self.im.y == 0 or self.im.x == 0 else f"({self.im})·i"
            parts.append(imag)
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return out


Amplitude.ZERO = Amplitude.of()  # type: ignore[attr-defined]
Amplitude.ONE = Amplitude.of(a=1)  # type: ignore[attr-defined]
Amplitude.I = Amplitude.of(c=1)  # type: ignore[attr-defined]
Amplitude.INV_SQRT2 = Amplitude.of(b=Fraction(1, 2))  # type: ignore[attr-defined]
Amplitude.I_INV_SQRT2 = Amplitude.of(d=Fraction(1, 2))  # type: ignore[attr-defined]
