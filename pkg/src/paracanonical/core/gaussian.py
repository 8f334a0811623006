"""Exact scalars in Q(i) and their string codec."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union["GaussianRational", Fraction, int]

_TERM = r"[+-]?\d+(?:/\d+)?"
_RATIONAL_RE = re.compile(rf"^{_TERM}$")
_IMAG_RE = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?i$")
_SPLIT_RE = re.compile(rf"^({_TERM})([+-].*i)$")


class GaussianRational:
    """An element ``re + im*i`` of Q(i), stored as two reduced fractions."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re: Scalar | str = 0, im: int | Fraction = 0) -> None:
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("cannot combine a GaussianRational with an extra imaginary part")
            self.re, self.im = re.re, re.im
        elif isinstance(re, str):
            parsed = parse_scalar(re)
            self.re, self.im = parsed.re, parsed.im + Fraction(im)
        else:
            self.re = Fraction(re)
            self.im = Fraction(im)
        self._hash = None

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> GaussianRational:
        # Both parts must already be Fractions.
        g = object.__new__(cls)
        g.re, g.im, g._hash = re, im, None
        return g

    @classmethod
    def coerce(cls, value: Scalar | str) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int) and -2 <= value <= 2:
            return _SMALL[value]
        return cls(value)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> GaussianRational:
        return _make(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __neg__(self) -> GaussianRational:
        return _make(-self.re, -self.im)

    def __pos__(self) -> GaussianRational:
        return self

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            if not (other.re or other.im):
                return self
            if not (self.re or self.im):
                return other
            return _make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            if not (other.re or other.im):
                return self
            return _make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not d:
                if c == 1:
                    return self
                if c == -1:
                    return _make(-a, -b)
                if not b:
                    return _make(a * c, _FZERO)
            elif not b and a == 1:
                return other
            return _make(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> GaussianRational:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.reciprocal()
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussianRational(other) * self.reciprocal()
        return NotImplemented

    def __pow__(self, exponent: int) -> GaussianRational:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = _SMALL[1]
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.re) if not self.im else hash((self.re, self.im))
        return self._hash

    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


_make = GaussianRational._make
_FZERO = Fraction(0)
_SMALL = {k: GaussianRational(k) for k in range(-2, 3)}
ZERO = _SMALL[0]
ONE = _SMALL[1]
I = GaussianRational(0, 1)


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: Scalar) -> str:
    """Render a scalar in the ``a/b+c/di`` wire format."""
    g = GaussianRational.coerce(value)
    if not g.im:
        return _format_fraction(g.re)
    mag = abs(g.im)
    imag = "i" if mag == 1 else f"{_format_fraction(mag)}i"
    if not g.re:
        return imag if g.im > 0 else "-" + imag
    sign = "+" if g.im > 0 else "-"
    return f"{_format_fraction(g.re)}{sign}{imag}"


def _parse_imag(text: str) -> Fraction:
    m = _IMAG_RE.match(text)
    if not m:
        raise ValueError(f"malformed imaginary part {text!r}")
    sign, mag = m.groups()
    value = Fraction(mag) if mag else Fraction(1)
    return -value if sign == "-" else value


def parse_scalar(text: str | int) -> GaussianRational:
    """Parse ``"3"``, ``"-1/2"``, ``"2i"``, ``"1/2-3/4i"`` and the like."""
    if isinstance(text, int) and not isinstance(text, bool):
        return GaussianRational.coerce(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar string")
    if _RATIONAL_RE.match(s):
        return GaussianRational(Fraction(s))
    if not s.endswith("i"):
        raise ValueError(f"malformed scalar {text!r}")
    m = _SPLIT_RE.match(s)
    if m:
        return GaussianRational(Fraction(m.group(1)), _parse_imag(m.group(2)))
    return GaussianRational(0, _parse_imag(s))


def coerce_vector(values) -> tuple[GaussianRational, ...]:
    return tuple(GaussianRational.coerce(parse_scalar(v) if isinstance(v, str) else v) for v in values)
