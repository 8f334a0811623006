"""Truncated power series c_0 + c_1 t + ... + c_N t^N over a commutative ring."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class TruncatedSeries:
    """Power series modulo ``t^(order+1)``.

    Coefficients may be ints, Fractions, GaussianRationals or SparsePolys;
    anything that supports ``+``, ``-`` and ``*`` with ints.
    """

    __slots__ = ("order", "coefficients")

    def __init__(self, coefficients: Sequence, order: int) -> None:
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        coeffs = list(coefficients[: order + 1])
        coeffs += [0] * (order + 1 - len(coeffs))
        self.order = order
        self.coefficients = tuple(coeffs)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls([1], order)

    @classmethod
    def linear(cls, slope, order: int) -> TruncatedSeries:
        """The series ``1 + slope*t``."""
        return cls([1, slope], order)

    def __getitem__(self, k: int):
        return self.coefficients[k]

    def __len__(self) -> int:
        return self.order + 1

    def _check(self, other: TruncatedSeries) -> None:
        if other.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.coefficients, other.coefficients)], self.order)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self.coefficients, other.coefficients)], self.order)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-a for a in self.coefficients], self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([a * other for a in self.coefficients], self.order)
        self._check(other)
        a, b = self.coefficients, other.coefficients
        out = []
        for n in range(self.order + 1):
            acc = 0
            for k in range(n + 1):
                if a[k] and b[n - k]:
                    acc = acc + a[k] * b[n - k]
            out.append(acc)
        return TruncatedSeries(out, self.order)

    __rmul__ = __mul__

    def inverse(self) -> TruncatedSeries:
        """Multiplicative inverse; the constant term must be a unit."""
        c = self.coefficients
        c0 = c[0]
        if c0 == 1:
            inv0 = 1
        elif c0 == -1:
            inv0 = -1
        elif isinstance(c0, int):
            inv0 = Fraction(1, c0)
        else:
            inv0 = 1 / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = 0
            for k in range(1, n + 1):
                if c[k] and out[n - k]:
                    acc = acc + c[k] * out[n - k]
            out.append(-(acc * inv0) if acc else 0)
        return TruncatedSeries(out, self.order)

    def __pow__(self, e: int) -> TruncatedSeries:
        if not isinstance(e, int):
            return NotImplemented
        base = self.inverse() if e < 0 else self
        e = abs(e)
        result = TruncatedSeries.one(self.order)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.order, self.coefficients))

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self.coefficients)!r}, order={self.order})"


def geometric_series(ratio, order: int) -> TruncatedSeries:
    """``1/(1 - ratio*t)`` expanded to ``t^order``."""
    coeffs = [1]
    for _ in range(order):
        coeffs.append(coeffs[-1] * ratio)
    return TruncatedSeries(coeffs, order)


def series_expand_power(base_linear_coeff: int, exponent: int, order: int) -> TruncatedSeries:
    """``(1 + j t)^e`` modulo ``t^(order+1)`` with exact integer coefficients."""
    j = base_linear_coeff
    base = TruncatedSeries.linear(j, order) if exponent >= 0 else geometric_series(-j, order)
    return base ** abs(exponent)
