"""Sparse multivariate polynomials with Q(i) coefficients."""

from __future__ import annotations

from numbers import Rational
from typing import Mapping, Sequence

from .gaussian import ONE, ZERO, GaussianRational, format_scalar

Exponent = tuple[int, ...]


class SparsePoly:
    """Polynomial over Q(i) in a fixed, named set of variables.

    Terms map exponent tuples to nonzero coefficients.  Instances are
    immutable; arithmetic between polynomials requires equal variable lists.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None) -> None:
        self.variables = tuple(variables)
        clean: dict[Exponent, GaussianRational] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(self.variables):
                raise ValueError(f"exponent {exps} does not match variables {self.variables}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = GaussianRational.coerce(c)
            if c:
                clean[exps] = clean.get(exps, ZERO) + c
        self._terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponent, GaussianRational]) -> SparsePoly:
        p = object.__new__(cls)
        p.variables, p._terms, p._hash = variables, terms, None
        return p

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> SparsePoly:
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> SparsePoly:
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if sum(exps) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {exps: ONE})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> tuple[SparsePoly, ...]:
        return tuple(cls.variable(v, variables) for v in variables)

    @property
    def terms(self) -> dict[Exponent, GaussianRational]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def total_degree(self) -> int | None:
        """Largest total degree among the terms; ``None`` for the zero polynomial."""
        if not self._terms:
            return None
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self._terms.get(tuple(exps), ZERO)

    def _lift(self, other) -> SparsePoly:
        if isinstance(other, SparsePoly):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Rational, GaussianRational)):
            return SparsePoly.constant(other, self.variables)
        raise TypeError(f"cannot combine SparsePoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return SparsePoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> SparsePoly:
        return SparsePoly._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, GaussianRational)):
            c = GaussianRational.coerce(other)
            if not c:
                return SparsePoly._raw(self.variables, {})
            return SparsePoly._raw(self.variables, {e: v * c for e, v in self._terms.items()})
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        terms: dict[Exponent, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, ZERO) + c1 * c2
        return SparsePoly._raw(self.variables, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SparsePoly:
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = SparsePoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Rational, GaussianRational)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, point: Sequence) -> GaussianRational:
        if len(point) != len(self.variables):
            raise ValueError("point dimension does not match the variables")
        pt = [GaussianRational.coerce(x) for x in point]
        acc = ZERO
        for e, c in self._terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term = term * x**k
            acc = acc + term
        return acc

    def derivative(self, var: int | str) -> SparsePoly:
        idx = self.variables.index(var) if isinstance(var, str) else var
        terms = {}
        for e, c in self._terms.items():
            k = e[idx]
            if k:
                e2 = e[:idx] + (k - 1,) + e[idx + 1 :]
                terms[e2] = c * k
        return SparsePoly._raw(self.variables, terms)

    def gradient(self) -> tuple[SparsePoly, ...]:
        return tuple(self.derivative(i) for i in range(len(self.variables)))

    def sorted_terms(self) -> list[tuple[Exponent, GaussianRational]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_string(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            coef = format_scalar(c)
            if not c.is_real() and c.re:
                coef = f"({coef})"
            if not mono:
                parts.append(coef)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[list]:
        return [[list(e), format_scalar(c)] for e, c in self.sorted_terms()]

    def __repr__(self) -> str:
        return f"SparsePoly({self.to_string()!r}, variables={self.variables})"

    __str__ = to_string

