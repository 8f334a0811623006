"""Skew families s -> c_s, their Pfaffian hypersurface and its singular locus."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .core import ZERO, ExactMatrix, GaussianRational, NotSkew, SparsePoly, coerce_vector, format_scalar, pfaffian
from .core.pfaffian import linear_combination, pfaffian_expansion
from .cup import CupModule, serre_pairing

ALL_OF_K = "all of |K|"


class OddQ(ValueError):
    """The operation needs an even-dimensional V."""


class SizeMismatch(ValueError):
    """Pencil matrices have different sizes."""


class IdenticallyZero(ValueError):
    """The Pfaffian of the pencil vanishes identically."""


class DegenerateFamily(ValueError):
    """The Pfaffian polynomial of the family is zero."""


class CriterionMismatch(ArithmeticError):
    """Gradient and rank criteria disagree; the family violates the smoothness hypotheses."""


class FamilyFormatError(ValueError):
    """A family document does not match the schema."""


class PointType(enum.Enum):
    SMOOTH = "smooth"
    SINGULAR = "singular"
    NOT_ON_SIGMA = "not_on_sigma"


@dataclass(frozen=True)
class SkewFamily:
    q: int
    basis_forms: tuple[ExactMatrix, ...]
    source: str = "explicit"

    def __post_init__(self) -> None:
        for idx, a in enumerate(self.basis_forms):
            if a.shape != (self.q, self.q):
                raise SizeMismatch(f"generator {idx} has shape {a.shape}, expected {(self.q, self.q)}")
            if not a.is_skew():
                raise NotSkew(f"generator {idx} is not skew-symmetric")

    @classmethod
    def from_model(cls, m: CupModule) -> SkewFamily:
        """Generators c_{s_i} for the standard basis s_i of M^0."""
        d0 = m.dim(0)
        forms = tuple(serre_pairing(m, [1 if j == i else 0 for j in range(d0)]) for i in range(d0))
        return cls(m.v_dim, forms, source=f"serre_pairing({m.label})")

    @property
    def p_g(self) -> int:
        return len(self.basis_forms)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.p_g))

    def form(self, s: Sequence) -> ExactMatrix:
        coeffs = coerce_vector(s)
        if len(coeffs) != self.p_g:
            raise ValueError(f"point has {len(coeffs)} coordinates, family has {self.p_g} generators")
        acc = ExactMatrix.zeros(self.q, self.q)
        for c, a in zip(coeffs, self.basis_forms):
            if c:
                acc = acc + a.scale(c)
        return acc

    @cached_property
    def pf_poly(self) -> SparsePoly:
        if self.q % 2 or not self.basis_forms:
            return SparsePoly(self.variables)
        return pfaffian(linear_combination(self.basis_forms, self.variables))

    def to_dict(self) -> dict:
        return {"schema_version": 1, "q": self.q, "generators": [a.to_strings() for a in self.basis_forms]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> SkewFamily:
        if not isinstance(doc, dict) or not isinstance(doc.get("q"), int) or not isinstance(doc.get("generators"), list):
            raise FamilyFormatError("family needs integer 'q' and list 'generators'")
        try:
            forms = tuple(ExactMatrix(g, doc["q"]) for g in doc["generators"])
        except (TypeError, ValueError) as exc:
            raise FamilyFormatError(f"bad generator data: {exc}") from exc
        return cls(doc["q"], forms)


@dataclass(frozen=True)
class SigmaDescription:
    pf_poly: SparsePoly
    degree: int | str | None
    rank_strata: tuple[tuple[tuple[GaussianRational, ...], int], ...]
    variables: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "pf_poly": self.pf_poly.to_json(),
            "pf_poly_text": self.pf_poly.to_string(),
            "degree": self.degree,
            "variables": list(self.variables),
            "coordinates": "coefficients in the standard basis of M^0",
            "rank_strata": [{"s": [format_scalar(x) for x in s], "rank": r} for s, r in self.rank_strata],
        }


def sample_points(p_g: int, count: int, seed: int) -> list[tuple[GaussianRational, ...]]:
    rng = random.Random(seed)
    return [tuple(GaussianRational(rng.randint(-4, 4), rng.randint(-2, 2)) for _ in range(p_g)) for _ in range(count)]


def sigma_polynomial(f: SkewFamily, sample_count: int = 8, seed: int = 0) -> SigmaDescription:
    strata = tuple((s, rank_of_cup_s(f, s)) for s in sample_points(f.p_g, sample_count, seed))
    if f.q % 2:
        return SigmaDescription(SparsePoly(f.variables), ALL_OF_K, strata, f.variables)
    pf = f.pf_poly
    return SigmaDescription(pf, pf.total_degree(), strata, f.variables)


def rank_of_cup_s(f: SkewFamily, s: Sequence) -> int:
    return f.form(s).rank()


def smooth_point_test(f: SkewFamily, s: Sequence) -> PointType:
    """Classify [s] against the Pfaffian hypersurface and cross-check the rank criterion."""
    if f.q % 2:
        raise OddQ("the Pfaffian hypersurface is defined only for even q")
    pf = f.pf_poly
    if pf.is_zero():
        raise DegenerateFamily("Pfaffian polynomial of the family is identically zero")
    point = coerce_vector(s)
    if pf.evaluate(point):
        return PointType.NOT_ON_SIGMA
    gradient_nonzero = any(g.evaluate(point) for g in pf.gradient())
    corank_two = rank_of_cup_s(f, point) == f.q - 2
    if gradient_nonzero != corank_two:
        raise CriterionMismatch(
            f"gradient {'nonzero' if gradient_nonzero else 'zero'} but rank(c_s) = {rank_of_cup_s(f, point)}"
        )
    return PointType.SMOOTH if gradient_nonzero else PointType.SINGULAR


def _check_pencil(a: ExactMatrix, b: ExactMatrix) -> None:
    if a.shape != b.shape or a.rows != a.cols:
        raise SizeMismatch(f"pencil needs two square matrices of one size, got {a.shape} and {b.shape}")
    for name, x in (("a", a), ("b", b)):
        if not x.is_skew():
            raise NotSkew(f"{name} is not skew-symmetric")


def pencil_pfaffian(a: ExactMatrix, b: ExactMatrix) -> SparsePoly:
    """Pf(lam*a + mu*b) as a binary form in (lam, mu)."""
    _check_pencil(a, b)
    grid = linear_combination([a, b], ("lam", "mu"))
    variables = ("lam", "mu")
    return pfaffian_expansion(grid, SparsePoly(variables), SparsePoly.constant(1, variables))


def pencil_coefficient(a: ExactMatrix, b: ExactMatrix) -> GaussianRational:
    """Coefficient of lam^(q-2) mu^2 in det(lam*a + mu*b), through det = Pf^2."""
    _check_pencil(a, b)
    q = a.rows
    if q % 2 or q < 2:
        return ZERO
    det_form = pencil_pfaffian(a, b) ** 2
    return det_form.coefficient((q - 2, 2))


def pencil_root_multiplicity(a: ExactMatrix, b: ExactMatrix) -> int:
    """Order of vanishing of Pf(lam*a + mu*b) at mu = 0."""
    pf = pencil_pfaffian(a, b)
    if pf.is_zero():
        raise IdenticallyZero("Pf(lam*a + mu*b) vanishes identically")
    return min(e[1] for e in pf.terms)
