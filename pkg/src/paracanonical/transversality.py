"""Derivative complexes of cup models, k-transversality and incidence dimensions.

Every "generic" statement here is a statement about a seeded sample of
directions; reports carry the seed and sample size so they can be replayed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import ZERO, ExactMatrix, GaussianRational, coerce_vector, format_scalar, in_span, kernel_basis
from .core.linalg import DimensionError
from .cup import CupModule

DimensionMismatch = DimensionError


class ShapeMismatch(ValueError):
    """Two maps expected to share a shape do not."""


@dataclass(frozen=True)
class DerivativeComplex:
    """``0 -> M^0 -> M^1 -> ... -> M^n -> 0`` with differential ``v cup``.

    ``maps[k + 1]`` is the map out of M^k, so ``maps[0]`` is the zero map
    into M^0 and ``maps[n + 1]`` the zero map out of M^n.
    """

    model: CupModule
    direction: tuple[GaussianRational, ...]
    maps: tuple[ExactMatrix, ...]
    cohomology_dims: tuple[int, ...]

    def out_of(self, k: int) -> ExactMatrix:
        return self.maps[k + 1]

    def into(self, k: int) -> ExactMatrix:
        return self.maps[k]


def derivative_complex(m: CupModule, v: Sequence) -> DerivativeComplex:
    vec = coerce_vector(v)
    if len(vec) != m.v_dim:
        raise DimensionMismatch(f"direction has length {len(vec)}, model has q = {m.v_dim}")
    maps = tuple(m.cup_matrix(vec, k) for k in range(-1, m.n + 1))
    for k in range(m.n):
        composite = maps[k + 2] @ maps[k + 1]
        if not composite.is_zero():
            raise ArithmeticError(f"(v cup)^2 is nonzero out of degree {k}; the model is invalid")
    ranks = [a.rank() for a in maps]
    dims = tuple(m.dim(k) - ranks[k + 1] - ranks[k] for k in range(m.n + 1))
    return DerivativeComplex(m, vec, maps, dims)


def _cohomology_at(m: CupModule, v: Sequence, k: int) -> int:
    return m.dim(k) - m.cup_matrix(v, k).rank() - m.cup_matrix(v, k - 1).rank()


def is_k_transversal(m: CupModule, v: Sequence, k: int) -> bool:
    if not 0 <= k <= m.n:
        raise ValueError(f"k must lie in [0, {m.n}]")
    vec = coerce_vector(v)
    if len(vec) != m.v_dim:
        raise DimensionMismatch("direction does not match the model")
    return _cohomology_at(m, vec, k) == 0


def tangency_excluded(m: CupModule, v: Sequence, k: int) -> bool:
    """Same test as :func:`is_k_transversal`, named for the support-locus reading."""
    return is_k_transversal(m, v, k)


def tangency_label(m: CupModule, v: Sequence, k: int) -> str:
    if tangency_excluded(m, v, k):
        return f"v not tangent to V_{k} at 0"
    return f"v possibly tangent to V_{k} at 0"


def sample_directions(q: int, count: int, seed: int, bound: int = 3) -> list[tuple[GaussianRational, ...]]:
    """Nonzero Gaussian-integer vectors with parts in [-bound, bound]."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        vec = tuple(GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(q))
        if any(vec):
            out.append(vec)
    return out


@dataclass(frozen=True)
class SampleCertificate:
    """Outcome of a sampled check; truthy when no sample failed."""

    certified: bool
    sample_count: int
    seed: int
    failures: tuple[tuple[int, int], ...] = ()  # (sample index, degree k)

    def __bool__(self) -> bool:
        return self.certified

    @property
    def wording(self) -> str:
        if self.certified:
            return f"certified on sample ({self.sample_count} directions, seed {self.seed})"
        return f"fails on {len(self.failures)} sampled (direction, degree) pairs"


def isolated_point_test(m: CupModule, sample_count: int = 64, seed: int = 0) -> SampleCertificate:
    """Every sampled v != 0 is k-transversal for all k >= 1.

    A model with no positive degrees has nothing to certify, and one whose
    action is identically zero fails as soon as some M^k (k >= 1) is nonzero.
    """
    failures = []
    for idx, v in enumerate(sample_directions(m.v_dim, sample_count, seed)):
        for k in range(1, m.n + 1):
            if _cohomology_at(m, v, k):
                failures.append((idx, k))
    return SampleCertificate(not failures, sample_count, seed, tuple(failures))


@dataclass(frozen=True)
class IncidenceReport:
    q: int
    p_g: int
    generic_kernel_dim: int | None
    dim_I_main: int | None
    transversal_sample_fraction: Fraction
    sigma_codim_estimate: int | None
    sample_count: int
    seed: int
    per_k: tuple[dict, ...] = field(default=())

    @property
    def has_incidence(self) -> bool:
        return self.dim_I_main is not None

    def to_dict(self) -> dict:
        frac = self.transversal_sample_fraction
        return {
            "schema_version": 1,
            "q": self.q,
            "p_g": self.p_g,
            "t": self.generic_kernel_dim,
            "dim_I_main": self.dim_I_main if self.dim_I_main is not None else "no incidence",
            "transversal_fraction": _ratio(frac.numerator, frac.denominator),
            "sigma_codim_estimate": self.sigma_codim_estimate,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "per_k": list(self.per_k),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _ratio(a: int, b: int) -> str:
    f = Fraction(a, b) if b else Fraction(0)
    return f"{f.numerator}/{f.denominator}"


def _random_combination(basis: Sequence[Sequence], rng: random.Random, size: int) -> tuple[GaussianRational, ...]:
    acc = [ZERO] * size
    for b in basis:
        c = GaussianRational(rng.randint(1, 5), rng.randint(-2, 2))
        acc = [a + c * x for a, x in zip(acc, b)]
    return tuple(acc)


def incidence_report(m: CupModule, sample_count: int = 64, seed: int = 0) -> IncidenceReport:
    """Dimension of the main incidence component over sampled directions.

    For a direction v that is transversal in every positive degree, the
    fiber over [v] is P(ker(v cup on M^0)); its generic dimension plus
    q - 1 gives the dimension of the open stratum.  ``t`` is the generic
    dimension of ker(s cup: V -> M^1) for s in such a fiber, and the
    codimension estimate of the image in P(M^0) is
    (p_g - 1) - (dim_I_main - (t - 1)).
    """
    q, p_g = m.v_dim, m.dim(0)
    directions = sample_directions(q, sample_count, seed)
    per_k_counts = [0] * (m.n + 1)
    per_k_max = [0] * (m.n + 1)
    transversal = []
    for v in directions:
        dims = [_cohomology_at(m, v, k) for k in range(m.n + 1)]
        for k, d in enumerate(dims):
            if d == 0:
                per_k_counts[k] += 1
            per_k_max[k] = max(per_k_max[k], d)
        if all(d == 0 for d in dims[1:]):
            transversal.append(v)
    fraction = Fraction(len(transversal), sample_count) if sample_count else Fraction(0)
    per_k = tuple(
        {
            "k": k,
            "transversal_fraction": _ratio(per_k_counts[k], sample_count),
            "max_cohomology_dim": per_k_max[k],
        }
        for k in range(m.n + 1)
    )
    kernel_dims = [p_g - m.cup_matrix(v, 0).rank() for v in transversal]
    generic_kernel = min(kernel_dims) if kernel_dims else 0
    if generic_kernel == 0:
        return IncidenceReport(q, p_g, None, None, fraction, None, sample_count, seed, per_k)
    dim_i = (q - 1) + (generic_kernel - 1)

    rng = random.Random(seed + 1)
    witness = next(v for v, d in zip(transversal, kernel_dims) if d == generic_kernel)
    fiber = kernel_basis(m.cup_matrix(witness, 0))
    t_values = []
    for _ in range(min(8, max(sample_count, 1))):
        s = _random_combination(fiber, rng, p_g)
        t_values.append(q - m.cup_with_section(s).rank())
    t = min(t_values)
    codim = (p_g - 1) - (dim_i - (t - 1))
    return IncidenceReport(q, p_g, t, dim_i, fraction, codim, sample_count, seed, per_k)


def wedge_degenerate(forms: Sequence[Sequence]) -> bool:
    """``w_0 ^ ... ^ w_k == 0``, i.e. the one-forms are linearly dependent."""
    vecs = [coerce_vector(f) for f in forms]
    if not vecs:
        raise ValueError("need at least one form")
    q = len(vecs[0])
    if any(len(v) != q for v in vecs):
        raise DimensionMismatch("forms live in spaces of different dimension")
    if len(vecs) > q:
        raise ValueError(f"{len(vecs)} forms exceed the dimension {q}")
    return ExactMatrix(vecs, q).rank() < len(vecs)


def tangency_check(f: ExactMatrix, g: ExactMatrix) -> bool:
    """``g(ker f)`` is contained in ``im f``."""
    if f.shape != g.shape:
        raise ShapeMismatch(f"f has shape {f.shape} but g has shape {g.shape}")
    return all(in_span(f, g.apply(x)) for x in kernel_basis(f))


def format_direction(v: Sequence) -> list[str]:
    return [format_scalar(x) for x in coerce_vector(v)]


__all__ = [
    "DerivativeComplex",
    "DimensionMismatch",
    "IncidenceReport",
    "SampleCertificate",
    "ShapeMismatch",
    "derivative_complex",
    "format_direction",
    "incidence_report",
    "is_k_transversal",
    "isolated_point_test",
    "sample_directions",
    "tangency_check",
    "tangency_excluded",
    "tangency_label",
    "wedge_degenerate",
]
