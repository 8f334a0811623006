"""Hodge-number arithmetic for the canonical system of an irregular variety.

Everything here is integer bookkeeping on h^{0,0}, ..., h^{0,n}.  Geometric
hypotheses (no fibration of Albanese general type, 0 isolated in the
cohomology support loci) cannot be checked from numbers; they enter as
flags and are echoed into every verdict.
"""

from __future__ import annotations

import enum
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import product
from math import comb

from .core import TruncatedSeries, series_expand_power


class BadRange(ValueError):
    """Arguments outside the range where a formula applies."""


class HypothesisViolation(ValueError):
    """Input data does not match the construction being evaluated."""


class ParityMismatch(AssertionError):
    """s_n and C(h(X), n) have different parities."""


class Verdict(str, enum.Enum):
    MAIN = "main"
    EXORBITANT = "exorbitant"
    OUT_OF_HYPOTHESES = "out_of_hypotheses"


class Cor15Class(str, enum.Enum):
    CURVE = "curve"
    SURFACE_ODD_Q = "surface_odd_q"
    THREEFOLD_PLUS_BOUNDARY = "threefold_plus_boundary"
    REDUCIBLE_CERTIFICATE = "reducible_certificate"


@dataclass(frozen=True)
class HodgeVector:
    n: int
    h: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))
        if self.n < 0 or len(self.h) != self.n + 1:
            raise ValueError(f"need n + 1 = {self.n + 1} Hodge numbers, got {len(self.h)}")
        if self.h[0] != 1:
            raise ValueError("h^{0,0} must be 1")
        if any(x < 0 for x in self.h):
            raise ValueError("Hodge numbers are nonnegative")

    @classmethod
    def of(cls, *h: int) -> HodgeVector:
        return cls(len(h) - 1, tuple(h))

    @property
    def q(self) -> int:
        return self.h[1] if self.n >= 1 else 0

    @property
    def p_g(self) -> int:
        return self.h[self.n]


def chi_and_gap(hv: HodgeVector) -> tuple[int, int]:
    """chi(K_X) = (-1)^n chi(O_X) and gap = p_g - (chi + q - 1)."""
    chi_o = sum((-1) ** j * x for j, x in enumerate(hv.h))
    chi = (-1) ** hv.n * chi_o
    return chi, hv.p_g - (chi + hv.q - 1)


def h_of_X(hv: HodgeVector) -> int:
    if hv.n < 1:
        raise BadRange("h(X) needs n >= 1")
    return sum(hv.h[hv.n - 1 - 2 * j] for j in range((hv.n - 1) // 2 + 1))


@lru_cache(maxsize=4096)
def _factor(j: int, e: int, order: int) -> TruncatedSeries:
    return series_expand_power(j, e, order)


def s_n_coefficient(hv: HodgeVector) -> int:
    """Coefficient of t^n in prod_{j=1..n} (1 + j t)^((-1)^(j+1) h^{0,n-j})."""
    n = hv.n
    if n < 1:
        raise BadRange("s_n needs n >= 1")
    acc = TruncatedSeries.one(n)
    for j in range(1, n + 1):
        e = hv.h[n - j] if j % 2 else -hv.h[n - j]
        if e:
            acc = acc * _factor(j, e, n)
    return int(acc[n])


def binomial_is_odd(a: int, b: int) -> bool:
    """C(a, b) mod 2 by Kummer: odd iff adding b and a - b has no binary carry."""
    if b < 0 or a < 0:
        raise BadRange("binomial parity needs nonnegative arguments")
    return b & ~a == 0


@dataclass(frozen=True)
class ParityFragment:
    s_n: int
    h_of_X: int
    binomial_odd: bool
    parity_ok: bool
    verdict: Verdict
    reason: str


def parity_criterion(hv: HodgeVector, isolated_zero: bool = True, no_agt_fibration: bool = True) -> ParityFragment:
    """s_n, the parity of C(h(X), n), and the resulting verdict on |K_X|.

    Surfaces follow the odd/even q rule.  In dimension n != 2 the parity rule
    applies when q = n + 1 under both flags; for n >= 3 and q > n + 1 the
    flags force p_g > chi + q - 1, so |K_X| lies outside the main component.
    """
    n, q = hv.n, hv.q
    s_n = s_n_coefficient(hv)
    h = h_of_X(hv)
    odd = binomial_is_odd(h, n)
    if (s_n % 2 == 1) != odd:
        raise ParityMismatch(f"s_n = {s_n} but C({h}, {n}) is {'odd' if odd else 'even'} for {hv.h}")
    if not no_agt_fibration:
        return ParityFragment(s_n, h, odd, True, Verdict.OUT_OF_HYPOTHESES, "fibration hypothesis not granted")
    if n == 2:
        if q < 2:
            return ParityFragment(s_n, h, odd, True, Verdict.OUT_OF_HYPOTHESES, "surface rule needs q >= 2")
        v = Verdict.MAIN if q % 2 else Verdict.EXORBITANT
        return ParityFragment(s_n, h, odd, True, v, "surface: q odd gives main, q even exorbitant")
    if not isolated_zero:
        return ParityFragment(s_n, h, odd, True, Verdict.OUT_OF_HYPOTHESES, "isolated-zero hypothesis not granted")
    if q == n + 1:
        v = Verdict.MAIN if odd else Verdict.EXORBITANT
        return ParityFragment(s_n, h, odd, True, v, f"q = n + 1 and C(h(X), n) is {'odd' if odd else 'even'}")
    if n >= 3 and q > n + 1:
        return ParityFragment(s_n, h, odd, True, Verdict.EXORBITANT, "q > n + 1 forces p_g > chi + q - 1")
    return ParityFragment(s_n, h, odd, True, Verdict.OUT_OF_HYPOTHESES, "needs q >= n + 1")


@dataclass(frozen=True)
class LedgerVerdict:
    chi: int
    gap: int
    ineq_i: bool
    eq_case: bool
    q_equals_n_plus_1: bool
    h_of_X: int
    s_n: int
    parity_ok: bool
    exorbitant_verdict: Verdict
    reason: str
    flags: dict = field(default_factory=dict)
    chi_at_least_q_minus_n: bool = True

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["exorbitant_verdict"] = self.exorbitant_verdict.value
        return doc


def ledger_verdict(hv: HodgeVector, no_agt_fibration: bool = False, isolated_zero: bool = False) -> LedgerVerdict:
    chi, gap = chi_and_gap(hv)
    frag = parity_criterion(hv, isolated_zero=isolated_zero, no_agt_fibration=no_agt_fibration)
    return LedgerVerdict(
        chi=chi,
        gap=gap,
        ineq_i=gap >= 0,
        eq_case=gap == 0,
        q_equals_n_plus_1=hv.q == hv.n + 1,
        h_of_X=frag.h_of_X,
        s_n=frag.s_n,
        parity_ok=frag.parity_ok,
        exorbitant_verdict=frag.verdict,
        reason=frag.reason,
        flags={"no_agt_fibration": no_agt_fibration, "isolated_zero": isolated_zero},
        chi_at_least_q_minus_n=chi >= hv.q - hv.n,
    )


@dataclass(frozen=True)
class DimensionBounds:
    bound_a: int | None
    bound_b: int | None
    gap_lower_bound: int


def dimension_count_bounds(n: int, q: int, t: int) -> DimensionBounds:
    """Lower bounds for p_g - (chi + q - t) from the tangent-space count.

    Exactly one of the two branches applies; ``None`` marks the other.
    """
    if n < 3 or q < n + 1 or t < 2:
        raise BadRange("need n >= 3, q >= n + 1 and t >= 2")
    if q >= n + t - 1:
        return DimensionBounds((n - 2) * (q - n) + 2 * t - 3, None, (n - 2) * (q - n))
    return DimensionBounds(None, n * (q - n) + 1, (n - 1) * (q - n) - n + 2)


@dataclass(frozen=True)
class QCap:
    holds: bool
    lhs: int
    rhs: int


def q_cap_check(n: int, q: int) -> QCap:
    """Compare q - 2 with (n - 1)(q - n); the first can dominate only for q <= n + 1."""
    if n < 3:
        raise BadRange("needs n >= 3")
    return QCap(q <= n + 1, q - 2, (n - 1) * (q - n))


@dataclass(frozen=True)
class Invariants:
    chi: int
    q: int
    p_g: int
    gap: int
    dim: int | None = None


def double_cover_invariants(chiY: int, qY: int, pgY: int, h0_KY_plus_H: int, h1_minus_H: int) -> Invariants:
    """Double cover branched on a smooth divisor in |2H|.

    chi(K_Y + H) is taken equal to h^0(K_Y + H), as Kodaira vanishing gives
    for H very ample.
    """
    if min(chiY, qY, pgY, h0_KY_plus_H, h1_minus_H) < 0:
        raise BadRange("inputs must be nonnegative")
    chi = chiY + h0_KY_plus_H
    q = qY + h1_minus_H
    pg = pgY + h0_KY_plus_H
    return Invariants(chi, q, pg, pg - (chi + q - 1))


def product_with_genus2_curve(n: int, pgY: int = 1, chiY: int = 0, qY: int | None = None) -> Invariants:
    """Z = Y x C with g(C) = 2, via Kunneth: p_g and chi(K) multiply, q adds."""
    if qY is None:
        qY = n
    if n < 3 or (pgY, chiY, qY) != (1, 0, n):
        raise HypothesisViolation(f"need n >= 3 and Y with p_g = 1, chi = 0, q = n; got {(n, pgY, chiY, qY)}")
    g = 2
    pg = pgY * g
    chi = chiY * (g - 1)
    q = qY + g
    return Invariants(chi, q, pg, pg - (chi + q - 1), dim=n + 1)


def complete_intersection_invariants(n: int, pgY: int) -> tuple[int, int]:
    """(q, p_g - (chi + q - 1)) for a complete intersection in D x Y, D ample in A^(n+1).

    h^{0,n} of X is not determined by the construction; the gap does not
    depend on it, so C(q, n) stands in.
    """
    if n < 3 or pgY < 0:
        raise BadRange("needs n >= 3 and pgY >= 0")
    q = n + 1
    h = [comb(q, i) for i in range(n - 1)] + [comb(q, n - 1) + pgY, comb(q, n)]
    _, gap = chi_and_gap(HodgeVector(n, tuple(h)))
    if gap != pgY:
        raise ArithmeticError(f"gap {gap} differs from p_g(Y) = {pgY}")
    return q, gap


def classify_cor15(n: int, q: int, gap: int) -> Cor15Class:
    if n < 1:
        raise BadRange("n >= 1")
    if n == 1:
        return Cor15Class.CURVE
    if n == 2 and q % 2:
        return Cor15Class.SURFACE_ODD_Q
    if n >= 3 and q == n + 1 and gap == 0:
        return Cor15Class.THREEFOLD_PLUS_BOUNDARY
    return Cor15Class.REDUCIBLE_CERTIFICATE


@dataclass(frozen=True)
class SweepReport:
    max_n: int
    max_h: int
    checked: int
    counterexamples: tuple[tuple[int, ...], ...]
    seconds: float

    def to_dict(self) -> dict:
        return {
            "max_n": self.max_n,
            "max_h": self.max_h,
            "checked": self.checked,
            "counterexamples": [list(c) for c in self.counterexamples],
            "seconds": round(self.seconds, 3),
        }


def sweep_parity(max_n: int, max_h: int) -> SweepReport:
    """Check s_n = C(h(X), n) mod 2 on every Hodge vector with n <= max_n, h^{0,j} <= max_h."""
    if not (1 <= max_n <= 6 and 0 <= max_h <= 8):
        raise BadRange("sweep is limited to max_n <= 6 and max_h <= 8")
    start = time.perf_counter()
    checked = 0
    bad = []
    for n in range(1, max_n + 1):
        for tail in product(range(max_h + 1), repeat=n):
            hv = HodgeVector(n, (1,) + tail)
            checked += 1
            if (s_n_coefficient(hv) % 2 == 1) != binomial_is_odd(h_of_X(hv), n):
                bad.append(hv.h)
    return SweepReport(max_n, max_h, checked, tuple(bad), time.perf_counter() - start)
