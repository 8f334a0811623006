"""Order-by-order lifting of a section along a straight-line deformation.

The model keeps only the top-order tail data of the construction:

    S_n  --r_n-->  Q_n  --d_n-->  H1_{n-1}  --s-->  H1_n

with S_n standing for sections of nD, Q_n for their top-order tails along D,
and d_n the connecting map.  A lift is sigma in Q_1 with d_1 sigma = v and
tau_n in S_n (n >= 2) such that, writing rho_n = r_n(tau_n), the t^n
coefficient of exp(sigma t + sum rho_r t^r) vanishes in Q_n for every
n >= 2.  Products of tails use the multiplication maps Q_a x Q_b -> Q_{a+b}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .core import ZERO, ExactMatrix, GaussianRational, NoSolution, coerce_vector, format_scalar, solve_linear

Vector = tuple[GaussianRational, ...]
NORMALIZATION = "exp"


class ModelFormatError(ValueError):
    """Model data has inconsistent shapes or does not parse."""


class ModelAxiomError(ArithmeticError):
    """A model axiom or a runtime consistency check failed."""

    def __init__(self, which: str, witness=None) -> None:
        super().__init__(f"{which}: {witness}")
        self.which = which
        self.witness = witness


class ObstructionError(ArithmeticError):
    def __init__(self, order: int, detail: str = "") -> None:
        super().__init__(f"obstruction at order {order}" + (f": {detail}" if detail else ""))
        self.order = order
        self.detail = detail


class NoFirstOrderDeformation(ArithmeticError):
    """v is not in the image of d_1, equivalently s cup v != 0."""


@dataclass(frozen=True)
class AxiomViolation:
    which: str
    witness: object


@dataclass(frozen=True)
class Mismatch:
    order: int
    detail: str = ""


def _zero(n: int) -> Vector:
    return (ZERO,) * n


def _is_zero(vec: Sequence) -> bool:
    return not any(vec)


def _add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _scale(c, a: Sequence) -> Vector:
    c = GaussianRational.coerce(c)
    return tuple(c * x for x in a)


def _unit(i: int, n: int) -> Vector:
    return tuple(GaussianRational.coerce(1 if j == i else 0) for j in range(n))


@dataclass(frozen=True)
class SectionAlgebraModel:
    """Finite section-algebra data; maps are keyed by the degree n they start from."""

    N: int
    S: tuple[int, ...]  # S[n - 1] = dim S_n
    Q: tuple[int, ...]  # Q[n - 1] = dim Q_n
    H1: tuple[int, ...]  # H1[n] = dim H1_n, n = 0..N
    H2: int
    r: Mapping[int, ExactMatrix]
    d: Mapping[int, ExactMatrix]
    mult_s: Mapping[int, ExactMatrix]
    cup_v_S: ExactMatrix
    cup_v_H: ExactMatrix
    mul: Mapping[tuple[int, int], ExactMatrix]
    base: Vector
    direction: Vector
    name: str = field(default="model", compare=False)

    def __post_init__(self) -> None:
        N = self.N
        if N < 1 or len(self.S) != N or len(self.Q) != N or len(self.H1) != N + 1:
            raise ModelFormatError("dimension lists must have lengths N, N and N + 1")
        expect = {}
        for n in range(1, N + 1):
            expect[("r", n)] = (self.dim_Q(n), self.dim_S(n))
            expect[("d", n)] = (self.H1[n - 1], self.dim_Q(n))
            expect[("mult_s", n)] = (self.H1[n], self.H1[n - 1])
        for (kind, n), shape in expect.items():
            table = getattr(self, kind)
            if n not in table:
                raise ModelFormatError(f"missing map {kind}_{n}")
            if table[n].shape != shape:
                raise ModelFormatError(f"{kind}_{n} has shape {table[n].shape}, expected {shape}")
        h1_1 = self.H1[1]
        if self.cup_v_S.shape != (h1_1, self.dim_S(1)):
            raise ModelFormatError(f"cup_v_S has shape {self.cup_v_S.shape}, expected {(h1_1, self.dim_S(1))}")
        if self.cup_v_H.shape != (self.H2, h1_1):
            raise ModelFormatError(f"cup_v_H has shape {self.cup_v_H.shape}, expected {(self.H2, h1_1)}")
        for a in range(1, N + 1):
            for b in range(a, N + 1 - a):
                shape = (self.dim_Q(a + b), self.dim_Q(a) * self.dim_Q(b))
                if (a, b) not in self.mul:
                    raise ModelFormatError(f"missing product mul_{a},{b}")
                if self.mul[(a, b)].shape != shape:
                    raise ModelFormatError(f"mul_{a},{b} has shape {self.mul[(a, b)].shape}, expected {shape}")
        if len(self.base) != self.dim_S(1) or len(self.direction) != self.H1[0]:
            raise ModelFormatError("base must lie in S_1 and direction in H1_0")
        sparse = {}
        for key, t in self.mul.items():
            db = self.dim_Q(key[1])
            sparse[key] = tuple(
                (row, *divmod(col, db), x) for row, entries in enumerate(t.entries) for col, x in enumerate(entries) if x
            )
        object.__setattr__(self, "_sparse_mul", sparse)

    def dim_S(self, n: int) -> int:
        return self.S[n - 1]

    def dim_Q(self, n: int) -> int:
        return self.Q[n - 1]

    def multiply(self, x: Sequence, a: int, y: Sequence, b: int) -> Vector:
        """Product of x in Q_a and y in Q_b, landing in Q_{a+b}."""
        if a > b:
            x, a, y, b = y, b, x, a
        out = [ZERO] * self.dim_Q(a + b)
        for row, i, j, c in self._sparse_mul[(a, b)]:
            xi, yj = x[i], y[j]
            if xi and yj:
                out[row] = out[row] + c * xi * yj
        return tuple(out)

    # serialization

    def to_dict(self) -> dict:
        def mats(table):
            return {str(k): v.to_strings() for k, v in sorted(table.items())}

        return {
            "schema_version": 1,
            "name": self.name,
            "N": self.N,
            "dims": {"S": list(self.S), "Q": list(self.Q), "H1": list(self.H1), "H2": self.H2},
            "r": mats(self.r),
            "d": mats(self.d),
            "mult_s": mats(self.mult_s),
            "cup_v_S": self.cup_v_S.to_strings(),
            "cup_v_H": self.cup_v_H.to_strings(),
            "mul": {f"{a},{b}": t.to_strings() for (a, b), t in sorted(self.mul.items())},
            "base": [format_scalar(x) for x in self.base],
            "direction": [format_scalar(x) for x in self.direction],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> SectionAlgebraModel:
        try:
            N = int(doc["N"])
            dims = doc["dims"]
            S, Q, H1, H2 = tuple(dims["S"]), tuple(dims["Q"]), tuple(dims["H1"]), int(dims["H2"])

            def qdim(n):
                return Q[n - 1]

            r = {n: ExactMatrix(doc["r"][str(n)], S[n - 1]) for n in range(1, N + 1)}
            d = {n: ExactMatrix(doc["d"][str(n)], qdim(n)) for n in range(1, N + 1)}
            mult_s = {n: ExactMatrix(doc["mult_s"][str(n)], H1[n - 1]) for n in range(1, N + 1)}
            mul = {}
            for key, t in doc["mul"].items():
                a, b = (int(x) for x in key.split(","))
                mul[(a, b)] = ExactMatrix(t, qdim(a) * qdim(b))
            return cls(
                N,
                S,
                Q,
                H1,
                H2,
                r,
                d,
                mult_s,
                ExactMatrix(doc["cup_v_S"], S[0]),
                ExactMatrix(doc["cup_v_H"], H1[1] if N >= 1 else 0),
                mul,
                coerce_vector(doc["base"]),
                coerce_vector(doc["direction"]),
                name=doc.get("name", "model"),
            )
        except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
            if isinstance(exc, ModelFormatError):
                raise
            raise ModelFormatError(f"bad section-algebra model: {exc!r}") from exc

    @classmethod
    def from_json(cls, text: str) -> SectionAlgebraModel:
        return cls.from_dict(json.loads(text))


def _exact_at(incoming: ExactMatrix, outgoing: ExactMatrix) -> bool:
    """im(incoming) == ker(outgoing) for a composable pair."""
    if outgoing.cols and incoming.cols and not (outgoing @ incoming).is_zero():
        return False
    return incoming.rank() + outgoing.rank() == outgoing.cols


def validate_model(m: SectionAlgebraModel, require_transversality: bool = True) -> AxiomViolation | None:
    """``None`` when every axiom holds, otherwise the first violated axiom."""
    if not _is_zero(m.r[1].apply(m.base)):
        return AxiomViolation("base section restricts to zero", {"r_1(s)": m.r[1].apply(m.base)})
    for n in range(1, m.N + 1):
        if not _exact_at(m.r[n], m.d[n]):
            return AxiomViolation(f"exactness at Q_{n}", {"order": n})
        if not _exact_at(m.d[n], m.mult_s[n]):
            return AxiomViolation(f"exactness at H1_{n - 1}", {"order": n})
    if m.cup_v_S.apply(m.base) != m.mult_s[1].apply(m.direction):
        return AxiomViolation("s cup v computed two ways", {"cup_v_S(s)": m.cup_v_S.apply(m.base)})
    if require_transversality and not _exact_at(m.cup_v_S, m.cup_v_H):
        return AxiomViolation("1-transversality of v", {"rank cup_v_S": m.cup_v_S.rank(), "rank cup_v_H": m.cup_v_H.rank()})
    for a in range(1, m.N // 2 + 1):
        da = m.dim_Q(a)
        for i in range(da):
            for j in range(i + 1, da):
                if m.multiply(_unit(i, da), a, _unit(j, da), a) != m.multiply(_unit(j, da), a, _unit(i, da), a):
                    return AxiomViolation("commutativity of products", {"degrees": (a, a), "basis": (i, j)})
    for a in range(1, m.N + 1):
        for b in range(1, m.N + 1 - a):
            for c in range(1, m.N + 1 - a - b):
                for i in range(m.dim_Q(a)):
                    for j in range(m.dim_Q(b)):
                        for k in range(m.dim_Q(c)):
                            x, y, z = _unit(i, m.dim_Q(a)), _unit(j, m.dim_Q(b)), _unit(k, m.dim_Q(c))
                            left = m.multiply(m.multiply(x, a, y, b), a + b, z, c)
                            right = m.multiply(x, a, m.multiply(y, b, z, c), b + c)
                            if left != right:
                                return AxiomViolation("associativity of products", {"degrees": (a, b, c), "basis": (i, j, k)})
    for a in range(1, m.N + 1):
        for b in range(a, m.N + 1 - a):
            for i in range(m.dim_S(a)):
                x = m.r[a].column(i)
                for j in range(m.dim_S(b)):
                    prod = m.multiply(x, a, m.r[b].column(j), b)
                    if not _is_zero(m.d[a + b].apply(prod)):
                        return AxiomViolation("products of global tails are global", {"degrees": (a, b), "basis": (i, j)})
    if m.N >= 2:
        sigma0 = solve_linear(m.d[1], m.direction)
        if not isinstance(sigma0, NoSolution):
            for i in range(m.dim_S(1)):
                lhs = m.d[2].apply(m.multiply(sigma0, 1, m.r[1].column(i), 1))
                if lhs != m.cup_v_S.column(i):
                    return AxiomViolation("d_2(sigma r_1 xi) equals xi cup v", {"xi": i})
    return None


def solve_sigma(m: SectionAlgebraModel) -> Vector | NoFirstOrderDeformation:
    """Canonical sigma in Q_1 with d_1 sigma = v, or the typed failure."""
    if not _is_zero(m.mult_s[1].apply(m.direction)):
        return NoFirstOrderDeformation("s cup v is nonzero")
    sigma = solve_linear(m.d[1], m.direction)
    if isinstance(sigma, NoSolution):
        raise ModelAxiomError("exactness at H1_0", "v is killed by s but is not in the image of d_1")
    return sigma


def exp_coefficients(m: SectionAlgebraModel, tails: Mapping[int, Sequence], upto: int) -> dict[int, Vector]:
    """Grade-n parts E_n of exp(sum_r tails[r] t^r), n = 1..upto, by the ODE recurrence.

    Missing tails count as zero.  Uses n E_n = sum_k k F_k E_{n-k} with E_0 = 1.
    """
    F = {r: tuple(tails[r]) if r in tails else _zero(m.dim_Q(r)) for r in range(1, upto + 1)}
    E: dict[int, Vector] = {}
    for n in range(1, upto + 1):
        acc = _scale(n, F[n])
        for k in range(1, n):
            if _is_zero(F[k]) or _is_zero(E[n - k]):
                continue
            acc = _add(acc, _scale(k, m.multiply(F[k], k, E[n - k], n - k)))
        E[n] = _scale(Fraction(1, n), acc)
    return E


def exp_coefficients_by_powers(m: SectionAlgebraModel, tails: Mapping[int, Sequence], upto: int) -> dict[int, Vector]:
    """Same quantity as :func:`exp_coefficients`, summed as sum_k F^k / k!."""
    F = {r: tuple(tails[r]) if r in tails else _zero(m.dim_Q(r)) for r in range(1, upto + 1)}
    power = dict(F)  # grade -> part of F^k
    E = {n: F[n] for n in range(1, upto + 1)}
    for k in range(2, upto + 1):
        nxt = {}
        for n in range(k, upto + 1):
            acc = _zero(m.dim_Q(n))
            for a in range(1, n - k + 2):
                if n - a in power and not _is_zero(F[a]) and not _is_zero(power[n - a]):
                    acc = _add(acc, m.multiply(F[a], a, power[n - a], n - a))
            nxt[n] = acc
        power = nxt
        for n, part in power.items():
            E[n] = _add(E[n], _scale(Fraction(1, factorial(k)), part))
    return E


@dataclass(frozen=True)
class SecondOrder:
    sigma: Vector
    tau: Vector
    xi: Vector
    obstruction: Vector
    cup_v_obstruction: Vector
    corrected_obstruction: Vector


def second_order_step(m: SectionAlgebraModel, sigma: Sequence) -> SecondOrder:
    sigma = coerce_vector(sigma)
    if m.d[1].apply(sigma) != m.direction:
        raise ValueError("sigma does not satisfy d_1 sigma = v")
    ob2 = m.d[2].apply(m.multiply(sigma, 1, sigma, 1))
    cup_ob2 = m.cup_v_H.apply(ob2)
    if not _is_zero(cup_ob2):
        raise ModelAxiomError("v cup d_2(sigma^2) vanishes", {"value": cup_ob2})
    xi = solve_linear(m.cup_v_S, _scale(Fraction(1, 2), ob2))
    if isinstance(xi, NoSolution):
        raise ObstructionError(2, "d_2(sigma^2) is not of the form 2 (xi cup v)")
    corrected = _add(sigma, _scale(-1, m.r[1].apply(xi)))
    square = m.multiply(corrected, 1, corrected, 1)
    corrected_ob = m.d[2].apply(square)
    if not _is_zero(corrected_ob):
        raise ModelAxiomError("d_2(sigma^2) vanishes after correction", {"value": corrected_ob})
    tau = solve_linear(m.r[2], _scale(Fraction(-1, 2), square))
    if isinstance(tau, NoSolution):
        raise ModelAxiomError("exactness at Q_2", "-(sigma^2)/2 is in ker d_2 but not in im r_2")
    return SecondOrder(corrected, tau, xi, ob2, cup_ob2, corrected_ob)


@dataclass(frozen=True)
class HigherOrder:
    order: int
    tau: Vector
    q_n: Vector
    obstruction: Vector


def higher_order_step(m: SectionAlgebraModel, sigma: Sequence, taus: Mapping[int, Sequence], n: int) -> HigherOrder:
    """Solve order n >= 3 given the corrected sigma and tau_2..tau_{n-1}."""
    if n < 3 or n > m.N:
        raise ValueError(f"order must lie in [3, {m.N}]")
    tails = {1: coerce_vector(sigma)}
    for r in range(2, n):
        tails[r] = m.r[r].apply(taus[r])
    q_n = exp_coefficients(m, tails, n)[n]
    ob = m.d[n].apply(q_n)
    if not _is_zero(ob):
        raise ObstructionError(n, f"d_{n}(q_{n}) = {[format_scalar(x) for x in ob]}")
    tau = solve_linear(m.r[n], _scale(-1, q_n))
    if isinstance(tau, NoSolution):
        raise ModelAxiomError(f"exactness at Q_{n}", "q_n is in ker d_n but not in im r_n")
    return HigherOrder(n, tau, q_n, ob)


@dataclass(frozen=True)
class LiftResult:
    sigma_initial: Vector
    sigma: Vector
    xi: Vector
    taus: dict[int, Vector]
    order_achieved: int
    trace: tuple[dict, ...]
    normalization: str = NORMALIZATION

    def tail(self, m: SectionAlgebraModel, n: int) -> Vector:
        """rho_n = r_n(tau_n), or sigma for n = 1."""
        return self.sigma if n == 1 else m.r[n].apply(self.taus[n])

    def to_dict(self) -> dict:
        def fmt(vec):
            return [format_scalar(x) for x in vec]

        return {
            "schema_version": 1,
            "normalization": self.normalization,
            "order_achieved": self.order_achieved,
            "sigma_initial": fmt(self.sigma_initial),
            "sigma": fmt(self.sigma),
            "xi": fmt(self.xi),
            "taus": {str(n): fmt(t) for n, t in sorted(self.taus.items())},
            "trace": [{k: (fmt(v) if isinstance(v, tuple) else v) for k, v in entry.items()} for entry in self.trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def lift_full(m: SectionAlgebraModel, N: int, sigma: Sequence | None = None) -> LiftResult:
    """Lift to order N.  ``sigma`` overrides the canonical first-order solution."""
    if N < 1 or N > m.N:
        raise ValueError(f"truncation order must lie in [1, {m.N}]")
    violation = validate_model(m, require_transversality=False)
    if violation is not None:
        raise ModelAxiomError(violation.which, violation.witness)
    if sigma is None:
        sigma = solve_sigma(m)
        if isinstance(sigma, NoFirstOrderDeformation):
            raise sigma
    else:
        sigma = coerce_vector(sigma)
        if not _is_zero(m.mult_s[1].apply(m.direction)):
            raise NoFirstOrderDeformation("s cup v is nonzero")
        if m.d[1].apply(sigma) != m.direction:
            raise ValueError("supplied sigma does not satisfy d_1 sigma = v")
    trace: list[dict] = [{"order": 1, "sigma": sigma, "d_1_sigma": m.d[1].apply(sigma)}]
    xi = _zero(m.dim_S(1))
    corrected = sigma
    taus: dict[int, Vector] = {}
    if N >= 2:
        step = second_order_step(m, sigma)
        corrected, xi = step.sigma, step.xi
        taus[2] = step.tau
        trace.append(
            {
                "order": 2,
                "obstruction": step.obstruction,
                "cup_v_obstruction": step.cup_v_obstruction,
                "xi": step.xi,
                "corrected_obstruction": step.corrected_obstruction,
                "tau": step.tau,
            }
        )
    for n in range(3, N + 1):
        step = higher_order_step(m, corrected, taus, n)
        taus[n] = step.tau
        trace.append({"order": n, "q_n": step.q_n, "obstruction": step.obstruction, "tau": step.tau})
    return LiftResult(sigma, corrected, xi, taus, N, tuple(trace))


def verify_lift(m: SectionAlgebraModel, result: LiftResult) -> Mismatch | None:
    """Recompute every exponential coefficient from scratch; ``None`` means the lift checks out."""
    sigma = result.sigma
    if m.d[1].apply(sigma) != m.direction:
        return Mismatch(1, "d_1 sigma != v")
    shift = _add(sigma, _scale(-1, result.sigma_initial))
    if isinstance(solve_linear(m.r[1], shift), NoSolution):
        return Mismatch(1, "sigma differs from the initial solution by a non-global tail")
    tails = {1: sigma}
    for n in range(2, result.order_achieved + 1):
        if n not in result.taus or len(result.taus[n]) != m.dim_S(n):
            return Mismatch(n, "missing tau")
        tails[n] = m.r[n].apply(result.taus[n])
    E = exp_coefficients_by_powers(m, tails, result.order_achieved)
    for n in range(2, result.order_achieved + 1):
        if not _is_zero(E[n]):
            return Mismatch(n, f"t^{n} coefficient is not global")
    return None
