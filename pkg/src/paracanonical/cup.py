"""Finite graded modules M^0..M^n with a degree-one cup action of V = Q(i)^q.

The action in degree k is a tensor ``V (x) M^k -> M^{k+1}`` stored as a
``d_{k+1} x (q*d_k)`` matrix whose column ``i*d_k + j`` is the image of
``e_i (x) m_j``.  Exterior-power bases are the k-subsets of ``range(q)`` in
lexicographic order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Sequence

from .core import ONE, ZERO, ExactMatrix, GaussianRational, coerce_vector, format_scalar
from .core.linalg import DimensionError

KINDS = ("koszul", "ample_divisor_canonical", "explicit_tensors")


class WrongGrading(ValueError):
    """The model does not have the surface grading n = 2."""


class NoTrace(ValueError):
    """The model carries no top-degree trace functional."""


class ModelFormatError(ValueError):
    """A model document does not match the descriptor schema."""


def exterior_basis(q: int, k: int) -> list[tuple[int, ...]]:
    if k < 0 or k > q:
        return []
    return list(combinations(range(q), k))


def wedge_tensor(q: int, k: int) -> ExactMatrix:
    """Left multiplication ``V (x) Lambda^k V -> Lambda^{k+1} V``."""
    src = exterior_basis(q, k)
    dst = exterior_basis(q, k + 1)
    index = {s: r for r, s in enumerate(dst)}
    d_k = len(src)
    grid = [[ZERO] * (q * d_k) for _ in dst]
    for i in range(q):
        for j, subset in enumerate(src):
            if i in subset:
                continue
            sign = -ONE if sum(1 for a in subset if a < i) % 2 else ONE
            grid[index[tuple(sorted(subset + (i,)))]][i * d_k + j] = sign
    return ExactMatrix(grid, q * d_k)


@dataclass(frozen=True)
class CupModule:
    v_dim: int
    graded_dims: tuple[int, ...]
    action: tuple[ExactMatrix, ...]
    top_trace: tuple[GaussianRational, ...] | None = None
    label: str = field(default="explicit", compare=False)
    descriptor: "ModelDescriptor | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        q, dims = self.v_dim, self.graded_dims
        if q < 0 or any(d < 0 for d in dims):
            raise DimensionError("dimensions must be nonnegative")
        if len(self.action) != max(len(dims) - 1, 0):
            raise DimensionError(f"expected {len(dims) - 1} action tensors, got {len(self.action)}")
        for k, a in enumerate(self.action):
            if a.shape != (dims[k + 1], q * dims[k]):
                raise DimensionError(
                    f"action tensor {k} has shape {a.shape}, expected {(dims[k + 1], q * dims[k])}"
                )
        if self.top_trace is not None and len(self.top_trace) != dims[-1]:
            raise DimensionError("top trace must be a functional on the top degree")

    @property
    def n(self) -> int:
        return len(self.graded_dims) - 1

    def dim(self, k: int) -> int:
        return self.graded_dims[k] if 0 <= k <= self.n else 0

    @cached_property
    def _sparse_action(self) -> tuple[tuple[tuple[int, int, int, GaussianRational], ...], ...]:
        out = []
        for k, a in enumerate(self.action):
            d_k = self.graded_dims[k]
            nz = []
            for r, row in enumerate(a.entries):
                for col, x in enumerate(row):
                    if x:
                        i, j = divmod(col, d_k)
                        nz.append((r, i, j, x))
            out.append(tuple(nz))
        return tuple(out)

    def cup_matrix(self, v: Sequence, k: int) -> ExactMatrix:
        """Matrix of ``x -> v cup x`` from M^k to M^{k+1} (empty shapes at the ends)."""
        vec = coerce_vector(v)
        if len(vec) != self.v_dim:
            raise DimensionError(f"direction has length {len(vec)}, expected {self.v_dim}")
        rows, cols = self.dim(k + 1), self.dim(k)
        if not (0 <= k < self.n) or not rows or not cols:
            return ExactMatrix.zeros(rows, cols)
        grid = [[ZERO] * cols for _ in range(rows)]
        for r, i, j, x in self._sparse_action[k]:
            c = vec[i]
            if c:
                grid[r][j] = grid[r][j] + c * x
        return ExactMatrix._raw(tuple(map(tuple, grid)), cols)

    def basis_block(self, i: int, k: int) -> ExactMatrix:
        return self.cup_matrix([ONE if a == i else ZERO for a in range(self.v_dim)], k)

    def cup(self, v: Sequence, x: Sequence, k: int) -> tuple[GaussianRational, ...]:
        return self.cup_matrix(v, k).apply(x)

    def cup_with_section(self, s: Sequence) -> ExactMatrix:
        """Matrix of ``v -> v cup s`` from V to M^1, for s in M^0."""
        sv = coerce_vector(s)
        if len(sv) != self.dim(0):
            raise DimensionError("section must lie in M^0")
        cols = [self.basis_block(i, 0).apply(sv) if self.n >= 1 else () for i in range(self.v_dim)]
        return ExactMatrix.from_columns(cols, self.dim(1))


@dataclass(frozen=True)
class CupViolation:
    """``v cup (v cup x) != 0`` for the basis vector x of M^k."""

    v: tuple[GaussianRational, ...]
    k: int
    x: tuple[GaussianRational, ...]
    value: tuple[GaussianRational, ...]


def validate_cup_square_zero(m: CupModule) -> CupViolation | None:
    """``None`` when every symmetrised double action vanishes, else a witness."""
    q = m.v_dim
    for k in range(m.n - 1):
        if not m.dim(k) or not m.dim(k + 2):
            continue
        first = [m.basis_block(i, k) for i in range(q)]
        second = [m.basis_block(i, k + 1) for i in range(q)]
        for a in range(q):
            for b in range(a, q):
                sym = second[a] @ first[b]
                if a != b:
                    sym = sym + second[b] @ first[a]
                if sym.is_zero():
                    continue
                col = next(j for j in range(sym.cols) if any(sym.column(j)))
                v = tuple(ONE if i in (a, b) else ZERO for i in range(q))
                x = tuple(ONE if j == col else ZERO for j in range(m.dim(k)))
                value = m.cup(v, m.cup(v, x, k), k + 1)
                return CupViolation(v=v, k=k, x=x, value=value)
    return None


def build_koszul(q: int, shift: int = 0) -> CupModule:
    """``M^k = Lambda^{k+shift} V`` for k = 0..q, acting by wedge product."""
    if q < 1 or not 0 <= shift <= q:
        raise ValueError("need q >= 1 and 0 <= shift <= q")
    dims = tuple(comb(q, k + shift) if k + shift <= q else 0 for k in range(q + 1))
    action = []
    for k in range(q):
        if k + shift + 1 <= q:
            action.append(wedge_tensor(q, k + shift))
        else:
            action.append(ExactMatrix.zeros(dims[k + 1], q * dims[k]))
    trace = (ONE,) if shift == 0 else None
    return CupModule(
        q,
        dims,
        tuple(action),
        trace,
        label=f"koszul(q={q}, shift={shift})",
        descriptor=ModelDescriptor("koszul", q=q, shift=shift),
    )


def build_ample_divisor_canonical(q: int, chi: int) -> CupModule:
    """Cup model of H^*(K_X) for a smooth ample divisor X in a q-dimensional abelian variety.

    M^0 = W + Lambda^1 V with dim W = chi - 1 (W first in the basis), and
    M^k = Lambda^{k+1} V for 1 <= k <= q - 1.  V acts by zero on W.
    """
    if q < 2 or chi < 1:
        raise ValueError("need q >= 2 and chi >= 1")
    w = chi - 1
    dims = (w + q,) + tuple(comb(q, k + 1) for k in range(1, q))
    d0 = dims[0]
    first = wedge_tensor(q, 1)
    grid = [[ZERO] * (q * d0) for _ in range(dims[1])]
    for r, row in enumerate(first.entries):
        for col, x in enumerate(row):
            if x:
                i, j = divmod(col, q)
                grid[r][i * d0 + w + j] = x
    action = [ExactMatrix(grid, q * d0)] + [wedge_tensor(q, k + 1) for k in range(1, q - 1)]
    return CupModule(
        q,
        dims,
        tuple(action),
        (ONE,),
        label=f"ample_divisor_canonical(q={q}, chi={chi})",
        descriptor=ModelDescriptor("ample_divisor_canonical", q=q, chi=chi),
    )


def serre_pairing(m: CupModule, s: Sequence) -> ExactMatrix:
    """Skew form ``c_s(v, w) = trace(w cup (v cup s))`` on V, for s in M^0."""
    if m.n != 2:
        raise WrongGrading(f"serre pairing needs n = 2, model has n = {m.n}")
    if m.top_trace is None:
        raise NoTrace("model has no top trace")
    sv = coerce_vector(s)
    q = m.v_dim
    first = [m.basis_block(a, 0).apply(sv) for a in range(q)]
    second = [m.basis_block(b, 1) for b in range(q)]
    trace = m.top_trace
    grid = []
    for a in range(q):
        row = []
        for b in range(q):
            top = second[b].apply(first[a])
            acc = ZERO
            for t, y in zip(trace, top):
                if t and y:
                    acc = acc + t * y
            row.append(acc)
        grid.append(row)
    return ExactMatrix(grid, q)


@dataclass(frozen=True)
class ModelDescriptor:
    """Serializable recipe for a :class:`CupModule`."""

    kind: str
    q: int
    chi: int | None = None
    shift: int | None = None
    tensors: tuple[ExactMatrix, ...] | None = None
    graded_dims: tuple[int, ...] | None = None
    top_trace: tuple[GaussianRational, ...] | None = None

    def build(self) -> CupModule:
        if self.kind == "koszul":
            return build_koszul(self.q, self.shift or 0)
        if self.kind == "ample_divisor_canonical":
            if self.chi is None:
                raise ModelFormatError("ample_divisor_canonical needs 'chi'")
            return build_ample_divisor_canonical(self.q, self.chi)
        if self.kind == "explicit_tensors":
            if self.tensors is None or self.graded_dims is None:
                raise ModelFormatError("explicit_tensors needs 'tensors' and 'graded_dims'")
            return CupModule(self.q, self.graded_dims, self.tensors, self.top_trace, label="explicit", descriptor=self)
        raise ModelFormatError(f"unknown model kind {self.kind!r}")

    def to_dict(self) -> dict:
        doc: dict = {"schema_version": 1, "kind": self.kind, "q": self.q}
        if self.chi is not None:
            doc["chi"] = self.chi
        if self.shift is not None:
            doc["shift"] = self.shift
        if self.graded_dims is not None:
            doc["graded_dims"] = list(self.graded_dims)
        if self.tensors is not None:
            doc["tensors"] = [t.to_strings() for t in self.tensors]
        if self.top_trace is not None:
            doc["top_trace"] = [format_scalar(x) for x in self.top_trace]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> ModelDescriptor:
        if not isinstance(doc, dict):
            raise ModelFormatError("model document must be a JSON object")
        kind = doc.get("kind")
        if kind not in KINDS:
            raise ModelFormatError(f"'kind' must be one of {KINDS}, got {kind!r}")
        q = doc.get("q")
        if not isinstance(q, int) or q < 1:
            raise ModelFormatError("'q' must be a positive integer")
        tensors = dims = trace = None
        if kind == "explicit_tensors":
            dims = doc.get("graded_dims")
            raw = doc.get("tensors")
            if not isinstance(dims, list) or not isinstance(raw, list) or len(raw) != len(dims) - 1:
                raise ModelFormatError("explicit models need 'graded_dims' and one tensor per degree")
            dims = tuple(int(d) for d in dims)
            try:
                tensors = tuple(ExactMatrix(t, q * dims[k]) for k, t in enumerate(raw))
                if "top_trace" in doc and doc["top_trace"] is not None:
                    trace = coerce_vector(doc["top_trace"])
            except (ValueError, TypeError, DimensionError) as exc:
                raise ModelFormatError(f"bad tensor data: {exc}") from exc
        return cls(kind, q, doc.get("chi"), doc.get("shift"), tensors, dims, trace)

    @classmethod
    def from_json(cls, text: str) -> ModelDescriptor:
        return cls.from_dict(json.loads(text))


def describe(m: CupModule) -> ModelDescriptor:
    """Descriptor that rebuilds ``m`` (explicit tensors unless it came from a family)."""
    if m.descriptor is not None:
        return m.descriptor
    return ModelDescriptor("explicit_tensors", m.v_dim, tensors=m.action, graded_dims=m.graded_dims, top_trace=m.top_trace)
