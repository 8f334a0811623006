"""Exact matrices over Q(i): echelon forms, rank, kernels, solving.

All elimination runs on Gaussian-integer rows (each row is cleared of
denominators first) with fraction-free updates and integer content removal,
which keeps Python-level arithmetic on plain ints.  Pivoting is
deterministic: leftmost column first, first nonzero row within it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .gaussian import ONE, ZERO, GaussianRational, coerce_vector, format_scalar

Vector = tuple[GaussianRational, ...]


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class ExactMatrix:
    """Immutable rows x cols grid of :class:`GaussianRational`."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None) -> None:
        grid = tuple(coerce_vector(row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        for row in grid:
            if len(row) != cols:
                raise DimensionError(f"ragged matrix: expected {cols} columns, got {len(row)}")
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid
        self._hash = None

    @classmethod
    def _raw(cls, grid: tuple[Vector, ...], cols: int) -> ExactMatrix:
        m = object.__new__(cls)
        m.rows, m.cols, m.entries, m._hash = len(grid), cols, grid, None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> ExactMatrix:
        cols = [coerce_vector(c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise DimensionError("column length mismatch")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(rows)), len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.cols == other.cols and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self) -> str:
        return f"ExactMatrix({self.to_strings()!r})"

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x) for x in row] for row in self.entries]

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def transpose(self) -> ExactMatrix:
        if not self.rows:
            return ExactMatrix._raw(tuple(() for _ in range(self.cols)), 0)
        return ExactMatrix._raw(tuple(zip(*self.entries)), self.rows)

    @property
    def T(self) -> ExactMatrix:
        return self.transpose()

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix._raw(tuple(tuple(-x for x in r) for r in self.entries), self.cols)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)), self.cols
        )

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self + (-other)

    def scale(self, c) -> ExactMatrix:
        c = GaussianRational.coerce(c)
        return ExactMatrix._raw(tuple(tuple(c * x if x else ZERO for x in r) for r in self.entries), self.cols)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        other_cols = other.transpose().entries
        out = []
        for r in self.entries:
            nz = [(k, x) for k, x in enumerate(r) if x]
            out.append(tuple(_dot_sparse(nz, col) for col in other_cols))
        return ExactMatrix._raw(tuple(out), other.cols)

    def apply(self, vec: Sequence) -> Vector:
        v = coerce_vector(vec)
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} does not fit {self.shape}")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(_dot_sparse(nz, row) for row in self.entries)

    def hstack(self, other: ExactMatrix) -> ExactMatrix:
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        return ExactMatrix._raw(tuple(a + b for a, b in zip(self.entries, other.entries)), self.cols + other.cols)

    def vstack(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        return ExactMatrix._raw(self.entries + other.entries, self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        return ExactMatrix._raw(tuple(tuple(self.entries[i][j] for j in cols) for i in rows), len(cols))

    def is_skew(self) -> bool:
        if self.rows != self.cols:
            return False
        e = self.entries
        return all(e[i][j] == -e[j][i] for i in range(self.rows) for j in range(i, self.rows))

    def rank(self) -> int:
        return _rank_cached(self)

    def det(self) -> GaussianRational:
        return determinant(self)


def _dot_sparse(nz, dense) -> GaussianRational:
    acc = ZERO
    for k, x in nz:
        y = dense[k]
        if y:
            acc = acc + x * y
    return acc


def matrix(rows: Iterable[Iterable]) -> ExactMatrix:
    return ExactMatrix(rows)


def column_vector(vec: Sequence) -> ExactMatrix:
    return ExactMatrix([[x] for x in vec], 1)


def is_zero_vector(vec: Sequence) -> bool:
    return not any(vec)


# -- Gaussian-integer row kernel -------------------------------------------


def _integer_row(row: Vector) -> tuple[list[int], list[int]]:
    den = 1
    for x in row:
        if x:
            den = math.lcm(den, x.re.denominator, x.im.denominator)
    re = [x.re.numerator * (den // x.re.denominator) if x.re else 0 for x in row]
    im = [x.im.numerator * (den // x.im.denominator) if x.im else 0 for x in row]
    return re, im


def _reduce_content(re: list[int], im: list[int]) -> None:
    g = math.gcd(*re, *im)
    if g > 1:
        re[:] = [a // g for a in re]
        im[:] = [b // g for b in im]


def _eliminate(grid: Sequence[Vector], ncols: int, full: bool) -> tuple[list[tuple[list[int], list[int]]], list[int]]:
    """Fraction-free row reduction.  Returns integer rows and pivot columns.

    With ``full`` the result is reduced (zeros above pivots as well).
    Pivot rows come first in pivot order.
    """
    rows = [_integer_row(r) for r in grid]
    rows = [r for r in rows if any(r[0]) or any(r[1])]
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][0][c] or rows[i][1][c]), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        yr, yi = rows[r]
        pr, pi = yr[c], yi[c]
        targets = range(nrows) if full else range(r + 1, nrows)
        for j in targets:
            if j == r:
                continue
            xr, xi = rows[j]
            fr, fi = xr[c], xi[c]
            if not fr and not fi:
                continue
            if not pi and not fi and not any(xi) and not any(yi):
                nr = [pr * a - fr * b for a, b in zip(xr, yr)]
                ni = xi
            else:
                nr = [pr * a - pi * b - fr * cc + fi * d for a, b, cc, d in zip(xr, xi, yr, yi)]
                ni = [pr * b + pi * a - fr * d - fi * cc for a, b, cc, d in zip(xr, xi, yr, yi)]
            _reduce_content(nr, ni)
            rows[j] = (nr, ni)
        pivots.append(c)
        r += 1
    return rows[: len(pivots)], pivots


def _normalise_row(row: tuple[list[int], list[int]], pivot: int) -> Vector:
    re, im = row
    pr, pi = re[pivot], im[pivot]
    n = pr * pr + pi * pi
    out = []
    for a, b in zip(re, im):
        if not a and not b:
            out.append(ZERO)
        else:
            # (a+bi)/(pr+pi i) = (a+bi)(pr-pi i)/n
            out.append(GaussianRational(Fraction(a * pr + b * pi, n), Fraction(b * pr - a * pi, n)))
    return tuple(out)


@lru_cache(maxsize=4096)
def _rank_cached(m: ExactMatrix) -> int:
    return len(_eliminate(m.entries, m.cols, full=False)[1])


@lru_cache(maxsize=2048)
def _rref_cached(m: ExactMatrix) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    rows, pivots = _eliminate(m.entries, m.cols, full=True)
    return tuple(_normalise_row(r, p) for r, p in zip(rows, pivots)), tuple(pivots)


def rref(m: ExactMatrix) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Nonzero rows of the reduced row echelon form, and the pivot columns."""
    return _rref_cached(m)


@dataclass(frozen=True)
class RankKernelImage:
    rank: int
    kernel_basis: tuple[Vector, ...]
    image_basis: tuple[Vector, ...]

    @property
    def nullity(self) -> int:
        return len(self.kernel_basis)


def _row_space_rref(vectors: Sequence[Vector], ncols: int) -> tuple[Vector, ...]:
    if not vectors:
        return ()
    return rref(ExactMatrix._raw(tuple(vectors), ncols))[0]


def kernel_basis(m: ExactMatrix) -> tuple[Vector, ...]:
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        vec = [ZERO] * m.cols
        vec[f] = ONE
        for row, p in zip(rows, pivots):
            if row[f]:
                vec[p] = -row[f]
        basis.append(tuple(vec))
    return _row_space_rref(basis, m.cols)


def image_basis(m: ExactMatrix) -> tuple[Vector, ...]:
    return rref(m.transpose())[0]


def rank_kernel_image(m: ExactMatrix) -> RankKernelImage:
    """Rank, plus reduced-echelon bases of the kernel and of the column space."""
    return RankKernelImage(rank=m.rank(), kernel_basis=kernel_basis(m), image_basis=image_basis(m))


class NoSolution:
    """Typed outcome of :func:`solve_linear` when ``b`` is not in the image."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NoSolution"


NO_SOLUTION = NoSolution()


def solve_linear(m: ExactMatrix, b: Sequence) -> Vector | NoSolution:
    """Echelon-canonical solution of ``m x = b`` (free variables set to zero)."""
    bv = coerce_vector(b)
    if len(bv) != m.rows:
        raise DimensionError(f"right-hand side of length {len(bv)} does not fit {m.shape}")
    if m.cols == 0:
        return () if not any(bv) else NO_SOLUTION
    aug = ExactMatrix._raw(tuple(r + (x,) for r, x in zip(m.entries, bv)), m.cols + 1)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return NO_SOLUTION
    x = [ZERO] * m.cols
    for row, p in zip(rows, pivots):
        x[p] = row[m.cols]
    return tuple(x)


def in_span(m: ExactMatrix, b: Sequence) -> bool:
    return not isinstance(solve_linear(m, b), NoSolution)


def determinant(m: ExactMatrix) -> GaussianRational:
    """Bareiss elimination over Z[i] after clearing row denominators."""
    if m.rows != m.cols:
        raise DimensionError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    scale = 1
    rows = []
    for r in m.entries:
        den = 1
        for x in r:
            if x:
                den = math.lcm(den, x.re.denominator, x.im.denominator)
        scale *= den
        rows.append([(int(x.re * den), int(x.im * den)) for x in r])
    sign = 1
    prev = (1, 0)
    for k in range(n - 1):
        if rows[k][k] == (0, 0):
            swap = next((i for i in range(k + 1, n) if rows[i][k] != (0, 0)), None)
            if swap is None:
                return ZERO
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pr, pi = rows[k][k]
        for i in range(k + 1, n):
            ar, ai = rows[i][k]
            new = []
            for j in range(k + 1, n):
                xr, xi = rows[i][j]
                yr, yi = rows[k][j]
                nr = pr * xr - pi * xi - (ar * yr - ai * yi)
                ni = pr * xi + pi * xr - (ar * yi + ai * yr)
                new.append(_gauss_exact_div((nr, ni), prev))
            rows[i] = [(0, 0)] * (k + 1) + new
        prev = (pr, pi)
    dr, di = rows[n - 1][n - 1]
    return GaussianRational(Fraction(sign * dr, scale), Fraction(sign * di, scale))


def _gauss_exact_div(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    (x, y), (c, d) = a, b
    n = c * c + d * d
    re, im = x * c + y * d, y * c - x * d
    if re % n or im % n:
        raise ArithmeticError("inexact Gaussian-integer division in Bareiss step")
    return re // n, im // n
