"""Pfaffians of skew-symmetric matrices, numeric and symbolic.

Sign convention: the block-diagonal matrix with 2x2 blocks [[0, 1], [-1, 0]]
has Pfaffian +1.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .gaussian import ONE, ZERO, GaussianRational
from .linalg import ExactMatrix
from .poly import SparsePoly


class NotSkew(ValueError):
    """The matrix is not square and skew-symmetric."""


def _is_skew_grid(grid: Sequence[Sequence]) -> bool:
    n = len(grid)
    if any(len(r) != n for r in grid):
        return False
    return all(grid[i][j] == -grid[j][i] for i in range(n) for j in range(i, n))


def pfaffian(m):
    """Pfaffian of an :class:`ExactMatrix` or of a square grid of :class:`SparsePoly`."""
    if isinstance(m, ExactMatrix):
        if not m.is_skew():
            raise NotSkew(f"matrix of shape {m.shape} is not skew-symmetric")
        return _pfaffian_numeric(m)
    grid = tuple(tuple(r) for r in m)
    if not _is_skew_grid(grid):
        raise NotSkew("polynomial matrix is not skew-symmetric")
    if grid and any(isinstance(x, SparsePoly) for r in grid for x in r):
        variables = next(x.variables for r in grid for x in r if isinstance(x, SparsePoly))
        lifted = tuple(tuple(x if isinstance(x, SparsePoly) else SparsePoly.constant(x, variables) for x in r) for r in grid)
        return pfaffian_expansion(lifted, SparsePoly.constant(0, variables), SparsePoly.constant(1, variables))
    return _pfaffian_numeric(ExactMatrix(grid, len(grid)))


def _pfaffian_numeric(m: ExactMatrix) -> GaussianRational:
    """Skew Gaussian elimination: peel off a 2x2 block, recurse on its Schur complement."""
    n = m.rows
    if n % 2:
        return ZERO
    a = [list(r) for r in m.entries]
    result = ONE
    for k in range(0, n, 2):
        j = next((c for c in range(k + 1, n) if a[k][c]), None)
        if j is None:
            return ZERO
        if j != k + 1:
            a[j], a[k + 1] = a[k + 1], a[j]
            for row in a:
                row[j], row[k + 1] = row[k + 1], row[j]
            result = -result
        p = a[k][k + 1]
        result = result * p
        inv = p.reciprocal()
        u = a[k]
        w = a[k + 1]
        for i in range(k + 2, n):
            ui, wi = u[i], w[i]
            if not ui and not wi:
                continue
            row = a[i]
            for jj in range(k + 2, n):
                uj, wj = u[jj], w[jj]
                if (wi and uj) or (ui and wj):
                    row[jj] = row[jj] + (wi * uj - ui * wj) * inv
    return result


def pfaffian_expansion(grid: Sequence[Sequence], zero, one):
    """Cofactor expansion along the first row, memoised on index subsets.

    Works for any commutative ring elements; used for symbolic entries.
    """
    n = len(grid)
    if n % 2:
        return zero

    @lru_cache(maxsize=None)
    def pf(idx: tuple[int, ...]):
        if not idx:
            return one
        first, rest = idx[0], idx[1:]
        acc = zero
        for pos, j in enumerate(rest):
            entry = grid[first][j]
            if not entry:
                continue
            sub = pf(rest[:pos] + rest[pos + 1 :])
            if not sub:
                continue
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        return acc

    return pf(tuple(range(n)))


def linear_combination(generators: Sequence[ExactMatrix], variables: Sequence[str]) -> tuple[tuple[SparsePoly, ...], ...]:
    """The symbolic matrix ``sum_i x_i * generators[i]``."""
    if len(generators) != len(variables):
        raise ValueError("one variable per generator is required")
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].rows
    xs = SparsePoly.gens(variables)
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = {}
            for x, g in zip(xs, generators):
                c = g[i, j]
                if c:
                    (exps,) = x.terms
                    terms[exps] = c
            row.append(SparsePoly(tuple(variables), terms))
        grid.append(tuple(row))
    return tuple(grid)
