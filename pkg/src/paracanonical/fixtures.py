"""Built-in section-algebra models.

``elliptic``      E with D = the origin; S_n spanned by 1, P, P', P^2, P P', P^3, ...
                  (P the Weierstrass function), r_n reads the z^-n Laurent coefficient.
``polynomial``    Q = C[y, z] graded by degree, d_n f = (df/dy)(1, 1); H1_n one-dimensional,
                  v transversal.  The canonical sigma = y needs the xi-correction.
``obstruct2``     like ``polynomial`` but with cup_v_S = 0, so d_2(sigma^2) cannot be absorbed.
``obstruct3``     H1_1 two-dimensional with v cup S_1 hitting only one line; order 2
                  goes through and order 3 is obstructed.
``no-first-order``  d_1 = 0 and s cup v != 0.
"""

from __future__ import annotations

from .core import ExactMatrix, kernel_basis
from .core.gaussian import GaussianRational
from .lifting import SectionAlgebraModel


def _elliptic_basis(n: int) -> list[tuple[int, int]]:
    """Sections of O(nD) as exponent pairs (a, b) of P^a P'^b, ordered by pole order."""
    out = []
    for pole in range(0, n + 1):
        if pole == 1:
            continue
        if pole % 2 == 0:
            out.append((pole // 2, 0))
        else:
            out.append(((pole - 3) // 2, 1))
    return out


def elliptic(N: int = 6) -> SectionAlgebraModel:
    S, Q, H1 = [], [], [1] + [0] * N
    r, d, mult_s, mul = {}, {}, {}, {}
    for n in range(1, N + 1):
        basis = _elliptic_basis(n)
        S.append(len(basis))
        Q.append(1)
        # leading Laurent coefficients: P ~ z^-2, P' ~ -2 z^-3
        row = []
        for a, b in basis:
            row.append((-2) ** b if 2 * a + 3 * b == n else 0)
        r[n] = ExactMatrix([row], len(basis))
        d[n] = ExactMatrix([[1]] if n == 1 else [], 1)
        mult_s[n] = ExactMatrix([], H1[n - 1])
    for a in range(1, N + 1):
        for b in range(a, N + 1 - a):
            mul[(a, b)] = ExactMatrix([[1]])
    return SectionAlgebraModel(
        N,
        tuple(S),
        tuple(Q),
        tuple(H1),
        0,
        r,
        d,
        mult_s,
        ExactMatrix([], 1),
        ExactMatrix([], 0),
        mul,
        (GaussianRational(1),),
        (GaussianRational(1),),
        name="elliptic",
    )


def _monomials(n: int) -> list[tuple[int, int]]:
    """Degree-n monomials y^i z^(n-i), highest power of y first."""
    return [(n - k, k) for k in range(n + 1)]


def _poly_products(N: int) -> dict[tuple[int, int], ExactMatrix]:
    mul = {}
    for a in range(1, N + 1):
        for b in range(a, N + 1 - a):
            index = {m: i for i, m in enumerate(_monomials(a + b))}
            ma, mb = _monomials(a), _monomials(b)
            grid = [[0] * (len(ma) * len(mb)) for _ in index]
            for i, x in enumerate(ma):
                for j, y in enumerate(mb):
                    grid[index[(x[0] + y[0], x[1] + y[1])]][i * len(mb) + j] = 1
            mul[(a, b)] = ExactMatrix(grid, len(ma) * len(mb))
    return mul


def _dy_at_one(n: int) -> ExactMatrix:
    return ExactMatrix([[i for i, _ in _monomials(n)]], n + 1)


def _restrictions(d: dict[int, ExactMatrix], N: int) -> tuple[list[int], dict[int, ExactMatrix]]:
    """S_1 = <s, xi> with r_1 = (0, z); S_n = <zero-tail section> + ker d_n for n >= 2."""
    S, r = [], {}
    for n in range(1, N + 1):
        if n == 1:
            cols = [(0, 0), (0, 1)]
        else:
            cols = [(0,) * (n + 1)] + list(kernel_basis(d[n]))
        S.append(len(cols))
        r[n] = ExactMatrix.from_columns(cols, n + 1)
    return S, r


def polynomial(N: int = 8) -> SectionAlgebraModel:
    d = {n: _dy_at_one(n) for n in range(1, N + 1)}
    S, r = _restrictions(d, N)
    H1 = [1] * (N + 1)
    mult_s = {n: ExactMatrix([[0]]) for n in range(1, N + 1)}
    return SectionAlgebraModel(
        N,
        tuple(S),
        tuple(n + 1 for n in range(1, N + 1)),
        tuple(H1),
        1,
        r,
        d,
        mult_s,
        ExactMatrix([[0, 1]]),
        ExactMatrix([[0]]),
        _poly_products(N),
        (GaussianRational(1), GaussianRational(0)),
        (GaussianRational(1),),
        name="polynomial",
    )


def obstruct2() -> SectionAlgebraModel:
    N = 2
    d = {1: ExactMatrix([[1, 0]]), 2: ExactMatrix([[2, 0, 0]])}
    S, r = _restrictions(d, N)
    return SectionAlgebraModel(
        N,
        tuple(S),
        (2, 3),
        (1, 1, 1),
        1,
        r,
        d,
        {1: ExactMatrix([[0]]), 2: ExactMatrix([[0]])},
        ExactMatrix([[0, 0]]),
        ExactMatrix([[0]]),
        _poly_products(N),
        (GaussianRational(1), GaussianRational(0)),
        (GaussianRational(1),),
        name="obstruct2",
    )


def obstruct3() -> SectionAlgebraModel:
    N = 3
    d = {
        1: ExactMatrix([[1, 0]]),
        2: ExactMatrix([[2, 1, 0], [0, 0, 0]]),
        3: ExactMatrix([[1, 0, 0, 0], [0, 0, 0, 0]]),
    }
    S, r = _restrictions(d, N)
    mult_s = {
        1: ExactMatrix([[0], [0]]),
        2: ExactMatrix([[0, 0], [0, 1]]),
        3: ExactMatrix([[0, 1]]),
    }
    return SectionAlgebraModel(
        N,
        tuple(S),
        (2, 3, 4),
        (1, 2, 2, 1),
        1,
        r,
        d,
        mult_s,
        ExactMatrix([[0, 1], [0, 0]]),
        ExactMatrix([[0, 0]]),
        _poly_products(N),
        (GaussianRational(1), GaussianRational(0)),
        (GaussianRational(1),),
        name="obstruct3",
    )


def no_first_order() -> SectionAlgebraModel:
    return SectionAlgebraModel(
        1,
        (2,),
        (1,),
        (1, 1),
        1,
        {1: ExactMatrix([[0, 1]])},
        {1: ExactMatrix([[0]])},
        {1: ExactMatrix([[1]])},
        ExactMatrix([[1, 0]]),
        ExactMatrix([[0]]),
        {},
        (GaussianRational(1), GaussianRational(0)),
        (GaussianRational(1),),
        name="no-first-order",
    )


LIFT_FIXTURES = {
    "elliptic": elliptic,
    "polynomial": polynomial,
    "obstruct2": obstruct2,
    "obstruct3": obstruct3,
    "no-first-order": no_first_order,
}

