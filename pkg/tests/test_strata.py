import json
import random
from fractions import Fraction

import pytest

from oracles import det_fraction, pencil_det_coefficients, random_skew
from paracanonical.core import ExactMatrix, GaussianRational, NotSkew, SparsePoly
from paracanonical.cup import build_ample_divisor_canonical
from paracanonical.strata import (
    ALL_OF_K,
    DegenerateFamily,
    FamilyFormatError,
    IdenticallyZero,
    OddQ,
    PointType,
    SizeMismatch,
    SkewFamily,
    pencil_coefficient,
    pencil_pfaffian,
    pencil_root_multiplicity,
    rank_of_cup_s,
    sigma_polynomial,
    smooth_point_test,
)

J = [[0, 1], [-1, 0]]


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[at + i][at + j] = x
        at += len(b)
    return ExactMatrix(out, n)


def skew(grid):
    return ExactMatrix(grid, len(grid))


def invertible(n, rng):
    while True:
        u = ExactMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], n)
        if u.det():
            return u


def test_odd_q_is_all_of_k():
    fam = SkewFamily.from_model(build_ample_divisor_canonical(3, 2))
    desc = sigma_polynomial(fam)
    assert desc.degree == ALL_OF_K and desc.pf_poly.is_zero()


def test_q2_single_generator():
    fam = SkewFamily(2, (skew(J),))
    desc = sigma_polynomial(fam)
    assert desc.pf_poly == SparsePoly.variable("x1", ("x1",))
    assert desc.degree == 1


def test_q4_random_family_against_determinant():
    rng = random.Random(21)
    grids = [random_skew(4, rng) for _ in range(2)]
    fam = SkewFamily(4, tuple(skew(g) for g in grids))
    desc = sigma_polynomial(fam)
    assert desc.degree == 2
    for x, y in [(1, 0), (0, 1), (2, -3), (5, 7)]:
        mat = [[x * a + y * b for a, b in zip(ra, rb)] for ra, rb in zip(*grids)]
        assert desc.pf_poly.evaluate((x, y)) ** 2 == GaussianRational(det_fraction(mat))


def test_rank_examples():
    fam = SkewFamily(4, (block_diag(J, J), block_diag(J, [[0, 0], [0, 0]])))
    assert rank_of_cup_s(fam, (0, 0)) == 0
    assert rank_of_cup_s(fam, (1, 0)) == 4
    rng = random.Random(4)
    u = invertible(6, rng)
    corank2 = u.transpose() @ block_diag(J, J, [[0, 0], [0, 0]]) @ u
    assert rank_of_cup_s(SkewFamily(6, (corank2,)), (1,)) == 4


def _block_family(c=J):
    a = block_diag([[0, 0], [0, 0]], J)
    b = block_diag(c, [[0, 0], [0, 0]])
    return a, b


def test_smooth_point_on_block_instance():
    a, b = _block_family()
    fam = SkewFamily(4, (a, b))
    assert smooth_point_test(fam, (1, 0)) is PointType.SMOOTH
    assert smooth_point_test(fam, (1, 1)) is PointType.NOT_ON_SIGMA


def test_singular_where_form_vanishes():
    rng = random.Random(3)
    a1, a2 = skew(random_skew(4, rng)), skew(random_skew(4, rng))
    fam = SkewFamily(4, (a1, a2, a1))
    assert smooth_point_test(fam, (1, 0, -1)) is PointType.SINGULAR


def test_corank_two_point_of_random_family_is_smooth():
    rng = random.Random(17)
    u = invertible(6, rng)
    c0 = u.transpose() @ block_diag(J, J, [[0, 0], [0, 0]]) @ u
    a2, a3 = skew(random_skew(6, rng)), skew(random_skew(6, rng))
    s = (GaussianRational(2), GaussianRational(-1), GaussianRational(Fraction(1, 2)))
    a1 = (c0 - a2.scale(s[1]) - a3.scale(s[2])).scale(Fraction(1, 2))
    fam = SkewFamily(6, (a1, a2, a3))
    assert fam.pf_poly.evaluate(s) == 0
    assert any(g.evaluate(s) for g in fam.pf_poly.gradient())
    assert smooth_point_test(fam, s) is PointType.SMOOTH


def test_smooth_point_errors():
    with pytest.raises(OddQ):
        smooth_point_test(SkewFamily.from_model(build_ample_divisor_canonical(3, 1)), (1, 0, 0))
    with pytest.raises(DegenerateFamily):
        smooth_point_test(SkewFamily(4, (block_diag(J, [[0, 0], [0, 0]]),)), (1,))


def test_family_validation():
    with pytest.raises(SizeMismatch):
        SkewFamily(4, (skew(J),))
    with pytest.raises(NotSkew):
        SkewFamily(2, (ExactMatrix([[1, 0], [0, 1]], 2),))


def test_family_roundtrip():
    fam = SkewFamily(4, _block_family())
    doc = json.loads(fam.to_json())
    assert SkewFamily.from_dict(doc).basis_forms == fam.basis_forms
    with pytest.raises(FamilyFormatError):
        SkewFamily.from_dict({"q": "4"})


def test_pencil_coefficient_block_instance():
    a, b = _block_family()
    assert pencil_coefficient(a, b) == GaussianRational(1)
    assert pencil_coefficient(a, ExactMatrix.zeros(4, 4)) == GaussianRational(0)


def test_pencil_coefficient_against_interpolation_oracle():
    rng = random.Random(8)
    for _ in range(3):
        ga, gb = random_skew(6, rng), random_skew(6, rng)
        expected = pencil_det_coefficients(ga, gb)[2]
        assert pencil_coefficient(skew(ga), skew(gb)) == GaussianRational(expected)


def test_pencil_pfaffian_is_binary_form():
    a, b = _block_family()
    pf = pencil_pfaffian(a, b)
    assert pf.is_homogeneous() and pf.total_degree() == 2


def test_root_multiplicity_examples():
    a, b = _block_family()
    assert pencil_root_multiplicity(a, b) == 1
    nondeg = block_diag(J, J)
    assert pencil_root_multiplicity(nondeg, nondeg) == 0
    rng = random.Random(6)
    corank4 = block_diag(J, [[0] * 4 for _ in range(4)])
    generic = skew(random_skew(6, rng))
    assert pencil_root_multiplicity(corank4, generic) == 2


def test_root_multiplicity_identically_zero():
    z = ExactMatrix.zeros(4, 4)
    with pytest.raises(IdenticallyZero):
        pencil_root_multiplicity(z, z)


def test_odd_pencil_coefficient_is_zero():
    rng = random.Random(1)
    assert pencil_coefficient(skew(random_skew(3, rng)), skew(random_skew(3, rng))) == GaussianRational(0)
