import json

import pytest

from oracles import rank_fraction
from paracanonical.core import DimensionError, ExactMatrix, GaussianRational, kernel_basis
from paracanonical.cup import (
    CupModule,
    ModelDescriptor,
    ModelFormatError,
    NoTrace,
    WrongGrading,
    build_ample_divisor_canonical,
    build_koszul,
    describe,
    exterior_basis,
    serre_pairing,
    validate_cup_square_zero,
    wedge_tensor,
)


def e(i, q):
    return tuple(GaussianRational(1 if j == i else 0) for j in range(q))


def test_koszul_dims():
    assert build_koszul(3, 0).graded_dims == (1, 3, 3, 1)
    assert build_koszul(4, 1).graded_dims == (4, 6, 4, 1, 0)


def test_koszul_trace_only_without_shift():
    assert build_koszul(3, 0).top_trace is not None
    assert build_koszul(3, 1).top_trace is None


def test_ample_dims():
    assert build_ample_divisor_canonical(3, 2).graded_dims == (4, 3, 1)
    m = build_ample_divisor_canonical(4, 1)
    assert m.dim(0) == 4 == 1 + 4 - 1


def test_zero_direction_acts_by_zero():
    m = build_ample_divisor_canonical(4, 3)
    for k in range(m.n):
        assert m.cup_matrix((0,) * 4, k).is_zero()


def test_wedge_signs():
    q = 3
    t = wedge_tensor(q, 1)
    basis2 = exterior_basis(q, 2)
    # e_1 ^ e_0 = -e_0 ^ e_1
    col = 1 * q + 0
    assert t.column(col)[basis2.index((0, 1))] == GaussianRational(-1)
    col = 0 * q + 1
    assert t.column(col)[basis2.index((0, 1))] == GaussianRational(1)


@pytest.mark.parametrize("model", [build_koszul(4, 0), build_ample_divisor_canonical(3, 2), build_koszul(5, 2)])
def test_square_zero_passes(model):
    assert validate_cup_square_zero(model) is None


def test_square_zero_violation_has_checkable_witness():
    good = build_koszul(3, 0)
    second = [list(r) for r in good.action[1].entries]
    # make e_0 act on Lambda^1 by sending e_1 to e_0^e_1 twice over
    q, d1 = 3, 3
    second[exterior_basis(3, 2).index((0, 1))][0 * d1 + 1] = GaussianRational(2)
    bad = CupModule(3, good.graded_dims, (good.action[0], ExactMatrix(second, q * d1), good.action[2]), good.top_trace)
    violation = validate_cup_square_zero(bad)
    assert violation is not None
    assert any(violation.value)
    assert bad.cup(violation.v, bad.cup(violation.v, violation.x, violation.k), violation.k + 1) == violation.value


def test_bad_tensor_shape():
    with pytest.raises(DimensionError):
        CupModule(2, (1, 2), (ExactMatrix.zeros(2, 3),))


def test_serre_pairing_on_w_is_zero():
    m = build_ample_divisor_canonical(3, 3)
    assert serre_pairing(m, e(0, m.dim(0))).is_zero()
    assert serre_pairing(m, e(1, m.dim(0))).is_zero()


def test_serre_pairing_on_one_form_kills_it():
    m = build_ample_divisor_canonical(3, 2)
    s = e(1, m.dim(0))  # the one-form e_0
    c = serre_pairing(m, s)
    assert c.is_skew()
    assert rank_fraction([[x.re for x in r] for r in c.entries]) == 2
    assert kernel_basis(c) == (e(0, 3),)


def test_serre_pairing_needs_surface_with_trace():
    with pytest.raises(WrongGrading):
        serre_pairing(build_koszul(3, 0), (1,))
    with pytest.raises(NoTrace):
        serre_pairing(CupModule(2, (1, 2, 1), build_koszul(2, 0).action, None), (1,))


def test_cup_with_section_columns():
    m = build_ample_divisor_canonical(3, 1)
    s = e(0, 3)
    mat = m.cup_with_section(s)
    for i in range(3):
        assert mat.column(i) == m.cup(e(i, 3), s, 0)


def test_descriptor_roundtrip_family():
    m = build_ample_divisor_canonical(4, 2)
    doc = json.loads(describe(m).to_json())
    assert doc["kind"] == "ample_divisor_canonical" and doc["schema_version"] == 1
    assert ModelDescriptor.from_dict(doc).build() == m


def test_descriptor_roundtrip_explicit():
    base = build_koszul(3, 0)
    explicit = CupModule(base.v_dim, base.graded_dims, base.action, base.top_trace)
    text = describe(explicit).to_json()
    rebuilt = ModelDescriptor.from_json(text).build()
    assert rebuilt == explicit


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "nope", "q": 3},
        {"kind": "koszul", "q": 0},
        {"kind": "explicit_tensors", "q": 2, "graded_dims": [1, 2]},
        {"kind": "explicit_tensors", "q": 2, "graded_dims": [1, 2], "tensors": [[["x", "0"]]]},
        [],
    ],
)
def test_descriptor_rejects_bad_documents(doc):
    with pytest.raises(ModelFormatError):
        ModelDescriptor.from_dict(doc).build()
