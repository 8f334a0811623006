import json
from dataclasses import replace
from fractions import Fraction

import pytest

from oracles import elliptic_lift_tails
from paracanonical.core import ExactMatrix, GaussianRational, kernel_basis
from paracanonical.fixtures import LIFT_FIXTURES, elliptic, no_first_order, obstruct2, obstruct3, polynomial
from paracanonical.lifting import (
    AxiomViolation,
    Mismatch,
    ModelAxiomError,
    ModelFormatError,
    NoFirstOrderDeformation,
    ObstructionError,
    SectionAlgebraModel,
    exp_coefficients,
    exp_coefficients_by_powers,
    higher_order_step,
    lift_full,
    second_order_step,
    solve_sigma,
    validate_model,
    verify_lift,
)


def G(x, y=0):
    return GaussianRational(x, y)


def zero_model():
    empty = ExactMatrix([], 0)
    return SectionAlgebraModel(1, (0,), (0,), (0, 0), 0, {1: empty}, {1: empty}, {1: empty}, empty, empty, {}, (), ())


def test_validate_fixtures():
    assert validate_model(elliptic()) is None
    assert validate_model(polynomial()) is None
    assert validate_model(zero_model()) is None


def test_validate_detects_exactness_at_h1_0():
    bad = replace(no_first_order(), mult_s={1: ExactMatrix([[0]])})
    violation = validate_model(bad)
    assert isinstance(violation, AxiomViolation)
    assert violation.which == "exactness at H1_0"


def test_validate_reports_transversality_separately():
    assert validate_model(obstruct2()).which == "1-transversality of v"
    assert validate_model(obstruct2(), require_transversality=False) is None


def test_solve_sigma():
    assert solve_sigma(elliptic()) == (G(1),)
    assert isinstance(solve_sigma(no_first_order()), NoFirstOrderDeformation)
    assert solve_sigma(replace(elliptic(), direction=(G(0),))) == (G(0),)


def test_second_order_elliptic():
    m = elliptic()
    step = second_order_step(m, (1,))
    assert step.obstruction == () and not any(step.xi)
    assert m.r[2].apply(step.tau) == (G(Fraction(-1, 2)),)
    # basis of S_2 is (1, P): tau_2 = -P/2 up to constants
    assert step.tau[1] == G(Fraction(-1, 2))
    zero = second_order_step(replace(m, direction=(G(0),)), (0,))
    assert not any(zero.tau)


def test_second_order_polynomial_corrects_sigma():
    m = polynomial()
    step = second_order_step(m, solve_sigma(m))
    assert any(step.obstruction)
    assert not any(step.cup_v_obstruction)
    assert not any(step.corrected_obstruction)
    assert step.sigma == (G(1), G(-1))


def test_second_order_obstruction():
    with pytest.raises(ObstructionError) as exc:
        second_order_step(obstruct2(), solve_sigma(obstruct2()))
    assert exc.value.order == 2


def test_higher_order_elliptic_against_laurent_oracle():
    m = elliptic()
    tails = elliptic_lift_tails(6)
    sigma = (G(1),)
    taus = {2: second_order_step(m, sigma).tau}
    step = higher_order_step(m, sigma, taus, 3)
    assert m.r[3].apply(step.tau) == (G(tails[2]),)
    # S_3 basis is (1, P, P'); the oracle's tail 1/3 is carried by -P'/6
    assert step.tau == (G(0), G(0), G(Fraction(-1, 6)))


def test_higher_order_zero_sigma():
    m = replace(elliptic(), direction=(G(0),))
    result = lift_full(m, 6)
    assert all(not any(t) for t in result.taus.values())


def test_higher_order_obstruction_at_three():
    with pytest.raises(ObstructionError) as exc:
        lift_full(obstruct3(), 3)
    assert exc.value.order == 3
    # order 2 on its own goes through
    assert lift_full(obstruct3(), 2).order_achieved == 2


def test_higher_order_range():
    with pytest.raises(ValueError):
        higher_order_step(elliptic(3), (1,), {}, 2)


def test_elliptic_tails_match_oracle_to_order_six():
    m = elliptic(6)
    result = lift_full(m, 6)
    oracle = elliptic_lift_tails(6, g2=1, g3=-2)
    assert [result.tail(m, n)[0] for n in range(1, 7)] == [G(x) for x in oracle]


def test_polynomial_lifts_to_eight():
    m = polynomial(8)
    result = lift_full(m, 8)
    assert result.order_achieved == 8
    assert verify_lift(m, result) is None
    orders = [entry for entry in result.trace if entry["order"] >= 3]
    assert all(not any(entry["obstruction"]) for entry in orders)


def test_no_first_order_raises():
    with pytest.raises(NoFirstOrderDeformation):
        lift_full(no_first_order(), 1)


def test_lift_rejects_structural_violation():
    bad = replace(no_first_order(), mult_s={1: ExactMatrix([[0]])})
    with pytest.raises(ModelAxiomError):
        lift_full(bad, 1)


def test_lift_rejects_bad_sigma():
    with pytest.raises(ValueError):
        lift_full(elliptic(), 2, sigma=(2,))


def test_verify_detects_perturbation_outside_kernel():
    m = elliptic(4)
    result = lift_full(m, 4)
    taus = dict(result.taus)
    taus[2] = (taus[2][0], taus[2][1] + 1)
    mismatch = verify_lift(m, replace(result, taus=taus))
    assert isinstance(mismatch, Mismatch) and mismatch.order == 2


def test_verify_accepts_gauge_inside_kernel():
    m = elliptic(4)
    result = lift_full(m, 4)
    for vec in kernel_basis(m.r[3]):
        taus = dict(result.taus)
        taus[3] = tuple(a + G(5) * b for a, b in zip(taus[3], vec))
        assert verify_lift(m, replace(result, taus=taus)) is None


def test_exp_recurrence_matches_power_sum():
    m = polynomial(6)
    result = lift_full(m, 6)
    tails = {n: result.tail(m, n) for n in range(1, 7)}
    assert exp_coefficients(m, tails, 6) == exp_coefficients_by_powers(m, tails, 6)


def test_lift_is_deterministic():
    a = lift_full(polynomial(8), 8).to_json()
    b = lift_full(polynomial(8), 8).to_json()
    assert a == b
    assert json.loads(a)["normalization"] == "exp"


def test_model_json_roundtrip():
    for name, build in LIFT_FIXTURES.items():
        m = build()
        again = SectionAlgebraModel.from_json(m.to_json())
        assert again.to_json() == m.to_json(), name


def test_model_shape_errors():
    doc = json.loads(elliptic(2).to_json())
    doc["dims"]["Q"] = [1, 2]
    with pytest.raises(ModelFormatError):
        SectionAlgebraModel.from_dict(doc)
    with pytest.raises(ModelFormatError):
        SectionAlgebraModel.from_dict({"N": 1})
