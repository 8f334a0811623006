"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary lines.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import replace
from fractions import Fraction

import pytest

from oracles import elliptic_lift_tails, pencil_det_coefficients
from paracanonical.core import ExactMatrix, GaussianRational, kernel_basis, pfaffian
from paracanonical.core import linalg
from paracanonical.cup import build_ample_divisor_canonical
from paracanonical.fixtures import elliptic, no_first_order, obstruct2, obstruct3, polynomial
from paracanonical.ledger import (
    HodgeVector,
    chi_and_gap,
    complete_intersection_invariants,
    double_cover_invariants,
    product_with_genus2_curve,
    sweep_parity,
)
from paracanonical.lifting import (
    ObstructionError,
    lift_full,
    second_order_step,
    solve_sigma,
    validate_model,
    verify_lift,
)
from paracanonical.strata import (
    SkewFamily,
    pencil_coefficient,
    pencil_root_multiplicity,
    rank_of_cup_s,
    sigma_polynomial,
)
from paracanonical.transversality import incidence_report, is_k_transversal, sample_directions

_capsys_holder: list = []


@pytest.fixture(autouse=True)
def _hold_capsys(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")
    _capsys_holder[:] = [capman]
    yield
    _capsys_holder.clear()


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    capman = _capsys_holder[0] if _capsys_holder else None
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)
    assert ok, line


def G(x) -> GaussianRational:
    return GaussianRational.coerce(x)


def rand_gauss(rng: random.Random, bound: int = 3) -> GaussianRational:
    return GaussianRational(Fraction(rng.randint(-bound, bound), rng.randint(1, 2)), rng.randint(-bound, bound))


def rand_skew(n: int, rng: random.Random) -> ExactMatrix:
    grid = [[GaussianRational(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = rand_gauss(rng)
            grid[i][j], grid[j][i] = x, -x
    return ExactMatrix(grid, n)


def rand_square(n: int, rng: random.Random) -> ExactMatrix:
    return ExactMatrix([[rand_gauss(rng) for _ in range(n)] for _ in range(n)], n)


def test_criterion_01_ample_transversality():
    linalg._rank_cached.cache_clear()
    start = time.perf_counter()
    failures = []
    for q in range(2, 8):
        for chi in range(1, 6):
            m = build_ample_divisor_canonical(q, chi)
            for v in sample_directions(q, 64, seed=1000 * q + chi):
                if not all(is_k_transversal(m, v, k) for k in range(1, m.n + 1)):
                    failures.append((q, chi, "k>=1", v))
                if m.dim(0) - m.cup_matrix(v, 0).rank() != chi:
                    failures.append((q, chi, "ker dim", v))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    report(1, ok, f"30 models x 64 directions, {len(failures)} failures, {elapsed:.2f}s (< 10s)")


def test_criterion_02_incidence_dimension():
    bad = []
    for q in range(2, 8):
        for chi in range(1, 6):
            r = incidence_report(build_ample_divisor_canonical(q, chi), sample_count=64, seed=q * 10 + chi)
            if r.dim_I_main != chi + q - 2:
                bad.append((q, chi, r.dim_I_main))
    report(2, not bad, f"dim_I_main = chi+q-2 on 30 models, mismatches {bad}")


def test_criterion_03_pfaffian_suite():
    start = time.perf_counter()
    rng = random.Random(3)
    squares = 0
    for k in range(200):
        n = 2 + k % 9
        m = rand_skew(n, rng)
        if pfaffian(m) ** 2 == m.det():
            squares += 1
    congruent = 0
    for k in range(50):
        n = 2 * (1 + k % 5)
        m, u = rand_skew(n, rng), rand_square(n, rng)
        if pfaffian(u.transpose() @ m @ u) == u.det() * pfaffian(m):
            congruent += 1
    degrees = 0
    for k in range(10):
        q = 4 if k % 2 == 0 else 6
        fam = SkewFamily(q, tuple(rand_skew(q, rng) for _ in range(3)))
        if sigma_polynomial(fam, sample_count=4, seed=k).degree == q // 2:
            degrees += 1
    elapsed = time.perf_counter() - start
    ok = squares == 200 and congruent == 50 and degrees == 10 and elapsed < 30
    report(3, ok, f"Pf^2=det {squares}/200, congruence {congruent}/50, degree q/2 {degrees}/10, {elapsed:.2f}s (< 30s)")


def _block_pencil(q: int, rng: random.Random):
    a = [[0] * q for _ in range(q)]
    for k in range(2, q, 2):
        a[k][k + 1], a[k + 1][k] = 1, -1
    c = rng.choice([0, 1, -2, 3, Fraction(1, 2), GaussianRational(1, 1)])
    b = [[GaussianRational(0)] * q for _ in range(q)]
    b[0][1], b[1][0] = G(c), -G(c)
    for i in range(2):
        for k in range(2, q):
            x = rand_gauss(rng)
            b[i][k], b[k][i] = x, -x
    for i in range(2, q):
        for k in range(i + 1, q):
            x = rand_gauss(rng)
            b[i][k], b[k][i] = x, -x
    det_c = G(c) * G(c)
    return ExactMatrix(a, q), ExactMatrix(b, q), det_c


def test_criterion_04_pencil_block_matrices():
    rng = random.Random(4)
    coeff_ok = mult_ok = nonzero = 0
    oracle_ok = 0
    for k in range(50):
        q = (4, 6, 8)[k % 3]
        a, b, det_c = _block_pencil(q, rng)
        if pencil_coefficient(a, b) == det_c:
            coeff_ok += 1
        if all(x.is_real() for row in b.entries for x in row):
            grid_a = [[x.re for x in row] for row in a.entries]
            grid_b = [[x.re for x in row] for row in b.entries]
            if pencil_det_coefficients(grid_a, grid_b)[2] == det_c.re:
                oracle_ok += 1
        else:
            oracle_ok += 1
        if det_c:
            nonzero += 1
            if pencil_root_multiplicity(a, b) == 1:
                mult_ok += 1
    ok = coeff_ok == 50 and mult_ok == nonzero and oracle_ok == 50
    report(4, ok, f"coefficient = det C {coeff_ok}/50, simple root {mult_ok}/{nonzero} with det C != 0")


def _point_on_sigma(q: int, rng: random.Random, corank: int):
    """A family of three generators and a point s with rank(c_s) = q - corank."""
    j = [[0] * q for _ in range(q)]
    for k in range(0, q - corank, 2):
        j[k][k + 1], j[k + 1][k] = 1, -1
    u = rand_square(q, rng)
    while not u.det():
        u = rand_square(q, rng)
    c0 = u.transpose() @ ExactMatrix(j, q) @ u
    a2, a3 = rand_skew(q, rng), rand_skew(q, rng)
    s = (G(rng.choice([1, 2, -1, GaussianRational(1, 1)])), rand_gauss(rng), rand_gauss(rng))
    a1 = (c0 - a2.scale(s[1]) - a3.scale(s[2])).scale(s[0].reciprocal())
    return SkewFamily(q, (a1, a2, a3)), s


def test_criterion_05_singular_locus():
    rng = random.Random(5)
    agree = 0
    on_sigma = 0
    for k in range(100):
        q = 4 if k % 2 == 0 else 6
        corank = 2 if k % 5 else 4
        fam, s = _point_on_sigma(q, rng, corank)
        pf = fam.pf_poly
        if pf.evaluate(s):
            continue
        on_sigma += 1
        gradient_zero = not any(g.evaluate(s) for g in pf.gradient())
        if gradient_zero == (rank_of_cup_s(fam, s) < q - 2):
            agree += 1
    ok = on_sigma == 100 and agree == 100
    report(5, ok, f"gradient test agrees with rank(c_s) < q-2 on {agree}/{on_sigma} points on Sigma")


def test_criterion_06_parity_sweep():
    sweep = sweep_parity(5, 6)
    ok = not sweep.counterexamples and sweep.seconds < 60
    report(6, ok, f"{sweep.checked} Hodge vectors, {len(sweep.counterexamples)} counterexamples, {sweep.seconds:.2f}s (< 60s)")


def test_criterion_07_ledger_golden_values():
    checks = {}
    checks["double cover q=3 gap -1"] = double_cover_invariants(0, 3, 1, 4, 0).gap == -1
    for n in (3, 4, 5):
        checks[f"general cover n={n} gap {2 - n}"] = double_cover_invariants(0, n, 1, 4, 0).gap == 2 - n
        checks[f"genus-2 product n={n} gap {1 - n}"] = product_with_genus2_curve(n).gap == 1 - n
    for pg in (0, 1, 5):
        checks[f"complete intersection pgY={pg}"] = complete_intersection_invariants(3, pg)[1] == pg
    surfaces = all(chi_and_gap(HodgeVector(2, (1, q, p)))[1] == 0 for q in range(9) for p in range(9))
    checks["surface gap 0"] = surfaces
    failed = [k for k, v in checks.items() if not v]
    report(7, not failed, f"{len(checks) - len(failed)}/{len(checks)} golden values, failed {failed}")


def test_criterion_08_elliptic_lift():
    start = time.perf_counter()
    m = elliptic(6)
    result = lift_full(m, 6)
    tails = tuple(result.tail(m, n)[0] for n in (1, 2, 3))
    literal = (G(1), G(Fraction(-1, 2)), G(Fraction(1, 6)))
    oracle = elliptic_lift_tails(6)
    oracle_ok = all(result.tail(m, n)[0] == G(oracle[n - 1]) for n in range(1, 7))
    verified = verify_lift(m, result) is None
    gauge_ok = True
    rng = random.Random(8)
    for n in range(2, 7):
        for vec in kernel_basis(m.r[n]):
            c = rand_gauss(rng) or G(1)
            taus = dict(result.taus)
            taus[n] = tuple(x + c * y for x, y in zip(taus[n], vec))
            gauge_ok &= verify_lift(m, replace(result, taus=taus)) is None
    elapsed = time.perf_counter() - start
    literal_ok = tails == literal
    ok = literal_ok and oracle_ok and verified and gauge_ok and elapsed < 1
    shown = ", ".join(str(t) for t in tails)
    report(
        8,
        ok,
        f"tails ({shown}) vs stated (1, -1/2, 1/6): {'match' if literal_ok else 'MISMATCH'}; "
        f"Laurent oracle {'match' if oracle_ok else 'mismatch'} (oracle r3 tau3 = {oracle[2]}); "
        f"verify {'pass' if verified else 'fail'}; gauge {'pass' if gauge_ok else 'fail'}; {elapsed:.3f}s (< 1s)",
    )


def test_criterion_09_obstructions():
    orders = []
    for fixture, N in ((obstruct2, 2), (obstruct3, 3)):
        try:
            lift_full(fixture(), N)
            orders.append(None)
        except ObstructionError as exc:
            orders.append(exc.order)
    transversality_broken = validate_model(obstruct2()) is not None
    ok = orders == [2, 3] and transversality_broken
    report(9, ok, f"obstruction orders {orders} (expected [2, 3]); obstruct2 breaks 1-transversality: {transversality_broken}")


def _validated_corpus():
    corpus = [("elliptic", elliptic(6), None), ("polynomial", polynomial(8), None)]
    poly = polynomial(8)
    base = solve_sigma(poly)
    for k, shift in enumerate((1, -2, Fraction(3, 2), GaussianRational(0, 1))):
        sigma = tuple(x + G(shift) * y for x, y in zip(base, poly.r[1].column(1)))
        corpus.append((f"polynomial gauge {k}", poly, sigma))
    for name, fx in (("obstruct2", obstruct2), ("obstruct3", obstruct3), ("no-first-order", no_first_order)):
        corpus.append((name, fx(), None))
    out = []
    for name, m, sigma in corpus:
        if validate_model(m) is not None:
            continue
        if sigma is None:
            sigma = solve_sigma(m)
            if not isinstance(sigma, tuple):
                continue
        out.append((name, m, sigma))
    return out


def test_criterion_10_second_order_checks():
    corpus = _validated_corpus()
    bad = []
    for name, m, sigma in corpus:
        step = second_order_step(m, sigma)
        if any(step.cup_v_obstruction) or any(step.corrected_obstruction):
            bad.append(name)
        lift_full(m, m.N, sigma=sigma)
    ok = bool(corpus) and not bad
    report(10, ok, f"{len(corpus)} validated fixtures, v cup d2(sigma^2) = 0 and corrected d2 = 0; violations {bad}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "--no-header"]))
