from fractions import Fraction

import numpy as np
import pytest
import sympy

from synthillation.codes import build_ccz_code, build_code, build_general_code, check_quasitransversal
from synthillation.errors import SearchTooLarge
from synthillation.polynomial import WeightedPolynomial, parse_polynomial
from synthillation.protocol import (
    Mode,
    NoiseModel,
    analyze,
    classify,
    error_out,
    failure_polynomial,
    logical_phase_error,
    loglog_slope,
    monte_carlo,
    output_marginal_errors,
    series_divide,
    simulate_statevector,
    success_polynomial,
    success_prob,
    target_state,
)
from synthillation.statevector import equal_up_to_phase

CCZ_CODE = build_ccz_code(parse_polynomial("4*x1*x2*x3"))
BH2 = build_general_code(parse_polynomial("x1 + x2"))


def brute_stats(code, eps):
    p_acc = p_bad = Fraction(0)
    for e in range(1 << code.n):
        w = e.bit_count()
        p = eps**w * (1 - eps) ** (code.n - w)
        if code.S.matvec(e) == 0:
            p_acc += p
            if code.K.matvec(e):
                p_bad += p
    return p_acc, p_bad / p_acc


@pytest.mark.parametrize("code", [CCZ_CODE, BH2], ids=["ccz", "bh2"])
def test_exact_matches_enumeration(code):
    eps = Fraction(1, 37)
    p, q = brute_stats(code, eps)
    assert success_prob(code, eps) == p
    assert error_out(code, eps) == q


def test_ccz_closed_form():
    e = sympy.symbols("e")
    closed = sympy.Poly(sympy.expand((1 + (1 - 2 * e) ** 8) / 2), e)
    assert success_polynomial(CCZ_CODE) == [int(c) for c in reversed(closed.all_coeffs())]
    assert success_polynomial(CCZ_CODE)[:3] == [1, -8, 56]


def test_ccz_leading_error_count():
    # weight-2 even-parity vectors outside ker(K): all 28 pairs
    pairs = sum(1 for e in range(256) if e.bit_count() == 2 and CCZ_CODE.K.matvec(e))
    assert pairs == 28
    assert series_divide(failure_polynomial(CCZ_CODE), success_polynomial(CCZ_CODE), 3) == [0, 0, 28, 56]


def test_bravyi_haah_leading_coefficient():
    coeffs = series_divide(failure_polynomial(BH2), success_polynomial(BH2), 2)
    assert coeffs == [0, 0, 7]


def test_zero_noise():
    for code in (CCZ_CODE, BH2):
        assert success_prob(code, 0.0) == 1.0
        assert error_out(code, 0.0) == 0.0
        rep = analyze(code, 0.0)
        assert rep.expected_cost == code.n
    mc = monte_carlo(CCZ_CODE, 0.0, 1000)
    assert (mc.p_suc, mc.eps_out) == (1.0, 0.0)


def test_series_agrees_with_exact_expansion():
    e = sympy.symbols("e")
    for code in (CCZ_CODE, BH2):
        p = sum(c * e**i for i, c in enumerate(success_polynomial(code)))
        f = sum(c * e**i for i, c in enumerate(failure_polynomial(code)))
        taylor = sympy.Poly(sympy.series(f / p, e, 0, 5).removeO(), e)
        expected = [int(c) for c in reversed(taylor.all_coeffs())]
        expected += [0] * (5 - len(expected))
        assert series_divide(failure_polynomial(code), success_polynomial(code), 4) == expected
        rep = analyze(code, 1e-3, "series:4")
        assert rep.eps_out == pytest.approx(error_out(code, 1e-3), rel=1e-6)


def test_first_order_success_series():
    for text in ("4*x1*x2*x3", "x1", "x2 + 2*x1*x2 + 4*x1*x3*x4"):
        code = build_code(parse_polynomial(text))
        assert success_polynomial(code)[:2] == [1, -code.n]


def test_slope_and_small_eps_precision():
    assert loglog_slope(CCZ_CODE) == pytest.approx(2.0, rel=0.05)
    # no cancellation at tiny eps: eps_out / eps^2 tends to 28
    assert error_out(CCZ_CODE, 1e-9) / 1e-18 == pytest.approx(28, rel=1e-6)


def test_expected_cost_limit():
    assert analyze(BH2, 1e-8).expected_cost == pytest.approx(BH2.n, rel=1e-6)


def test_marginal_errors_bound_block_error():
    eps = 1e-2
    marg = output_marginal_errors(BH2, eps)
    block = error_out(BH2, eps)
    assert max(marg) <= block <= sum(marg) + 1e-15


def test_mode_parsing():
    assert str(Mode.parse("series:2")) == "series:2"
    assert Mode.parse("mc:1000").samples == 1000
    for bad in ("series", "mc:0", "foo", "series:x"):
        with pytest.raises(ValueError):
            Mode.parse(bad)
    with pytest.raises(ValueError):
        NoiseModel(0.6)


def test_monte_carlo_is_reproducible():
    a = monte_carlo(BH2, 0.05, 20000, seed=3)
    b = monte_carlo(BH2, 0.05, 20000, seed=3)
    assert a == b
    assert abs(a.p_suc - success_prob(BH2, 0.05)) < 4 * a.p_suc_stderr


def test_classification_matches_statevector_ccz():
    for e in range(1 << CCZ_CODE.n):
        out = simulate_statevector(CCZ_CODE, e)
        cls = classify(CCZ_CODE, e)
        assert out.accepted == (cls != "rejected")
        if out.accepted:
            assert out.correct == (cls == "accepted-correct")


def test_accepted_fault_output_is_z_of_ke():
    code = CCZ_CODE
    e = 0b11
    assert classify(code, e) == "accepted-faulty"
    out = simulate_statevector(code, e)
    ke = code.K.matvec(e)
    idx = np.arange(1 << code.k)
    signs = np.where(np.bitwise_count((idx & ke).astype(np.uint64)) & 1, -1, 1)
    assert equal_up_to_phase(out.output, signs * target_state(code))


def test_single_injections_rejected_bh2():
    for i in range(BH2.n):
        assert not simulate_statevector(BH2, 1 << i).accepted
    run = simulate_statevector(BH2, 0)
    assert run.accepted and run.correct


def test_logical_phase():
    assert logical_phase_error(CCZ_CODE) < 1e-10
    assert logical_phase_error(BH2) < 1e-10
    # dropping the Clifford correction breaks the phase for the CCZ code
    corr = check_quasitransversal(CCZ_CODE)
    bare = type(corr)((0,) * corr.num_wires, ())
    assert logical_phase_error(CCZ_CODE, bare) > 0.1


def test_statevector_size_limit():
    code = build_general_code(WeightedPolynomial(4, tuple((1 << i, 1) for i in range(4))))
    with pytest.raises(SearchTooLarge):
        simulate_statevector(code, 0)
