import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import d3_polys
from synthillation.errors import NotInD3Error, ParseError
from synthillation.polynomial import (
    PhasePolynomial,
    WeightedPolynomial,
    clifford_equivalent,
    evaluate,
    evaluate_phase,
    format_polynomial,
    is_clifford,
    mobius_expand,
    parse_polynomial,
    phase_to_weighted,
    weighted_from_table,
    weighted_to_phase,
)

CCZ = parse_polynomial("4*x1*x2*x3")
# x1 + x2 + x3 + (x1^x2^x3) + 7(x1^x2) + 7(x2^x3) + 7(x1^x3)
CCZ_EXPANSION = PhasePolynomial.from_dict(3, {1: 1, 2: 1, 4: 1, 7: 1, 3: 7, 6: 7, 5: 7})


@st.composite
def phase_polys(draw, max_vars=5):
    k = draw(st.integers(1, max_vars))
    terms = draw(st.dictionaries(st.integers(1, (1 << k) - 1), st.integers(0, 7), max_size=12))
    return PhasePolynomial.from_dict(k, terms)


def test_evaluate_examples():
    assert evaluate(CCZ, 0b111) == 4
    f = parse_polynomial("x2 + 2*x1*x2 + 4*x1*x3*x4")
    assert evaluate(f, (1, 1, 0, 0)) == 3
    g = parse_polynomial("3 + x1", 2)
    assert evaluate(g, 0) == 3


def test_evaluate_phase_examples():
    assert evaluate_phase(CCZ_EXPANSION, 0b111) == 4
    assert all(evaluate_phase(PhasePolynomial(3), x) == 0 for x in range(8))
    p = PhasePolynomial.from_dict(2, {0b11: 1})
    assert [evaluate_phase(p, x) for x in range(4)] == [0, 1, 1, 0]


def test_d3_weights_enforced():
    with pytest.raises(NotInD3Error):
        WeightedPolynomial(2, ((0b11, 1),))
    with pytest.raises(NotInD3Error):
        WeightedPolynomial(3, ((0b111, 2),))
    with pytest.raises(NotInD3Error):
        WeightedPolynomial(4, ((0b1111, 4),))
    with pytest.raises(ValueError):
        WeightedPolynomial(2, ((0b100, 1),))


def test_mobius_examples():
    xor_table = [0, 1, 1, 0]
    assert mobius_expand(xor_table) == {1: 1, 2: 1, 3: 6}
    assert mobius_expand({0: 0, 1: 1, 2: 1, 3: 0}) == {1: 1, 2: 1, 3: 6}
    with pytest.raises(ValueError):
        mobius_expand([0, 1, 2])


def test_mobius_of_ccz_synthesis_matrix():
    # |A^T x| for the seven-column CCZ matrix
    table = [sum((u & x).bit_count() & 1 for u in range(1, 8)) for x in range(8)]
    f = weighted_from_table(table)
    assert clifford_equivalent(f, CCZ)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 8), st.data())
def test_mobius_inverts_evaluation(m, data):
    coeffs = data.draw(st.dictionaries(st.integers(0, (1 << m) - 1), st.integers(1, 7), max_size=20))
    table = [sum(c for s, c in coeffs.items() if s & x == s) % 8 for x in range(1 << m)]
    assert mobius_expand(table) == coeffs


@settings(max_examples=100, deadline=None)
@given(d3_polys())
def test_table_round_trip(f):
    assert weighted_from_table(f.truth_table(), f.num_vars) == f


def test_weighted_to_phase_ccz():
    assert weighted_to_phase(CCZ) == CCZ_EXPANSION
    assert weighted_to_phase(parse_polynomial("x2")).terms == ((2, 1),)


def test_weighted_to_phase_quadratic_pointwise():
    f = parse_polynomial("2*x1*x2")
    p = weighted_to_phase(f)
    assert dict(p.terms) == {1: 1, 2: 1, 3: 7}
    assert all(evaluate_phase(p, x) == evaluate(f, x) for x in range(4))


def test_phase_to_weighted_examples():
    assert clifford_equivalent(phase_to_weighted(CCZ_EXPANSION), CCZ)
    assert phase_to_weighted(PhasePolynomial.from_dict(2, {2: 1})) == parse_polynomial("x2")
    doubled = CCZ_EXPANSION.scale(2)
    assert is_clifford(phase_to_weighted(doubled))


@settings(max_examples=200, deadline=None)
@given(d3_polys())
def test_conversion_round_trip(f):
    p = weighted_to_phase(f)
    back = phase_to_weighted(p)
    assert back == f
    for x in range(1 << f.num_vars):
        assert evaluate_phase(p, x) == evaluate(f, x) == evaluate(back, x)


@settings(max_examples=200, deadline=None)
@given(phase_polys())
def test_phase_to_weighted_pointwise(p):
    f = phase_to_weighted(p)
    assert all(evaluate(f, x) == evaluate_phase(p, x) for x in range(1 << p.num_vars))


@settings(max_examples=100, deadline=None)
@given(phase_polys())
def test_reduction_mod_2_is_clifford_equivalent(p):
    assert clifford_equivalent(phase_to_weighted(p), phase_to_weighted(p.reduce_mod2()))


def test_is_clifford_examples():
    assert is_clifford(parse_polynomial("2*x1 + 4*x1*x2"))
    assert not is_clifford(parse_polynomial("x1"))
    assert not is_clifford(CCZ)
    assert is_clifford(WeightedPolynomial.zero(0))


def test_clifford_equivalent_examples():
    x1, x2 = parse_polynomial("x1", 2), parse_polynomial("x2", 2)
    assert clifford_equivalent(CCZ, CCZ)
    assert clifford_equivalent(x1, parse_polynomial("3*x1", 2))
    assert not clifford_equivalent(x1, x2)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_clifford_equivalence_is_equivalence_relation(data):
    k = data.draw(st.integers(1, 4))
    f, g, h = (data.draw(d3_polys(max_vars=k)).extend(4) for _ in range(3))
    assert clifford_equivalent(f, f)
    assert clifford_equivalent(f, g) == clifford_equivalent(g, f)
    if clifford_equivalent(f, g) and clifford_equivalent(g, h):
        assert clifford_equivalent(f, h)
    # force a chain through the Clifford shift
    shift = data.draw(d3_polys(max_vars=k)).extend(4) * 2
    assert clifford_equivalent(f, f + shift)


def test_text_round_trip():
    f = parse_polynomial("x2 + 2*x1*x2 + 4*x1*x3*x4")
    assert format_polynomial(f) == "4*x1*x3*x4 + 2*x1*x2 + x2"
    assert parse_polynomial(format_polynomial(f)) == f
    assert parse_polynomial("-x1") == parse_polynomial("7*x1")
    assert format_polynomial(WeightedPolynomial.zero(2)) == "0"


@pytest.mark.parametrize("bad", ["", "x0", "x1*x1", "2x1x2", "3*x1*x2", "x1 ++ x2", "y1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_polynomial(bad)


def test_parse_rejects_undeclared_variable():
    with pytest.raises(ParseError):
        parse_polynomial("x3", 2)
