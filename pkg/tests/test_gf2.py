import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synthillation.errors import ParseError, RankError
from synthillation.gf2 import (
    BinaryMatrix,
    apply_cnots,
    cnot_circuit_from_invertible,
    complete_to_invertible,
    format_matrix,
    inverse,
    kernel_basis,
    kernel_weight_distribution,
    parse_matrix,
    rank,
    row_space,
    span,
)


@st.composite
def matrices(draw, max_rows=6, max_cols=8):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return BinaryMatrix(tuple(rows), c)


def random_invertible(n, rng):
    while True:
        m = BinaryMatrix.from_array(rng.integers(0, 2, (n, n)))
        if rank(m) == n:
            return m


def test_rank_examples():
    assert rank(BinaryMatrix.identity(3)) == 3
    assert rank(BinaryMatrix.zeros(2, 4)) == 0
    assert rank(BinaryMatrix.from_rows([[1, 1, 1, 1, 1]])) == 1


def test_kernel_examples():
    assert kernel_basis(BinaryMatrix.identity(2)) == []
    basis = kernel_basis(BinaryMatrix.from_rows([[1, 1, 1, 1]]))
    assert len(basis) == 3
    assert all(v.bit_count() % 2 == 0 for v in basis)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    basis = kernel_basis(m)
    assert rank(m) + len(basis) == m.ncols
    assert all(m.matvec(v) == 0 for v in basis)
    assert rank(BinaryMatrix(tuple(basis), m.ncols)) == len(basis)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_transpose_and_products(m):
    assert m.T.T == m
    for x in range(1 << min(m.nrows, 4)):
        # vecmat is x^T M, i.e. M^T x
        assert m.vecmat(x) == m.T.matvec(x)


def test_matmul_matches_numpy():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, (4, 5))
    b = rng.integers(0, 2, (5, 3))
    got = (BinaryMatrix.from_array(a) @ BinaryMatrix.from_array(b)).to_array()
    assert np.array_equal(got, (a @ b) % 2)


def test_complete_to_invertible():
    assert complete_to_invertible(BinaryMatrix.identity(4)) == BinaryMatrix.identity(4)
    j = complete_to_invertible(BinaryMatrix.from_rows([[1, 0]]))
    assert j.to_lists() == [[1, 0], [0, 1]]
    with pytest.raises(RankError):
        complete_to_invertible(BinaryMatrix.from_rows([[1, 1], [1, 1]]))


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=5, max_cols=7))
def test_completion_keeps_prefix(m):
    if rank(m) < m.nrows:
        return
    j = complete_to_invertible(m)
    assert j.rows[: m.nrows] == m.rows
    assert rank(j) == m.ncols


def test_cnot_circuit_small():
    assert cnot_circuit_from_invertible(BinaryMatrix.identity(3)) == []
    assert len(cnot_circuit_from_invertible(BinaryMatrix.from_rows([[1, 1], [0, 1]]))) == 1


@pytest.mark.parametrize("seed", range(5))
def test_cnot_replay_reproduces_transpose(seed):
    rng = np.random.default_rng(seed)
    j = random_invertible(6, rng)
    ops = cnot_circuit_from_invertible(j)
    for z in range(64):
        assert apply_cnots(ops, z) == j.T.matvec(z)


def test_inverse():
    rng = np.random.default_rng(7)
    j = random_invertible(5, rng)
    assert j @ inverse(j) == BinaryMatrix.identity(5)


def test_span_and_row_space():
    vecs = [0b011, 0b110]
    assert sorted(int(v) for v in span(vecs)) == [0, 0b011, 0b101, 0b110]
    m = BinaryMatrix((0b011, 0b110), 3)
    assert sorted(row_space(m)) == [0, 0b011, 0b101, 0b110]


def test_matrix_text_round_trip():
    m = BinaryMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    text = format_matrix(m)
    assert text.splitlines()[0] == "2 3"
    assert parse_matrix("# comment\n" + text) == m
    with pytest.raises(ParseError):
        parse_matrix("2 3\n1 0 1\n")
    with pytest.raises(ParseError):
        parse_matrix("1 3\n1 2 1\n")


@pytest.mark.parametrize("seed", range(6))
def test_kernel_distribution_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 11))
    h = BinaryMatrix.from_array(rng.integers(0, 2, (int(rng.integers(1, 4)), n)))
    brute = [0] * (n + 1)
    for e in range(1 << n):
        if h.matvec(e) == 0:
            brute[e.bit_count()] += 1
    assert kernel_weight_distribution(h) == brute


def test_kernel_distribution_of_empty_check():
    assert kernel_weight_distribution(BinaryMatrix.zeros(0, 5)) == [comb(5, w) for w in range(6)]


def test_parity_check_distribution():
    h = BinaryMatrix.from_rows([[1] * 4])
    assert kernel_weight_distribution(h) == [1, 0, 6, 0, 1]
    assert sum(1 for e in itertools.product([0, 1], repeat=4) if sum(e) % 2 == 0) == 8
