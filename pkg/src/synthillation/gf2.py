"""Dense GF(2) linear algebra on bit-packed rows.

A row (and any bit vector) is a Python ``int`` whose bit ``j`` holds entry ``j``.
Matrices in this package have at most a few hundred columns, so arbitrary
precision ints are both the packing and the arithmetic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, RankError, SearchTooLarge

BitVector = int


def bits_to_int(bits: Iterable[int]) -> int:
    value = 0
    for j, b in enumerate(bits):
        if b & 1:
            value |= 1 << j
    return value


def int_to_bits(value: int, length: int) -> list[int]:
    return [(value >> j) & 1 for j in range(length)]


def parity(value: int) -> int:
    return value.bit_count() & 1


@dataclass(frozen=True)
class BinaryMatrix:
    """Row-major GF(2) matrix; ``rows[i]`` packs row ``i`` into an int."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        if self.ncols < 0:
            raise ValueError("negative column count")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.ncols} columns")

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> BinaryMatrix:
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            if any(b not in (0, 1) for b in r):
                raise ValueError("entries must be 0 or 1")
        return cls(tuple(bits_to_int(r) for r in rows), ncols)

    @classmethod
    def from_array(cls, arr) -> BinaryMatrix:
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows((arr % 2).tolist(), arr.shape[1])

    @classmethod
    def identity(cls, n: int) -> BinaryMatrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BinaryMatrix:
        return cls((0,) * nrows, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> BinaryMatrix:
        """Build from packed columns (bit ``i`` of a column is row ``i``)."""
        rows = [0] * nrows
        for j, col in enumerate(columns):
            if col >> nrows:
                raise ValueError("column does not fit in the row count")
            for i in range(nrows):
                if (col >> i) & 1:
                    rows[i] |= 1 << j
        return cls(tuple(rows), len(columns))

    # views

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.ncols)]

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = int_to_bits(r, self.ncols)
        return out

    def to_lists(self) -> list[list[int]]:
        return [int_to_bits(r, self.ncols) for r in self.rows]

    # algebra

    def transpose(self) -> BinaryMatrix:
        return BinaryMatrix(tuple(self.columns()), self.nrows)

    @property
    def T(self) -> BinaryMatrix:
        return self.transpose()

    def matvec(self, v: int) -> int:
        """``M v`` for a packed vector of length ``ncols``; result has length ``nrows``."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def vecmat(self, x: int) -> int:
        """``M^T x``: XOR of the rows selected by ``x``."""
        out = 0
        i = 0
        while x:
            if x & 1:
                out ^= self.rows[i]
            x >>= 1
            i += 1
        return out

    def __matmul__(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return BinaryMatrix(tuple(other.vecmat(r) for r in self.rows), other.ncols)

    def vstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return BinaryMatrix(self.rows + other.rows, self.ncols)

    def hstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        shift = self.ncols
        return BinaryMatrix(
            tuple(a | (b << shift) for a, b in zip(self.rows, other.rows)),
            self.ncols + other.ncols,
        )

    def submatrix_rows(self, start: int, stop: int) -> BinaryMatrix:
        return BinaryMatrix(self.rows[start:stop], self.ncols)

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())


def _reduce(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    work = list(rows)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work, pivots


def rank(m: BinaryMatrix) -> int:
    return len(_reduce(list(m.rows), m.ncols)[1])


def kernel_basis(m: BinaryMatrix) -> list[int]:
    """Basis of ``{v : m v = 0}``, one packed vector per free column."""
    work, pivots = _reduce(list(m.rows), m.ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, pc in zip(work, pivots):
            if (row >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def row_space(m: BinaryMatrix) -> list[int]:
    """Every XOR combination of the rows, indexed by the selecting mask."""
    out = [0]
    for r in m.rows:
        out += [v ^ r for v in out]
    return out


def span(vectors: Sequence[int]) -> np.ndarray:
    """All 2^len combinations as uint64; requires every vector below 2^64."""
    out = np.zeros(1, dtype=np.uint64)
    for v in vectors:
        out = np.concatenate([out, out ^ np.uint64(v)])
    return out


def complete_to_invertible(g: BinaryMatrix) -> BinaryMatrix:
    """Append unit rows so that ``g`` becomes a square invertible matrix.

    The original rows are kept verbatim as the leading block. Added rows are
    unit vectors on the non-pivot columns of ``g``, scanned in ascending order.
    """
    if g.nrows > g.ncols:
        raise RankError("more rows than columns")
    _, pivots = _reduce(list(g.rows), g.ncols)
    if len(pivots) != g.nrows:
        raise RankError(f"matrix has rank {len(pivots)} < {g.nrows} rows")
    pivot_set = set(pivots)
    extra = tuple(1 << j for j in range(g.ncols) if j not in pivot_set)
    return BinaryMatrix(g.rows + extra, g.ncols)


def cnot_circuit_from_invertible(j: BinaryMatrix) -> list[tuple[int, int]]:
    """CNOT list (control, target) whose action on basis states is ``z -> J^T z``.

    Gaussian elimination reduces ``J^T`` to the identity with row additions
    ``row[t] ^= row[c]``; each is a CNOT(c, t) and is self-inverse, so the
    circuit is the elimination sequence replayed backwards.
    """
    n = j.nrows
    if j.ncols != n:
        raise RankError("matrix is not square")
    work = list(j.transpose().rows)
    ops: list[tuple[int, int]] = []

    def add(target: int, control: int) -> None:
        work[target] ^= work[control]
        ops.append((control, target))

    for col in range(n):
        bit = 1 << col
        if not work[col] & bit:
            src = next((i for i in range(col + 1, n) if work[i] & bit), None)
            if src is None:
                raise RankError("matrix is singular")
            add(col, src)
        for i in range(n):
            if i != col and work[i] & bit:
                add(i, col)
    ops.reverse()
    return ops


def apply_cnots(ops: Iterable[tuple[int, int]], z: int) -> int:
    for c, t in ops:
        if (z >> c) & 1:
            z ^= 1 << t
    return z


def inverse(j: BinaryMatrix) -> BinaryMatrix:
    n = j.nrows
    if j.ncols != n:
        raise RankError("matrix is not square")
    aug = [r | (1 << (n + i)) for i, r in enumerate(j.rows)]
    work, pivots = _reduce(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise RankError("matrix is singular")
    return BinaryMatrix(tuple(r >> n for r in work), n)


# text format: "rows cols" then one line of space-separated bits per row


def format_matrix(m: BinaryMatrix) -> str:
    lines = [f"{m.nrows} {m.ncols}"]
    lines += [" ".join(str(b) for b in row) for row in m.to_lists()]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> BinaryMatrix:
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty matrix file")
    head_no, head = lines[0]
    try:
        nrows, ncols = (int(t) for t in head.split())
    except ValueError:
        raise ParseError("expected header 'rows cols'", head_no) from None
    body = lines[1:]
    if len(body) != nrows:
        raise ParseError(f"expected {nrows} rows, found {len(body)}", head_no)
    rows = []
    for no, ln in body:
        toks = ln.split()
        if len(toks) != ncols or any(t not in ("0", "1") for t in toks):
            raise ParseError(f"expected {ncols} entries of 0/1", no)
        rows.append([int(t) for t in toks])
    return BinaryMatrix.from_rows(rows, ncols)


def krawtchouk(n: int, w: int, i: int) -> int:
    """``K_w(i) = sum_j (-1)^j C(i, j) C(n - i, w - j)``."""
    return sum((-1) ** j * comb(i, j) * comb(n - i, w - j) for j in range(0, min(i, w) + 1))


@functools.lru_cache(maxsize=4096)
def _krawtchouk_row(n: int, i: int) -> tuple[int, ...]:
    """``(K_0(i), ..., K_n(i))``: coefficients of ``(1 - z)^i (1 + z)^(n - i)``."""
    minus = [(-1) ** j * comb(i, j) for j in range(i + 1)]
    plus = [comb(n - i, j) for j in range(n - i + 1)]
    return tuple(int(v) for v in np.convolve(np.array(minus, dtype=object), np.array(plus, dtype=object)))


def kernel_weight_distribution(h: BinaryMatrix) -> list[int]:
    """Number of vectors of each weight in ``{e : h e = 0}``.

    MacWilliams transform of the row space of ``h``: enumerating its
    ``2^rows`` combinations is cheap even when the kernel is huge. Duplicated
    combinations from dependent rows cancel against the ``2^rows`` divisor.
    """
    n = h.ncols
    if h.nrows > 24:
        raise SearchTooLarge(f"row space of {h.nrows} rows is too large to enumerate")
    counts: dict[int, int] = {}
    for v in row_space(h):
        wt = v.bit_count()
        counts[wt] = counts.get(wt, 0) + 1
    acc = [0] * (n + 1)
    for i, c in counts.items():
        for w, kv in enumerate(_krawtchouk_row(n, i)):
            acc[w] += c * kv
    total = 1 << h.nrows
    dist = []
    for a in acc:
        q, r = divmod(a, total)
        assert r == 0
        dist.append(q)
    return dist
