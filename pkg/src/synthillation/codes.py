"""F-quasitransversal codes ``G = (K / S)`` and their Clifford corrections.

The code on ``n = cols(G)`` qubits has logical states
``|x_L> ~ sum_y |K^T x + S^T y>``. It is F-quasitransversal when transversal T
followed by a diagonal Clifford acts as ``U_F`` on the code space, which holds
iff ``|K^T x + S^T y| - F(x)`` is a Clifford phase function of ``(x, y)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import (
    CodeConstructionError,
    NotHomogeneousCubic,
    NotQuasitransversal,
    ParseError,
    SearchTooLarge,
)
from .gf2 import (
    BinaryMatrix,
    cnot_circuit_from_invertible,
    complete_to_invertible,
    format_matrix,
    kernel_basis,
    kernel_weight_distribution,
    parse_matrix,
    rank,
    row_space,
    span,
)
from .polynomial import WeightedPolynomial, format_polynomial, mobius_expand, parse_polynomial
from .synthesis import SynthesisMatrix, decompose_vw, t_count

MAX_CHECK_WIRES = 16
MAX_SPAN_DIM = 26
_SPAN_CHUNK_DIM = 20

# S block of the general construction, one row per stabilizer, indexed by
# column group: A, B, B, c, c, c, c, 0, 0, 0, 0
_GENERAL_S = (
    (1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1),
    (1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1),
    (0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1),
)


@dataclass(frozen=True)
class CliffordCorrection:
    """Diagonal Clifford on the ``k + s`` unencoded wires: ``prod S_i^{s_i} prod CZ_ij``."""

    s_exponents: tuple[int, ...]
    cz_pairs: tuple[tuple[int, int], ...] = ()

    @property
    def num_wires(self) -> int:
        return len(self.s_exponents)

    def polynomial(self) -> WeightedPolynomial:
        """The phase ``2 F~(x, y)`` as a weighted polynomial."""
        terms = [(1 << i, 2 * e) for i, e in enumerate(self.s_exponents)]
        terms += [((1 << i) | (1 << j), 4) for i, j in self.cz_pairs]
        return WeightedPolynomial(self.num_wires, tuple(terms))

    def phase_exponents(self, wires: np.ndarray) -> np.ndarray:
        """Exponent of omega for each packed wire assignment in ``wires``."""
        wires = np.asarray(wires, dtype=np.int64)
        out = np.zeros(wires.shape, dtype=np.int64)
        for i, e in enumerate(self.s_exponents):
            out += 2 * e * ((wires >> i) & 1)
        for i, j in self.cz_pairs:
            out += 4 * (((wires >> i) & 1) & ((wires >> j) & 1))
        return out % 8

    def to_json(self) -> dict:
        return {
            "s_exponents": list(self.s_exponents),
            "cz_pairs": [[i, j] for i, j in self.cz_pairs],
        }


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    d: int

    def __str__(self) -> str:
        return f"[[{self.n},{self.k},{self.d}]]"


@dataclass(frozen=True)
class CodeSpec:
    g: BinaryMatrix
    k: int
    target: WeightedPolynomial
    tau: int | None = None
    mu: int | None = None
    correction: CliffordCorrection | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.k <= self.g.nrows:
            raise CodeConstructionError(f"k={self.k} outside [0, {self.g.nrows}]")
        if self.target.num_vars != self.k:
            raise CodeConstructionError(
                f"target has {self.target.num_vars} variables but the code has k={self.k}"
            )
        if rank(self.g) != self.g.nrows:
            raise CodeConstructionError("G is not of full row rank")

    @property
    def n(self) -> int:
        return self.g.ncols

    @property
    def s(self) -> int:
        return self.g.nrows - self.k

    @property
    def K(self) -> BinaryMatrix:
        return self.g.submatrix_rows(0, self.k)

    @property
    def S(self) -> BinaryMatrix:
        return self.g.submatrix_rows(self.k, self.g.nrows)

    @property
    def delta(self) -> int | None:
        if self.tau is None or self.mu is None:
            return None
        return self.n - self.tau - 2 * self.mu

    def with_correction(self, correction: CliffordCorrection) -> CodeSpec:
        return CodeSpec(self.g, self.k, self.target, self.tau, self.mu, correction)


def _monomial(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def residual_coefficients(code: CodeSpec) -> dict[int, int]:
    """Multilinear coefficients of ``|K^T x + S^T y| - F(x)`` over the wires ``(x, y)``."""
    wires = code.k + code.s
    if wires > MAX_CHECK_WIRES:
        raise SearchTooLarge(f"checker truth table needs 2^{wires} entries (limit 2^{MAX_CHECK_WIRES})")
    weights = np.array([v.bit_count() for v in row_space(code.g)], dtype=np.int64)
    f_table = code.target.truth_table()
    idx = np.arange(1 << wires, dtype=np.int64)
    return mobius_expand(weights - f_table[idx & ((1 << code.k) - 1)])


def check_quasitransversal(code: CodeSpec) -> CliffordCorrection:
    """Return the Clifford correction, or raise :class:`NotQuasitransversal`.

    With ``D = |K^T x + S^T y| - F(x)`` expanded multilinearly mod 8, the code
    is accepted iff every non-constant coefficient of degree ``d`` is divisible by
    ``2^d`` (so ``D`` is Clifford); the correction then supplies ``-D``.
    """
    coeffs = residual_coefficients(code)
    for mask in sorted(coeffs, key=lambda m: (m.bit_count(), m)):
        deg = mask.bit_count()
        if deg and coeffs[mask] % (1 << deg):
            raise NotQuasitransversal(_monomial(mask), coeffs[mask])
    wires = code.k + code.s
    s_exp = tuple((-coeffs.get(1 << i, 0) // 2) % 4 for i in range(wires))
    cz = tuple(
        (i, j)
        for i in range(wires)
        for j in range(i + 1, wires)
        if (coeffs.get((1 << i) | (1 << j), 0) // 4) % 2
    )
    return CliffordCorrection(s_exp, cz)


def is_quasitransversal(code: CodeSpec) -> bool:
    try:
        check_quasitransversal(code)
    except NotQuasitransversal:
        return False
    return True


def _finish(code: CodeSpec) -> CodeSpec:
    if code.k + code.s <= MAX_CHECK_WIRES:
        return code.with_correction(check_quasitransversal(code))
    return code


def _stack(k: int, blocks: list[BinaryMatrix]) -> BinaryMatrix:
    out = BinaryMatrix.zeros(k, 0)
    for b in blocks:
        out = out.hstack(b)
    return out


def build_ccz_code(f: WeightedPolynomial, mode: str = "auto") -> CodeSpec:
    """``G = (A / 1^T)`` with ``A`` an optimal synthesis matrix padded to even width."""
    if not f.is_homogeneous_cubic():
        raise NotHomogeneousCubic(f"{format_polynomial(f)} has non-cubic terms")
    rep = t_count(f, mode)
    a = rep.matrix().padded_to_even()
    n = a.width
    g = a.matrix.vstack(BinaryMatrix(((1 << n) - 1,), n))
    if rank(g) != g.nrows:
        raise CodeConstructionError(
            f"G for {format_polynomial(f)} is rank deficient; every variable must carry non-Clifford action"
        )
    return _finish(CodeSpec(g, f.num_vars, f, rep.tau, 0))


def build_general_code(f: WeightedPolynomial, mode: str = "auto") -> CodeSpec:
    """``K = [A | B | B | c c c c | 0 0 0 0]`` over the fixed three-row ``S`` block.

    ``A`` synthesizes ``F``, ``B`` synthesizes the remainder ``V`` of the
    ``U_F = V W`` split, and ``c`` marks the variables with odd linear
    coefficient. ``A`` and ``B`` are zero-padded to even width.
    """
    k = f.num_vars
    rep = t_count(f, mode)
    vw = decompose_vw(f, mode)
    a = rep.matrix().padded_to_even()
    b = SynthesisMatrix(vw.v_report.matrix().matrix).padded_to_even()
    c = 0
    for (i,), coeff in f.linear.items():
        if coeff & 1:
            c |= 1 << i
    c_col = BinaryMatrix.from_columns([c], k)
    z_col = BinaryMatrix.zeros(k, 1)
    blocks = [a.matrix, b.matrix, b.matrix] + [c_col] * 4 + [z_col] * 4
    kmat = _stack(k, blocks)
    widths = [blk.ncols for blk in blocks]
    s_rows = []
    for pattern in _GENERAL_S:
        row = 0
        offset = 0
        for bit, w in zip(pattern, widths):
            if bit:
                row |= ((1 << w) - 1) << offset
            offset += w
        s_rows.append(row)
    g = kmat.vstack(BinaryMatrix(tuple(s_rows), kmat.ncols))
    if rank(g) != g.nrows:
        raise CodeConstructionError(
            f"G for {format_polynomial(f)} is rank deficient; every variable must carry non-Clifford action"
        )
    return _finish(CodeSpec(g, k, f, rep.tau, vw.mu))


def build_code(f: WeightedPolynomial, mode: str = "auto") -> CodeSpec:
    """Homogeneous cubic targets use the CCZ construction, all others the general one."""
    if f.is_homogeneous_cubic():
        return build_ccz_code(f, mode)
    return build_general_code(f, mode)


def logical_failure_weights(code: CodeSpec) -> list[int]:
    """Count of undetected logical errors by weight: ``#{e : Se = 0, Ke != 0, |e| = w}``."""
    accepted = kernel_weight_distribution(code.S)
    harmless = kernel_weight_distribution(code.g)
    return [a - h for a, h in zip(accepted, harmless)]


def code_params(code: CodeSpec) -> CodeParams:
    """``d = min{|e| : Se = 0, Ke != 0}`` by enumerating the span of ``ker S``.

    Codes wider than 64 qubits, or with ``dim ker S > MAX_SPAN_DIM``, fall back
    to the weight distributions of ``ker S`` and ``ker G``.
    """
    basis = kernel_basis(code.S)
    if code.n > 64 or len(basis) > MAX_SPAN_DIM:
        bad = logical_failure_weights(code)
        d = next((w for w, c in enumerate(bad) if c), 0)
        return CodeParams(code.n, code.k, d)
    low, high = basis[:_SPAN_CHUNK_DIM], basis[_SPAN_CHUNK_DIM:]
    low_span = span(low)
    k_rows = [np.uint64(r) for r in code.K.rows]
    best = None
    for sel in product((0, 1), repeat=len(high)):
        offset = 0
        for bit, v in zip(sel, high):
            if bit:
                offset ^= v
        vecs = low_span ^ np.uint64(offset)
        logical = np.zeros(vecs.shape, dtype=bool)
        for r in k_rows:
            logical |= (np.bitwise_count(vecs & r) & 1).astype(bool)
        if logical.any():
            w = int(np.bitwise_count(vecs[logical]).min())
            best = w if best is None else min(best, w)
    return CodeParams(code.n, code.k, 0 if best is None else best)


def encoder(code: CodeSpec) -> list[tuple[int, int]]:
    """CNOT circuit ``E_G`` with ``E_G |x, y, 0> = |K^T x + S^T y>``."""
    return cnot_circuit_from_invertible(complete_to_invertible(code.g))


# G-matrix file: "# code k=K s=S target=POLY" header then the gf2 matrix format

_HEADER = re.compile(r"^#\s*code\s+k=(\d+)\s+s=(\d+)\s+target=(.*)$")


def format_code(code: CodeSpec) -> str:
    header = f"# code k={code.k} s={code.s} target={format_polynomial(code.target)}\n"
    return header + format_matrix(code.g)


def parse_code(text: str, poly: str | None = None, k: int | None = None) -> CodeSpec:
    """Read a G file; ``poly``/``k`` override or supply what the header lacks."""
    header_k = header_poly = None
    for line in text.splitlines():
        m = _HEADER.match(line.strip())
        if m:
            header_k, header_s, header_poly = int(m.group(1)), int(m.group(2)), m.group(3).strip()
            break
    g = parse_matrix(text)
    if k is None:
        k = header_k
    target_text = poly if poly is not None else header_poly
    if target_text is None:
        raise ParseError("no target polynomial in file header or arguments")
    if k is None:
        target = parse_polynomial(target_text)
        k = target.num_vars
    else:
        target = parse_polynomial(target_text, k)
    if header_k is not None and header_k + header_s != g.nrows:
        raise ParseError(f"header says k+s={header_k + header_s} but matrix has {g.nrows} rows")
    return CodeSpec(g, k, target)
