"""Gate-synthesis matrices, T-count minimization and circuit extraction.

A phase polynomial is Clifford-equivalent to its mod-2 reduction, so the
T-count of ``U_F`` is the minimum Hamming weight of ``a mod 2`` over every
phase vector representing ``F``. Two binary phase vectors give Clifford-equivalent
gates exactly when they differ by a word of the punctured Reed-Muller code
``RM(k-4, k)*`` (length ``2^k - 1``, coordinate ``u - 1`` holds the parity ``u``),
so the optimum is a minimum-weight coset representative.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import NonCliffordResidue, WidthExceeded
from .frontend import CircuitAst, Gate, to_segments
from .gf2 import BinaryMatrix, span
from .polynomial import (
    PhasePolynomial,
    WeightedPolynomial,
    is_clifford,
    phase_to_weighted,
    weighted_to_phase,
)

MAX_EXACT_VARS = 6
MAX_EXACT_MU_VARS = 5
GREEDY_MAX_VARS = 8


@dataclass(frozen=True)
class SynthesisMatrix:
    """``k x n`` matrix with one column per odd phase term (plus zero padding)."""

    matrix: BinaryMatrix
    source: PhasePolynomial | None = None
    padding: int = 0

    @property
    def num_vars(self) -> int:
        return self.matrix.nrows

    @property
    def width(self) -> int:
        return self.matrix.ncols

    @property
    def t_count(self) -> int:
        return self.width - self.padding

    def phase(self) -> PhasePolynomial:
        """``|A^T x|`` as a phase polynomial (coefficient 1 per nonzero column)."""
        terms: dict[int, int] = {}
        for col in self.matrix.columns():
            if col:
                terms[col] = terms.get(col, 0) + 1
        return PhasePolynomial.from_dict(self.num_vars, terms)

    def padded_to_even(self) -> SynthesisMatrix:
        if self.width % 2 == 0:
            return self
        m = self.matrix.hstack(BinaryMatrix.zeros(self.num_vars, 1))
        return SynthesisMatrix(m, self.source, self.padding + 1)


def synthesis_matrix(p: PhasePolynomial) -> SynthesisMatrix:
    cols = sorted(p.odd_parities())
    return SynthesisMatrix(BinaryMatrix.from_columns(cols, p.num_vars), p)


@dataclass(frozen=True)
class TCountReport:
    tau: int
    optimal: bool
    witness: PhasePolynomial
    mu: int | None = None
    w: tuple[tuple[int, ...], ...] = field(default=())

    def matrix(self) -> SynthesisMatrix:
        return synthesis_matrix(self.witness)

    def to_json(self) -> dict:
        k = self.witness.num_vars
        return {
            "tau": self.tau,
            "mu": self.mu,
            "optimal": self.optimal,
            "witness_terms": [
                {"parity": [i + 1 for i in range(k) if (u >> i) & 1], "coeff": a}
                for u, a in self.witness.terms
            ],
            "w": [[i + 1 for i in t] for t in self.w],
        }


# punctured Reed-Muller machinery


@functools.lru_cache(maxsize=None)
def reed_muller_generators(order: int, m: int) -> tuple[int, ...]:
    """Generators of ``RM(order, m)`` punctured at the origin.

    Bit ``u - 1`` of a generator is the monomial ``x_S`` evaluated at point ``u``.
    """
    if order < 0:
        return ()
    gens = []
    for deg in range(min(order, m) + 1):
        for combo in combinations(range(m), deg):
            s = sum(1 << i for i in combo)
            word = 0
            for u in range(1, 1 << m):
                if u & s == s:
                    word |= 1 << (u - 1)
            gens.append(word)
    return tuple(gens)


def clifford_freedom_generators(k: int) -> tuple[int, ...]:
    return reed_muller_generators(k - 4, k)


@functools.lru_cache(maxsize=4)
def _coset_words(k: int) -> np.ndarray:
    return span(clifford_freedom_generators(k))


def phase_vector(p: PhasePolynomial) -> int:
    """Pack ``a mod 2`` with bit ``u - 1`` for parity ``u``."""
    vec = 0
    for u in p.odd_parities():
        vec |= 1 << (u - 1)
    return vec


def vector_phase(vec: int, k: int) -> PhasePolynomial:
    terms = {}
    while vec:
        low = vec & -vec
        terms[low.bit_length()] = 1
        vec ^= low
    return PhasePolynomial.from_dict(k, terms)


def _lex_key(vec: int, length: int) -> int:
    """Integer ordering matching lexicographic order of ``(a_1, a_2, ..., a_N)``."""
    return int(format(vec, f"0{length}b")[::-1], 2) if length else 0


def _min_weight_representative(a0: int, k: int) -> int:
    length = (1 << k) - 1
    if k < 4:
        return a0
    words = _coset_words(k) ^ np.uint64(a0)
    weights = np.bitwise_count(words)
    best = weights.min()
    cands = [int(v) for v in words[weights == best]]
    return min(cands, key=lambda v: _lex_key(v, length))


def t_count_exact(f: WeightedPolynomial) -> TCountReport:
    """Optimal ancilla-free T-count by exhaustive coset decoding (``k <= 6``).

    Ties between minimum-weight representatives go to the lexicographically
    smallest ``(a_1, ..., a_{2^k - 1})``.
    """
    k = f.num_vars
    if k > MAX_EXACT_VARS:
        raise WidthExceeded(f"exact T-count supports at most {MAX_EXACT_VARS} variables, got {k}")
    best = _min_weight_representative(phase_vector(weighted_to_phase(f)), k)
    return TCountReport(best.bit_count(), True, vector_phase(best, k))


def t_count_heuristic(f: WeightedPolynomial) -> TCountReport:
    """Mod-2 reduction followed by greedy descent over the Clifford-freedom generators.

    The descent only runs for ``4 <= k <= 8``; elsewhere the reduced expansion
    is returned as is.
    """
    k = f.num_vars
    if not 4 <= k <= GREEDY_MAX_VARS:
        reduced = weighted_to_phase(f).reduce_mod2()
        return TCountReport(reduced.t_count(), False, PhasePolynomial(k, reduced.terms))
    vec = phase_vector(weighted_to_phase(f))
    gens = clifford_freedom_generators(k)
    improved = True
    while improved:
        improved = False
        for g in gens:
            if (vec ^ g).bit_count() < vec.bit_count():
                vec ^= g
                improved = True
    return TCountReport(vec.bit_count(), False, vector_phase(vec, k))


def t_count(f: WeightedPolynomial, mode: str = "auto") -> TCountReport:
    if mode == "exact":
        return t_count_exact(f)
    if mode == "heuristic":
        return t_count_heuristic(f)
    if mode == "auto":
        return t_count_exact(f) if f.num_vars <= MAX_EXACT_VARS else t_count_heuristic(f)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class VWDecomposition:
    """``U_F = V W`` with ``W`` a product of CCZ gates on the triples in ``w``."""

    v: WeightedPolynomial
    w: tuple[tuple[int, int, int], ...]
    mu: int
    v_report: TCountReport
    exact: bool


def ccz_polynomial(k: int, triples) -> WeightedPolynomial:
    return WeightedPolynomial(k, tuple((sum(1 << i for i in t), 4) for t in triples))


def decompose_vw(f: WeightedPolynomial, mode: str = "auto") -> VWDecomposition:
    """Split off CCZ gates to minimize the T-count of the remainder.

    Exact mode (``k <= 5``) tries every set of cubic corrections; ties prefer
    fewer CCZs, then the smallest selection mask over triples in lexicographic
    order. Heuristic mode compares only ``W = {}`` and ``W = cubic part of F``.
    """
    k = f.num_vars
    if mode == "auto":
        mode = "exact" if k <= MAX_EXACT_MU_VARS else "heuristic"
    if mode == "exact":
        if k > MAX_EXACT_MU_VARS:
            raise WidthExceeded(f"exact decomposition supports at most {MAX_EXACT_MU_VARS} variables, got {k}")
        triples = list(combinations(range(k), 3))
        base = phase_vector(weighted_to_phase(f))
        tvecs = [phase_vector(weighted_to_phase(ccz_polynomial(k, [t]))) for t in triples]
        selections = span(tvecs) ^ np.uint64(base)
        codewords = _coset_words(k) if k >= 4 else np.zeros(1, dtype=np.uint64)
        # weight of best decoding for every selection of triples
        weights = np.bitwise_count(selections[:, None] ^ codewords[None, :]).min(axis=1)
        sizes = np.bitwise_count(np.arange(len(selections), dtype=np.uint64))
        order = np.lexsort((np.arange(len(selections)), sizes, weights))
        choice = int(order[0])
        w = tuple(t for i, t in enumerate(triples) if (choice >> i) & 1)
        v = f - ccz_polynomial(k, w)
        report = t_count_exact(v)
        assert report.tau == int(weights[choice])
        return VWDecomposition(v, w, report.tau, report, True)
    if mode == "heuristic":
        full_w = tuple(sorted(t for t in f.cubic))
        options = []
        for w in ((), full_w):
            v = f - ccz_polynomial(k, w)
            options.append((t_count(v, "auto"), len(w), w, v))
        report, _, w, v = min(options, key=lambda o: (o[0].tau, o[1]))
        return VWDecomposition(v, w, report.tau, report, False)
    raise ValueError(f"unknown mode {mode!r}")


def analyze_synthesis(f: WeightedPolynomial, mode: str = "auto") -> TCountReport:
    """T-count report with ``mu`` and the CCZ set ``W`` filled in."""
    rep = t_count(f, mode)
    vw = decompose_vw(f, "heuristic" if mode == "heuristic" else "auto")
    assert vw.mu <= rep.tau
    return TCountReport(rep.tau, rep.optimal, rep.witness, vw.mu, vw.w)


def correction_for(a: SynthesisMatrix, f: WeightedPolynomial) -> WeightedPolynomial:
    """The residue ``F - |A^T x|`` that a Clifford layer must supply."""
    return f - phase_to_weighted(a.phase())


def synthesize(f: WeightedPolynomial, mode: str = "auto") -> tuple[SynthesisMatrix, WeightedPolynomial]:
    rep = t_count(f, mode)
    a = rep.matrix()
    return a, correction_for(a, f)


def extract_circuit(a: SynthesisMatrix, correction: WeightedPolynomial) -> CircuitAst:
    """Circuit over {cx, t, s, z, sdg, cz} realizing ``|A^T x| + correction``.

    Each nonzero column ``u`` is computed onto its lowest wire by CNOTs, hit
    with a T, and uncomputed; zero padding columns emit nothing.
    """
    if not is_clifford(correction):
        raise NonCliffordResidue(f"correction {correction} is not Clifford")
    k = a.num_vars
    gates: list[Gate] = []
    for u in a.matrix.columns():
        if not u:
            continue
        bits = [i for i in range(k) if (u >> i) & 1]
        target, controls = bits[0], bits[1:]
        fan = [Gate("cx", (c, target)) for c in controls]
        gates += fan
        gates.append(Gate("t", (target,)))
        gates += reversed(fan)
    for (i,), c in sorted(correction.linear.items()):
        name = {1: "s", 2: "z", 3: "sdg"}.get((c // 2) % 4)
        if name:
            gates.append(Gate(name, (i,)))
    for (i, j), c in sorted(correction.quadratic.items()):
        if c % 8 == 4:
            gates.append(Gate("cz", (i, j)))
    return CircuitAst(k, tuple(gates))


def compile_circuit(circuit: CircuitAst, mode: str = "auto") -> CircuitAst:
    """Resynthesize every Hadamard-free segment with minimal T-count."""
    gates: list[Gate] = []
    n = circuit.num_qubits
    for seg in to_segments(circuit):
        f = phase_to_weighted(seg.phase)
        a, corr = synthesize(f, mode)
        gates += extract_circuit(a, corr).gates
        gates += [Gate("cx", ct) for ct in seg.linear_circuit()]
        gates += [Gate("h", (q,)) for q in seg.hadamards_after]
    return CircuitAst(n, tuple(gates))


def report_json(reports: list[TCountReport]) -> str:
    return json.dumps(
        {
            "tau": sum(r.tau for r in reports),
            "mu": sum(r.mu or 0 for r in reports),
            "optimal": all(r.optimal for r in reports),
            "segments": [r.to_json() for r in reports],
        },
        indent=2,
    )
