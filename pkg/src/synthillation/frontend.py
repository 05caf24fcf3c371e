"""Circuit files over {cx, t, tdg, s, sdg, z, cz, cs, ccz, h} and their phase-polynomial form.

File grammar::

    # comment
    qubits 4
    cx 0 1
    t 1
    ccz 0 2 3   # trailing comments allowed
    h 2

One gate per line, lowercase mnemonics, 0-based qubit indices. Qubit ``q``
corresponds to polynomial variable ``x{q+1}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ParseError
from .gf2 import BinaryMatrix, cnot_circuit_from_invertible
from .polynomial import PhasePolynomial, format_phase

GATE_ARITY = {
    "t": 1,
    "tdg": 1,
    "s": 1,
    "sdg": 1,
    "z": 1,
    "h": 1,
    "cx": 2,
    "cz": 2,
    "cs": 2,
    "ccz": 3,
}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.qubits)])


@dataclass(frozen=True)
class CircuitAst:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        for g in self.gates:
            if GATE_ARITY.get(g.name) != len(g.qubits):
                raise ValueError(f"bad gate {g}")
            if any(not 0 <= q < self.num_qubits for q in g.qubits) or len(set(g.qubits)) != len(g.qubits):
                raise ValueError(f"bad qubit indices in {g}")

    def count(self, name: str) -> int:
        return sum(g.name == name for g in self.gates)

    def __add__(self, other: CircuitAst) -> CircuitAst:
        if self.num_qubits != other.num_qubits:
            raise ValueError("qubit count mismatch")
        return CircuitAst(self.num_qubits, self.gates + other.gates)


def parse(text: str) -> CircuitAst:
    num_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, *args = line.split()
        if num_qubits is None:
            if name != "qubits" or len(args) != 1:
                raise ParseError("missing 'qubits N' header", lineno)
            try:
                num_qubits = int(args[0])
            except ValueError:
                raise ParseError(f"bad qubit count {args[0]!r}", lineno) from None
            if num_qubits < 0:
                raise ParseError("negative qubit count", lineno)
            continue
        if name == "qubits":
            raise ParseError("duplicate 'qubits' header", lineno)
        if name not in GATE_ARITY:
            raise ParseError(f"unknown gate {name!r}", lineno)
        if len(args) != GATE_ARITY[name]:
            raise ParseError(f"{name} takes {GATE_ARITY[name]} qubit(s), got {len(args)}", lineno)
        try:
            qubits = tuple(int(a) for a in args)
        except ValueError:
            raise ParseError(f"non-integer qubit index in {line!r}", lineno) from None
        for q in qubits:
            if not 0 <= q < num_qubits:
                raise ParseError(f"qubit index {q} out of range [0, {num_qubits})", lineno)
        if len(set(qubits)) != len(qubits):
            raise ParseError(f"repeated qubit in {line!r}", lineno)
        gates.append(Gate(name, qubits))
    if num_qubits is None:
        raise ParseError("missing 'qubits N' header")
    return CircuitAst(num_qubits, tuple(gates))


def format_circuit(circuit: CircuitAst) -> str:
    return "\n".join([f"qubits {circuit.num_qubits}", *map(str, circuit.gates)]) + "\n"


def gate_phase_terms(name: str, parities: tuple[int, ...]) -> list[tuple[int, int]]:
    """Phase-polynomial terms added by a diagonal gate whose wires hold ``parities``."""
    if name in ("t", "tdg", "s", "sdg", "z"):
        return [(parities[0], {"t": 1, "tdg": 7, "s": 2, "sdg": 6, "z": 4}[name])]
    if name == "cz":
        u, v = parities
        return [(u, 2), (v, 2), (u ^ v, 6)]
    if name == "cs":
        u, v = parities
        return [(u, 1), (v, 1), (u ^ v, 7)]
    if name == "ccz":
        u, v, w = parities
        return [(u, 1), (v, 1), (w, 1), (u ^ v ^ w, 1), (u ^ v, 7), (v ^ w, 7), (u ^ w, 7)]
    raise ValueError(f"{name} is not a diagonal gate")


@dataclass(frozen=True)
class DiagonalSegment:
    """``|x> -> omega^{phase(x)} |L x>``: the diagonal acts first, then the CNOT network.

    ``linear_part`` row ``t`` is the parity carried by wire ``t`` at the end of
    the segment. ``hadamards_after`` lists the H gates that close the segment.
    """

    linear_part: BinaryMatrix
    phase: PhasePolynomial
    hadamards_after: tuple[int, ...] = ()

    @property
    def num_qubits(self) -> int:
        return self.phase.num_vars

    def linear_circuit(self) -> list[tuple[int, int]]:
        """CNOTs realizing ``z -> L z``."""
        return cnot_circuit_from_invertible(self.linear_part.transpose())

    def to_json(self) -> dict:
        return {
            "qubits": self.num_qubits,
            "linear_part": self.linear_part.to_lists(),
            "phase": [
                {"parity": [i + 1 for i in range(self.num_qubits) if (u >> i) & 1], "coeff": a}
                for u, a in self.phase.terms
            ],
            "phase_text": format_phase(self.phase),
            "hadamards_after": list(self.hadamards_after),
        }


def to_segments(circuit: CircuitAst) -> list[DiagonalSegment]:
    """Split at Hadamards and sweep each CNOT+diagonal block into phase-polynomial form."""
    n = circuit.num_qubits
    segments: list[DiagonalSegment] = []
    wires = [1 << q for q in range(n)]
    terms: dict[int, int] = {}
    closing: list[int] = []

    def close() -> None:
        nonlocal wires, terms, closing
        phase = PhasePolynomial.from_dict(n, terms)
        segments.append(DiagonalSegment(BinaryMatrix(tuple(wires), n), phase, tuple(closing)))
        wires = [1 << q for q in range(n)]
        terms = {}
        closing = []

    for gate in circuit.gates:
        if gate.name == "h":
            closing.append(gate.qubits[0])
            continue
        if closing:
            close()
        if gate.name == "cx":
            c, t = gate.qubits
            wires[t] ^= wires[c]
            continue
        for u, a in gate_phase_terms(gate.name, tuple(wires[q] for q in gate.qubits)):
            if u:
                terms[u] = (terms.get(u, 0) + a) % 8
    close()
    return segments


def segments_to_json(segments: list[DiagonalSegment]) -> str:
    return json.dumps({"segments": [s.to_json() for s in segments]}, indent=2)
