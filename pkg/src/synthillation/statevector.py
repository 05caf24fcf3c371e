"""Tiny dense statevector simulator for the diagonal/CNOT/H gate set.

Qubit ``q`` is bit ``q`` of the basis index. Every routine acts along axis 0,
so passing a ``(2^n, m)`` array evolves ``m`` states at once (``m = 2^n`` with
the identity gives the full unitary).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

OMEGA = cmath.exp(1j * math.pi / 4)
_OMEGA_POWERS = np.array([cmath.exp(1j * math.pi * k / 4) for k in range(8)])

# phase exponent (in units of pi/4) added when all listed qubits are 1
_DIAGONAL = {
    "t": 1,
    "tdg": 7,
    "s": 2,
    "sdg": 6,
    "z": 4,
    "cs": 2,
    "cz": 4,
    "ccz": 4,
}


def _index(state: np.ndarray) -> np.ndarray:
    return np.arange(state.shape[0], dtype=np.int64)


def omega_power(exponents) -> np.ndarray:
    return _OMEGA_POWERS[np.asarray(exponents, dtype=np.int64) % 8]


def apply_diagonal(state: np.ndarray, exponents) -> np.ndarray:
    """Multiply basis state ``z`` by ``omega ** exponents[z]``."""
    phase = omega_power(exponents)
    return state * phase.reshape((-1,) + (1,) * (state.ndim - 1))


def apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    idx = _index(state)
    return state[idx ^ (((idx >> control) & 1) << target)]


def apply_h(state: np.ndarray, qubit: int) -> np.ndarray:
    idx = _index(state)
    lo = idx[((idx >> qubit) & 1) == 0]
    hi = lo | (1 << qubit)
    out = np.empty_like(state)
    a, b = state[lo], state[hi]
    out[lo] = (a + b) / math.sqrt(2)
    out[hi] = (a - b) / math.sqrt(2)
    return out


def apply_gate(state: np.ndarray, name: str, qubits) -> np.ndarray:
    if name == "cx":
        return apply_cnot(state, qubits[0], qubits[1])
    if name == "h":
        return apply_h(state, qubits[0])
    if name in _DIAGONAL:
        idx = _index(state)
        mask = sum(1 << q for q in qubits)
        return apply_diagonal(state, np.where((idx & mask) == mask, _DIAGONAL[name], 0))
    raise ValueError(f"unsupported gate {name!r}")


def run_circuit(circuit, state: np.ndarray | None = None) -> np.ndarray:
    """Apply a :class:`~synthillation.frontend.CircuitAst` gate by gate."""
    if state is None:
        state = np.zeros(1 << circuit.num_qubits, dtype=complex)
        state[0] = 1
    for gate in circuit.gates:
        state = apply_gate(state, gate.name, gate.qubits)
    return state


def circuit_unitary(circuit) -> np.ndarray:
    return run_circuit(circuit, np.eye(1 << circuit.num_qubits, dtype=complex))


def plus_state(n: int) -> np.ndarray:
    return np.full(1 << n, 2 ** (-n / 2), dtype=complex)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    """Entrywise equality of ``a`` and ``e^{i phi} b`` for some global phase."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        return False
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) < atol:
        return bool(np.allclose(a, 0, atol=atol))
    phase = a[k] / b[k]
    if abs(abs(phase) - 1) > atol:
        return False
    return bool(np.max(np.abs(a - phase * b)) <= atol)
