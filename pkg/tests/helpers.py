"""Shared fixtures: random circuits and reference unitaries."""

import itertools

import numpy as np
from hypothesis import strategies as st

from synthillation.frontend import GATE_ARITY, CircuitAst, Gate
from synthillation.polynomial import WeightedPolynomial
from synthillation.statevector import apply_diagonal

GATES = sorted(GATE_ARITY)


def random_circuit(rng: np.random.Generator, n: int, depth: int, gates=GATES) -> CircuitAst:
    out = []
    usable = [g for g in gates if GATE_ARITY[g] <= n]
    for _ in range(depth):
        name = usable[int(rng.integers(len(usable)))]
        qubits = tuple(int(q) for q in rng.choice(n, GATE_ARITY[name], replace=False))
        out.append(Gate(name, qubits))
    return CircuitAst(n, tuple(out))


def segment_unitary(seg) -> np.ndarray:
    """Diagonal ``omega^phase`` followed by the permutation ``z -> L z``."""
    n = seg.num_qubits
    dim = 1 << n
    u = np.zeros((dim, dim), dtype=complex)
    for z in range(dim):
        u[seg.linear_part.matvec(z), z] = 1
    return u @ np.diag(apply_diagonal(np.ones(dim, dtype=complex), seg.phase.truth_table()))


@st.composite
def d3_polys(draw, max_vars=5):
    k = draw(st.integers(1, max_vars))
    coeffs = {}
    for deg, choices in ((1, range(8)), (2, (0, 2, 4, 6)), (3, (0, 4))):
        for combo in itertools.combinations(range(k), deg):
            c = draw(st.sampled_from(choices))
            if c:
                coeffs[sum(1 << i for i in combo)] = c
    return WeightedPolynomial.from_dict(k, coeffs)
