"""Postselected preparation of ``U_F |+>^k`` under i.i.d. Z noise on the T gates.

An error ``Z[e]`` on the encoded block is detected iff ``S e != 0`` and damages
the output iff ``K e != 0``. Exact statistics come from the weight
distributions of ``ker S`` (accepted errors) and ``ker G`` (harmless errors),
so success probability and output error are integer polynomials in epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .codes import CliffordCorrection, CodeSpec, check_quasitransversal, encoder, logical_failure_weights
from .errors import SearchTooLarge
from .gf2 import BinaryMatrix, kernel_weight_distribution
from .statevector import apply_cnot, apply_diagonal, apply_h, equal_up_to_phase, omega_power

MAX_STATEVECTOR_QUBITS = 14
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class NoiseModel:
    epsilon: float

    def __post_init__(self) -> None:
        if not 0 <= self.epsilon <= 0.5:
            raise ValueError(f"epsilon={self.epsilon} outside [0, 1/2]")

    def weight_probability(self, weight: int, n: int) -> float:
        return self.epsilon**weight * (1 - self.epsilon) ** (n - weight)


@dataclass(frozen=True)
class Mode:
    kind: str
    order: int | None = None
    samples: int | None = None

    @classmethod
    def parse(cls, text: str) -> Mode:
        """``exact``, ``series:ORDER`` or ``mc:SAMPLES``."""
        kind, _, arg = text.partition(":")
        if kind == "exact" and not arg:
            return cls("exact")
        if kind == "series" and arg.isdigit() and int(arg) >= 1:
            return cls("series", order=int(arg))
        if kind == "mc" and arg.isdigit() and int(arg) >= 1:
            return cls("mc", samples=int(arg))
        raise ValueError(f"bad mode {text!r}; expected exact, series:N or mc:N")

    def __str__(self) -> str:
        if self.kind == "series":
            return f"series:{self.order}"
        if self.kind == "mc":
            return f"mc:{self.samples}"
        return self.kind


@dataclass(frozen=True)
class ProtocolReport:
    mode: str
    epsilon: float
    n: int
    p_suc: float
    eps_out: float
    p_suc_stderr: float | None = None
    eps_out_stderr: float | None = None
    p_suc_coeffs: tuple[int, ...] | None = None
    eps_out_coeffs: tuple[int, ...] | None = None
    accepted: int | None = None
    faulty: int | None = None
    samples: int | None = None

    @property
    def expected_cost(self) -> float:
        return self.n / self.p_suc if self.p_suc > 0 else math.inf


# exact polynomials


def expand_weight_distribution(dist: list[int], n: int) -> list[int]:
    """Coefficients of ``sum_w dist[w] eps^w (1 - eps)^(n - w)`` in powers of eps."""
    coeffs = [0] * (n + 1)
    for w, a in enumerate(dist):
        if not a:
            continue
        for j in range(n - w + 1):
            coeffs[w + j] += a * comb(n - w, j) * (-1) ** j
    return coeffs


def accepted_distribution(code: CodeSpec) -> list[int]:
    return kernel_weight_distribution(code.S)


def success_polynomial(code: CodeSpec) -> list[int]:
    return expand_weight_distribution(accepted_distribution(code), code.n)


def failure_polynomial(code: CodeSpec) -> list[int]:
    """``P(S e = 0 and K e != 0)`` as integer coefficients in eps."""
    return expand_weight_distribution(logical_failure_weights(code), code.n)


def series_divide(num: list[int], den: list[int], order: int) -> list[int]:
    """Power series of ``num / den`` through ``eps^order``; needs ``den[0] = 1``."""
    if den[0] != 1:
        raise ValueError("denominator must have unit constant term")
    out: list[int] = []
    for j in range(order + 1):
        acc = num[j] if j < len(num) else 0
        for i in range(j):
            if j - i < len(den):
                acc -= out[i] * den[j - i]
        out.append(acc)
    return out


def _weight_sum(dist: list[int], n: int, eps):
    if isinstance(eps, Fraction):
        return sum((a * eps**w * (1 - eps) ** (n - w) for w, a in enumerate(dist) if a), Fraction(0))
    return math.fsum(a * eps**w * (1 - eps) ** (n - w) for w, a in enumerate(dist) if a)


def _poly_value(coeffs, eps):
    return sum(c * eps**j for j, c in enumerate(coeffs))


def _mode(mode) -> Mode:
    return mode if isinstance(mode, Mode) else Mode.parse(mode)


def success_prob(code: CodeSpec, eps, mode="exact", seed: int = 0):
    """Acceptance probability ``sum_{e : S e = 0} eps^|e| (1 - eps)^(n - |e|)``."""
    m = _mode(mode)
    if m.kind == "exact":
        return _weight_sum(accepted_distribution(code), code.n, eps)
    if m.kind == "series":
        return _poly_value(success_polynomial(code)[: m.order + 1], eps)
    return monte_carlo(code, float(eps), m.samples, seed).p_suc


def error_out(code: CodeSpec, eps, mode="exact", seed: int = 0):
    """``1 - P(S e = 0, K e = 0) / p_suc``, evaluated as ``P(S e = 0, K e != 0) / p_suc``."""
    m = _mode(mode)
    if m.kind == "exact":
        bad = _weight_sum(logical_failure_weights(code), code.n, eps)
        return bad / _weight_sum(accepted_distribution(code), code.n, eps)
    if m.kind == "series":
        coeffs = series_divide(failure_polynomial(code), success_polynomial(code), m.order)
        return _poly_value(coeffs, eps)
    return monte_carlo(code, float(eps), m.samples, seed).eps_out


def output_marginal_errors(code: CodeSpec, eps) -> list[float]:
    """Per-output-wire error ``P((K e)_i != 0 | S e = 0)`` for each logical qubit."""
    accepted = accepted_distribution(code)
    p_suc = _weight_sum(accepted, code.n, eps)
    out = []
    for i in range(code.k):
        h = code.S.vstack(BinaryMatrix((code.g.rows[i],), code.n))
        harmless = kernel_weight_distribution(h)
        bad = [a - b for a, b in zip(accepted, harmless)]
        out.append(_weight_sum(bad, code.n, eps) / p_suc)
    return out


def analyze(code: CodeSpec, eps: float, mode="exact", seed: int = 0) -> ProtocolReport:
    m = _mode(mode)
    if m.kind == "mc":
        return monte_carlo(code, eps, m.samples, seed)
    p_coeffs = success_polynomial(code)
    if m.kind == "exact":
        return ProtocolReport(
            "exact",
            eps,
            code.n,
            success_prob(code, eps),
            error_out(code, eps),
            p_suc_coeffs=tuple(p_coeffs),
        )
    p_series = p_coeffs[: m.order + 1]
    e_series = series_divide(failure_polynomial(code), p_coeffs, m.order)
    return ProtocolReport(
        str(m),
        eps,
        code.n,
        _poly_value(p_series, eps),
        _poly_value(e_series, eps),
        p_suc_coeffs=tuple(p_series),
        eps_out_coeffs=tuple(e_series),
    )


def loglog_slope(code: CodeSpec, lo: float = 1e-4, hi: float = 1e-2) -> float:
    return (math.log(error_out(code, hi)) - math.log(error_out(code, lo))) / (math.log(hi) - math.log(lo))


# classification and sampling


def classify(code: CodeSpec, e: int) -> str:
    if code.S.matvec(e):
        return "rejected"
    return "accepted-faulty" if code.K.matvec(e) else "accepted-correct"


def monte_carlo(code: CodeSpec, eps: float, samples: int, seed: int = 0) -> ProtocolReport:
    """Sample i.i.d. Z errors and classify them by syndrome only."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    s_mat = code.S.to_array().T.astype(np.int64)
    k_mat = code.K.to_array().T.astype(np.int64)
    accepted = faulty = 0
    done = 0
    while done < samples:
        m = min(MC_CHUNK, samples - done)
        errs = (rng.random((m, code.n)) < eps).astype(np.int64)
        ok = ~((errs @ s_mat) % 2).any(axis=1)
        bad = ((errs[ok] @ k_mat) % 2).any(axis=1)
        accepted += int(ok.sum())
        faulty += int(bad.sum())
        done += m
    p = accepted / samples
    q = faulty / accepted if accepted else 0.0
    return ProtocolReport(
        f"mc:{samples}",
        eps,
        code.n,
        p,
        q,
        p_suc_stderr=math.sqrt(p * (1 - p) / samples),
        eps_out_stderr=math.sqrt(q * (1 - q) / accepted) if accepted else math.inf,
        accepted=accepted,
        faulty=faulty,
        samples=samples,
    )


# statevector oracle


@dataclass(frozen=True)
class SimulationOutcome:
    accepted: bool
    p_accept: float
    output: np.ndarray | None
    correct: bool | None


def _correction(code: CodeSpec) -> CliffordCorrection:
    return code.correction if code.correction is not None else check_quasitransversal(code)


def _require_small(code: CodeSpec) -> None:
    if code.n > MAX_STATEVECTOR_QUBITS:
        raise SearchTooLarge(f"statevector of {code.n} qubits exceeds the {MAX_STATEVECTOR_QUBITS}-qubit limit")


def apply_logical_correction(state: np.ndarray, code: CodeSpec, enc, corr: CliffordCorrection) -> np.ndarray:
    """``C = E_G C~ E_G^dagger``."""
    idx = np.arange(1 << code.n, dtype=np.int64)
    for c, t in reversed(enc):
        state = apply_cnot(state, c, t)
    state = apply_diagonal(state, corr.phase_exponents(idx & ((1 << (code.k + code.s)) - 1)))
    for c, t in enc:
        state = apply_cnot(state, c, t)
    return state


def target_state(code: CodeSpec) -> np.ndarray:
    """``U_F |+>^k``."""
    return omega_power(code.target.truth_table()) / math.sqrt(1 << code.k)


def simulate_statevector(code: CodeSpec, injected_e: int) -> SimulationOutcome:
    """Run encode, noisy transversal T, correction, decode and X-measurement of the ``s`` wires."""
    _require_small(code)
    n, k, s = code.n, code.k, code.s
    idx = np.arange(1 << n, dtype=np.int64)
    enc = encoder(code)
    corr = _correction(code)

    state = np.where(idx < (1 << (k + s)), 2 ** (-(k + s) / 2), 0).astype(complex)
    for c, t in enc:
        state = apply_cnot(state, c, t)
    weights = np.bitwise_count(idx.astype(np.uint64)).astype(np.int64)
    state = apply_diagonal(state, weights)
    flips = np.bitwise_count((idx & injected_e).astype(np.uint64)).astype(np.int64)
    state = apply_diagonal(state, 4 * (flips & 1))
    state = apply_logical_correction(state, code, enc, corr)
    for c, t in reversed(enc):
        state = apply_cnot(state, c, t)
    for q in range(k, k + s):
        state = apply_h(state, q)

    y_zero = ((idx >> k) & ((1 << s) - 1)) == 0
    p_acc = float(np.sum(np.abs(state[y_zero]) ** 2))
    if p_acc < 0.5:
        return SimulationOutcome(False, p_acc, None, None)
    out = state[: 1 << k] / math.sqrt(p_acc)
    return SimulationOutcome(True, p_acc, out, equal_up_to_phase(out, target_state(code)))


def logical_states(code: CodeSpec) -> np.ndarray:
    """Columns ``|x_L> = 2^{-s/2} sum_y |K^T x + S^T y>`` built straight from ``G``."""
    _require_small(code)
    out = np.zeros((1 << code.n, 1 << code.k), dtype=complex)
    amp = 2 ** (-code.s / 2)
    for x in range(1 << code.k):
        base = code.K.vecmat(x)
        for y in range(1 << code.s):
            out[base ^ code.S.vecmat(y), x] += amp
    return out


def logical_phase_error(code: CodeSpec, correction: CliffordCorrection | None = None) -> float:
    """Largest amplitude deviation of ``C T^n |x_L>`` from ``g omega^{F(x)} |x_L>``.

    ``g`` is one global phase shared by every ``x``.
    """
    corr = correction if correction is not None else _correction(code)
    logical = logical_states(code)
    idx = np.arange(1 << code.n, dtype=np.int64)
    weights = np.bitwise_count(idx.astype(np.uint64)).astype(np.int64)
    state = apply_diagonal(logical, weights)
    state = apply_logical_correction(state, code, encoder(code), corr)
    expected = logical * omega_power(code.target.truth_table())[None, :]
    ref = int(np.argmax(np.abs(expected[:, 0])))
    g = state[ref, 0] / expected[ref, 0]
    return float(np.max(np.abs(state - g * expected)))
