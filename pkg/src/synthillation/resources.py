"""Raw T-state cost of distill-then-synthesize versus distill-then-synthillate.

Every stage statistic comes from the exact code analysis in
:mod:`synthillation.protocol`; no literature constants are used.

Cost model:

* a distillation round with an ``[[n, k]]`` code multiplies the raw cost of
  each T state by ``n / (k p_suc)`` and replaces the per-state error by the
  mean marginal output error of the code (outputs treated as independent);
* synthesis consuming ``m`` T states of error ``eps`` costs ``m`` states and
  fails with probability ``1 - (1 - eps)^m``;
* a synthillation stage costs ``n / p_suc`` states and fails with the block
  output error ``eps_out``.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass
from typing import Iterable, Union

from .codes import CodeSpec, build_code, build_general_code
from .errors import CodeConstructionError
from .polynomial import WeightedPolynomial, is_clifford
from .protocol import error_out, output_marginal_errors, success_prob
from .synthesis import t_count

DEFAULT_BHMSD_K = 4
OPT_K_RANGE = range(2, 41, 2)


@functools.lru_cache(maxsize=None)
def bhmsd_stage(k: int) -> CodeSpec:
    """The ``3k + 8`` qubit code distilling ``k`` T states (general construction for ``T^k``)."""
    if k < 2 or k % 2:
        raise ValueError(f"Bravyi-Haah rounds need an even k >= 2, got {k}")
    f = WeightedPolynomial(k, tuple((1 << i, 1) for i in range(k)))
    code = build_general_code(f)
    assert code.n == 3 * k + 8
    return code


@dataclass(frozen=True)
class DistillationStage:
    code: CodeSpec

    @property
    def name(self) -> str:
        return f"bhmsd[{self.code.n}->{self.code.k}]"


@dataclass(frozen=True)
class SynthesisStage:
    t_count: int

    @property
    def name(self) -> str:
        return f"synthesis[{self.t_count}]"


@dataclass(frozen=True)
class SynthillationStage:
    code: CodeSpec

    @property
    def name(self) -> str:
        return f"synthillation[{self.code.n}]"


FinalStage = Union[SynthesisStage, SynthillationStage]


@dataclass(frozen=True)
class PipelineSpec:
    rounds: tuple[DistillationStage, ...]
    final: FinalStage


@dataclass(frozen=True)
class StageCost:
    name: str
    eps_in: float
    eps_out: float
    p_suc: float
    raw_T: float  # cumulative raw T states per unit produced by this stage


@dataclass(frozen=True)
class CostReport:
    raw_T_per_output: float
    final_eps: float
    stages: tuple[StageCost, ...]


def pipeline_cost(spec: PipelineSpec, eps0: float) -> CostReport:
    per_state, eps = 1.0, eps0
    stages = []
    for rnd in spec.rounds:
        code = rnd.code
        p = success_prob(code, eps)
        marginals = output_marginal_errors(code, eps)
        new_eps = sum(marginals) / len(marginals)
        per_state *= code.n / (code.k * p)
        stages.append(StageCost(rnd.name, eps, new_eps, p, per_state))
        eps = new_eps
    final = spec.final
    if isinstance(final, SynthesisStage):
        raw = per_state * final.t_count
        out = -math.expm1(final.t_count * math.log1p(-eps))
        stages.append(StageCost(final.name, eps, out, 1.0, raw))
    else:
        p = success_prob(final.code, eps)
        raw = per_state * final.code.n / p
        out = error_out(final.code, eps)
        stages.append(StageCost(final.name, eps, out, p, raw))
    return CostReport(raw, out, tuple(stages))


@dataclass(frozen=True)
class CompareRow:
    pipeline: str
    rounds: int
    raw_T: float
    final_eps: float
    k: int | None


def _rounds(r: int, k: int) -> tuple[DistillationStage, ...]:
    return tuple(DistillationStage(bhmsd_stage(k)) for _ in range(r))


def _best(final: FinalStage, r: int, eps0: float, k) -> tuple[CostReport, int | None]:
    if r == 0:
        return pipeline_cost(PipelineSpec((), final), eps0), None
    if k == "opt":
        reports = [(pipeline_cost(PipelineSpec(_rounds(r, kk), final), eps0), kk) for kk in OPT_K_RANGE]
        return min(reports, key=lambda rk: (rk[0].raw_T_per_output, rk[1]))
    return pipeline_cost(PipelineSpec(_rounds(r, k), final), eps0), k


def compare(
    f: WeightedPolynomial,
    eps0: float,
    rounds: Iterable[int] = range(4),
    k: int | str = DEFAULT_BHMSD_K,
    mode: str = "auto",
) -> list[CompareRow]:
    """Cost and final error of both pipelines for each number of BHMSD rounds.

    ``k="opt"`` picks, per row, the even ``k`` in :data:`OPT_K_RANGE` that
    minimizes that row's raw cost.
    """
    rows: list[CompareRow] = []
    if is_clifford(f):
        for r in rounds:
            rows += [CompareRow("synthesis", r, 0.0, 0.0, None), CompareRow("synthillation", r, 0.0, 0.0, None)]
        return rows
    tau = t_count(f, mode).tau
    code = build_code(f, mode)
    for r in rounds:
        for name, final in (("synthesis", SynthesisStage(tau)), ("synthillation", SynthillationStage(code))):
            rep, kk = _best(final, r, eps0, k)
            rows.append(CompareRow(name, r, rep.raw_T_per_output, rep.final_eps, kk))
    return rows


def cost_ratio(f: WeightedPolynomial, eps0: float, k: int | str = "opt") -> float:
    """Raw cost of (one BHMSD round + synthesis) over (synthillation alone)."""
    tau = t_count(f).tau
    code = build_code(f)
    conventional, _ = _best(SynthesisStage(tau), 1, eps0, k)
    synthillation = pipeline_cost(PipelineSpec((), SynthillationStage(code)), eps0)
    return conventional.raw_T_per_output / synthillation.raw_T_per_output


def table_csv(rows: list[CompareRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pipeline", "rounds", "raw_T", "final_eps"])
    for row in rows:
        writer.writerow([row.pipeline, row.rounds, f"{row.raw_T:.10g}", f"{row.final_eps:.10g}"])
    return buf.getvalue()


def theorem_bound_holds(code: CodeSpec) -> bool:
    """``tau + 2 mu <= n <= tau + 2 mu + 11`` and ``n <= 3 tau + 11``."""
    if code.tau is None or code.mu is None:
        raise CodeConstructionError("code does not record tau and mu")
    return 0 <= code.delta <= 11 and code.n <= 3 * code.tau + 11
