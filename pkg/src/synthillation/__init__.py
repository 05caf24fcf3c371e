"""Phase-polynomial T-count optimization and synthillation code analysis."""

__version__ = "0.1.0"
FORMAT_VERSION = 1

from .codes import CodeSpec, build_ccz_code, build_code, build_general_code, check_quasitransversal
from .errors import SynthillationError
from .frontend import parse, to_segments
from .polynomial import PhasePolynomial, WeightedPolynomial, parse_polynomial
from .protocol import analyze, error_out, success_prob
from .resources import compare, pipeline_cost
from .synthesis import t_count, t_count_exact, t_count_heuristic

__all__ = [
    "CodeSpec",
    "PhasePolynomial",
    "SynthillationError",
    "WeightedPolynomial",
    "analyze",
    "build_ccz_code",
    "build_code",
    "build_general_code",
    "check_quasitransversal",
    "compare",
    "error_out",
    "parse",
    "parse_polynomial",
    "pipeline_cost",
    "success_prob",
    "t_count",
    "t_count_exact",
    "t_count_heuristic",
    "to_segments",
]
