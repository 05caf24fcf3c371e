"""Command-line entry point: ``synthillation <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (diagnostic on stderr) and
2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import FORMAT_VERSION, __version__
from .codes import build_code, check_quasitransversal, code_params, format_code, parse_code
from .errors import SynthillationError
from .frontend import CircuitAst, format_circuit, parse, segments_to_json, to_segments
from .gf2 import BinaryMatrix, format_matrix
from .polynomial import WeightedPolynomial, parse_polynomial, phase_to_weighted
from .protocol import analyze, classify, logical_phase_error, simulate_statevector
from .resources import compare, table_csv
from .synthesis import analyze_synthesis, compile_circuit, report_json

PHASE_TOL = 1e-10


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def circuit_target(circuit: CircuitAst) -> WeightedPolynomial:
    """The diagonal ``U_F`` a circuit implements; fails unless it is diagonal."""
    segments = to_segments(circuit)
    seg = segments[0]
    if len(segments) > 1 or seg.hadamards_after:
        raise SynthillationError("circuit contains Hadamard gates; synthillation needs a diagonal target")
    if seg.linear_part != BinaryMatrix.identity(circuit.num_qubits):
        raise SynthillationError("circuit's CNOT network does not cancel; the gate is not diagonal")
    return phase_to_weighted(seg.phase).without_constant()


def _target(args) -> WeightedPolynomial:
    if args.poly is not None:
        return parse_polynomial(args.poly)
    if args.infile is None:
        raise SynthillationError("one of --in or --poly is required")
    return circuit_target(parse(_read(args.infile)))


def _rounds(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return range(int(lo), int(hi) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rounds {text!r}; use N or A..B") from None


def _bhmsd_k(text: str):
    if text == "opt":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k {text!r}; use an even integer or 'opt'") from None


def _sweep(text: str) -> np.ndarray:
    try:
        lo, hi, points = text.split(",")
        return np.geomspace(float(lo), float(hi), int(points))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sweep {text!r}; use eps_min,eps_max,points") from None


# subcommands


def cmd_parse(args) -> None:
    circuit = parse(_read(args.infile))
    if args.emit == "segments":
        _write(args.out, segments_to_json(to_segments(circuit)) + "\n")
    else:
        _write(args.out, format_circuit(circuit))


def cmd_synth(args) -> None:
    circuit = parse(_read(args.infile))
    if args.emit == "circuit":
        _write(args.out, format_circuit(compile_circuit(circuit, args.mode)))
        return
    reports = [analyze_synthesis(phase_to_weighted(seg.phase), args.mode) for seg in to_segments(circuit)]
    if args.emit == "matrix":
        _write(args.out, "\n".join(format_matrix(r.matrix().matrix) for r in reports))
    else:
        _write(args.out, report_json(reports) + "\n")


def cmd_code(args) -> None:
    code = build_code(_target(args), args.mode)
    _write(args.out, format_code(code))
    params = code_params(code)
    print(f"{params} tau={code.tau} mu={code.mu} delta={code.delta}", file=sys.stderr)


def cmd_check(args) -> None:
    code = parse_code(_read(args.g), args.poly, args.k)
    corr = check_quasitransversal(code)
    out = {"quasitransversal": True, "params": str(code_params(code)), "correction": corr.to_json()}
    _write(args.out, json.dumps(out, indent=2) + "\n")


def cmd_analyze(args) -> None:
    code = parse_code(_read(args.g), args.poly, args.k)
    grid = args.sweep if args.sweep is not None else [args.eps]
    lines = ["eps,p_suc,eps_out,expected_cost"]
    for eps in grid:
        rep = analyze(code, float(eps), args.mode, args.seed)
        lines.append(f"{float(eps):.10g},{rep.p_suc:.12g},{rep.eps_out:.12g},{rep.expected_cost:.12g}")
    _write(args.out, "\n".join(lines) + "\n")


def cmd_simulate(args) -> None:
    code = parse_code(_read(args.g), args.poly, args.k)
    e = 0
    for wire in args.error:
        if not 1 <= wire <= code.n:
            raise SynthillationError(f"error wire {wire} outside 1..{code.n}")
        e ^= 1 << (wire - 1)
    outcome = simulate_statevector(code, e)
    out = {
        "error_wires": sorted(set(args.error)),
        "classification": classify(code, e),
        "accepted": outcome.accepted,
        "p_accept": round(outcome.p_accept, 12),
        "output_correct": outcome.correct,
        "logical_phase_ok": logical_phase_error(code) < PHASE_TOL,
    }
    _write(args.out, json.dumps(out, indent=2) + "\n")


def cmd_compare(args) -> None:
    f = _target(args)
    rows = compare(f, args.eps0, args.rounds, args.k, args.mode)
    _write(args.out, table_csv(rows))


def _wire_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad wire list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="synthillation", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--version", action="version", version=f"synthillation {__version__} (file format {FORMAT_VERSION})"
    )
    parser.add_argument("--threads", type=int, default=1, help="reserved; all work is single-threaded")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("parse", help="parse a circuit and print it or its segments")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--emit", choices=["circuit", "segments"], default="segments")
    p.add_argument("--out")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("synth", help="T-count optimal resynthesis")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", choices=["auto", "exact", "heuristic"], default="auto")
    p.add_argument("--emit", choices=["circuit", "matrix", "report"], default="report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("code", help="build a quasitransversal code for a diagonal gate")
    p.add_argument("--in", dest="infile")
    p.add_argument("--poly")
    p.add_argument("--mode", choices=["auto", "exact", "heuristic"], default="auto")
    p.add_argument("--out")
    p.set_defaults(func=cmd_code)

    for name, func, helptext in (
        ("check", cmd_check, "verify quasitransversality of a G matrix"),
        ("analyze", cmd_analyze, "success probability and output error"),
        ("simulate", cmd_simulate, "statevector run with injected Z errors"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--g", required=True)
        p.add_argument("--poly")
        p.add_argument("--k", type=int)
        p.add_argument("--out")
        p.set_defaults(func=func)
        if name == "analyze":
            p.add_argument("--eps", type=float, default=1e-3)
            p.add_argument("--mode", default="exact")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--sweep", type=_sweep)
        if name == "simulate":
            p.add_argument("--error", type=_wire_list, default=[], help="comma-separated 1-based wires")

    p = sub.add_parser("compare", help="raw T cost of distill+synthesize versus synthillation")
    p.add_argument("--in", dest="infile")
    p.add_argument("--poly")
    p.add_argument("--eps0", type=float, default=1e-3)
    p.add_argument("--rounds", type=_rounds, default=range(4))
    p.add_argument("--k", type=_bhmsd_k, default=4)
    p.add_argument("--mode", choices=["auto", "exact", "heuristic"], default="auto")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args.func(args)
    except (SynthillationError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
