"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 I/O (missing or unparsable file),
3 validation (non-unitary matrix, disconnected graph, failed verification),
4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, kernels
from .decomp import MODES, decompose, verify
from .errors import SpecParseError, TaqrError, ValidationError
from .gateset import TWO_QUBIT_GATES, export_photonic, gate_from_name
from .numkit import (
    UNITARY_TOL,
    PulseSequence,
    dump_matrix,
    haar_random_unitary,
    load_matrix,
    matrix_to_dict,
)
from .topo import LAYER_ORDERS, TransitionGraph, build_static_scheme, load_graph, preset_graph

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VALIDATION, EXIT_INTERNAL = 0, 1, 2, 3, 4

DEFAULT_GATES = "x+1,x-1,qft,random,rxx,rzz,cz,cx,ch,swap2q"
MODE_LABELS = {"static": "TAQR", "adaptive": "TAQR Adaptive", "swap-baseline": "Swap baseline"}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_seed() -> int:
    raw = os.environ.get("TAQR_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"TAQR_SEED must be an integer, got {raw!r}", EXIT_USAGE)


def _read_file(loader, path, what):
    try:
        return loader(path)
    except FileNotFoundError:
        raise CliError(f"{what} file not found: {path}", EXIT_IO)
    except IsADirectoryError:
        raise CliError(f"{what} path is a directory: {path}", EXIT_IO)
    except SpecParseError as exc:
        raise CliError(f"parse error in {what} file {path}: {exc}", EXIT_IO)


def resolve_graph(spec: str) -> TransitionGraph:
    """Preset spec string or path to a graph JSON file."""
    if os.path.exists(spec) or spec.endswith(".json"):
        return _read_file(load_graph, spec, "graph")
    return preset_graph(spec)


def _write_json(data, out):
    text = json.dumps(data, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}", EXIT_IO)


def _parse_row_order(text):
    if not text:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise CliError(f"bad --row-order {text!r}; expected comma-separated levels", EXIT_USAGE)


# --------------------------------------------------------------------------
# commands


def cmd_decompose(args) -> int:
    U = _read_file(lambda p: load_matrix(p, args.tol), args.matrix, "matrix")
    g = resolve_graph(args.graph)
    g.require_connected()
    if g.dim != U.shape[0]:
        raise CliError(f"graph has {g.dim} levels but matrix is {U.shape[0]}x{U.shape[0]}", EXIT_VALIDATION)
    scheme = None
    if args.mode == "static":
        scheme = build_static_scheme(g, _parse_row_order(args.row_order), args.layer_order)
    kernels.warmup()
    t0 = time.perf_counter()
    seq = decompose(U, g, args.mode, args.tol, scheme, args.layer_order)
    elapsed = time.perf_counter() - t0
    report = verify(U, seq, g, elapsed=elapsed) if args.verify else None
    out_seq = export_photonic(seq) if args.photonic else seq
    _write_json(out_seq.to_dict(), args.out)
    if report is not None:
        stream = sys.stderr if args.out in (None, "-") else sys.stdout
        stream.write(json.dumps(report.to_dict()) + "\n")
        if not report.ok:
            raise CliError(f"verification failed: {report.to_dict()}", EXIT_VALIDATION)
    return EXIT_OK


def cmd_verify(args) -> int:
    U = _read_file(lambda p: load_matrix(p, args.tol), args.matrix, "matrix")

    def load_seq(path):
        with open(path) as fh:
            try:
                return PulseSequence.from_dict(json.load(fh))
            except json.JSONDecodeError as exc:
                raise SpecParseError(str(exc))

    seq = _read_file(load_seq, args.pulses, "pulse")
    g = resolve_graph(args.graph)
    report = verify(U, seq, g, tol=args.distance_tol)
    print(json.dumps(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_gate(args) -> int:
    M = gate_from_name(args.name, args.dim, args.qubit_order)
    _dump(M, args.out)
    return EXIT_OK


def cmd_random(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    _dump(haar_random_unitary(args.dim, seed), args.out)
    return EXIT_OK


def _dump(M, out):
    if out in (None, "-"):
        sys.stdout.write(json.dumps(matrix_to_dict(M)) + "\n")
    else:
        try:
            dump_matrix(M, out)
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}", EXIT_IO)


def cmd_scheme(args) -> int:
    g = resolve_graph(args.graph)
    scheme = build_static_scheme(g, _parse_row_order(args.row_order), args.layer_order)
    if args.json:
        _write_json(scheme.to_dict(), args.out)
    else:
        print(scheme)
    return EXIT_OK


# --------------------------------------------------------------------------
# benchmark suite


@dataclass
class BenchRecord:
    gate: str
    graph: str
    family: str
    dim: int
    mode: str
    rotation_count: float
    phase_count: float
    distance: float
    median_ms: float


def _family_label(spec: str) -> str:
    parts = spec.split(":")
    if parts[0] == "bipartite":
        p = parts[2] if len(parts) == 3 else (parts[1] if len(parts) == 2 else "2")
        return f"bipartite(p={p})"
    return parts[0]


def _expand_graphs(families, dims):
    """Yield ``(family_label, spec)`` pairs; bare family names expand over dims."""
    for fam in families:
        fam = fam.strip().lower()
        parts = fam.split(":")
        if parts[0] in ("line", "star", "complete") and len(parts) == 1:
            for d in dims:
                yield parts[0], f"{parts[0]}:{d}"
        elif parts[0] == "bipartite" and len(parts) <= 2:
            p = int(parts[1]) if len(parts) == 2 else 2
            for d in dims:
                if p < d:
                    yield f"bipartite(p={p})", f"bipartite:{d}:{p}"
        else:
            preset_graph(fam)
            yield _family_label(fam), fam


def _bench_cell(matrices, g, mode, scheme, reps, layer_order="descending"):
    counts, phases, dists, times = [], [], [], []
    for U in matrices:
        seq = None
        for _ in range(reps):
            t0 = time.perf_counter()
            seq = decompose(U, g, mode, UNITARY_TOL, scheme, layer_order)
            times.append(time.perf_counter() - t0)
        report = verify(U, seq, g)
        if not report.ok:
            raise CliError(f"verification failed on {g!r} ({mode}): {report.to_dict()}", EXIT_INTERNAL)
        counts.append(report.rotation_count)
        phases.append(report.phase_count)
        dists.append(report.distance)
    return statistics.median(counts), statistics.median(phases), max(dists), 1e3 * statistics.median(times)


def run_bench(
    families,
    dims,
    gates,
    modes,
    reps=20,
    samples=100,
    seed=0,
    qubit_order="big",
    log=None,
    layer_order="descending",
):
    kernels.warmup()
    records = []
    for family, spec in _expand_graphs(families, dims):
        g = preset_graph(spec)
        d = g.dim
        scheme = build_static_scheme(g, layer_order=layer_order)
        for gate in gates:
            if gate == "random":
                rng = np.random.default_rng(seed)
                matrices = [haar_random_unitary(d, rng) for _ in range(samples)]
                cell_reps = 1
            else:
                if gate.partition(":")[0] in TWO_QUBIT_GATES and d != 4:
                    continue
                matrices = [gate_from_name(gate, d, qubit_order)]
                cell_reps = reps
            for mode in modes:
                rot, ph, dist, ms = _bench_cell(matrices, g, mode, scheme, cell_reps, layer_order)
                records.append(BenchRecord(gate, spec, family, d, mode, rot, ph, dist, ms))
                if log:
                    log(f"{spec:>16} {gate:>8} {mode:>13}: {rot:g} rotations, {ms:.3f} ms")
    return records


def _fmt_count(x):
    return f"{x:g}"


def format_csv(records) -> str:
    buf = io.StringIO()
    fields = list(asdict(records[0]).keys()) if records else list(BenchRecord.__dataclass_fields__)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(asdict(r))
    return buf.getvalue()


def format_markdown(records) -> str:
    """One count table and one timing table per graph family."""
    out = []
    families = list(dict.fromkeys(r.family for r in records))
    for fam in families:
        recs = [r for r in records if r.family == fam]
        gate_rank = {g: n for n, g in enumerate(dict.fromkeys(r.gate for r in recs))}
        columns = sorted(
            dict.fromkeys((r.gate, r.dim) for r in recs),
            key=lambda c: (c[0].partition(":")[0] in TWO_QUBIT_GATES, gate_rank[c[0]], c[1]),
        )
        modes = list(dict.fromkeys(r.mode for r in recs))
        cell = {(r.gate, r.dim, r.mode): r for r in recs}
        header = "| Method | " + " | ".join(f"{g} d={d}" for g, d in columns) + " |"
        rule = "|---|" + "---|" * len(columns)
        for title, value in (("transition count", lambda r: _fmt_count(r.rotation_count)),
                             ("median time, ms", lambda r: f"{r.median_ms:.3f}")):
            out.append(f"### {fam} graph: {title}\n")
            out.append(header)
            out.append(rule)
            for mode in modes:
                vals = [value(cell[(g, d, mode)]) if (g, d, mode) in cell else "-" for g, d in columns]
                out.append(f"| {MODE_LABELS.get(mode, mode)} | " + " | ".join(vals) + " |")
            out.append("")
    return "\n".join(out)


def _split(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_bench(args) -> int:
    try:
        dims = [int(x) for x in _split(args.dims)]
    except ValueError:
        raise CliError(f"bad --dims {args.dims!r}", EXIT_USAGE)
    modes = _split(args.modes)
    for m in modes:
        if m not in MODES:
            raise CliError(f"unknown mode {m!r}; choose from {', '.join(MODES)}", EXIT_USAGE)
    gates = _split(args.gates)
    for gate in gates:
        if gate != "random":
            # validate names up front against a dimension they support
            gate_from_name(gate, 4 if gate.partition(":")[0] in TWO_QUBIT_GATES else max(dims + [2]))
    seed = default_seed() if args.seed is None else args.seed
    log = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    records = run_bench(
        _split(args.graphs), dims, gates, modes, args.reps, args.samples, seed, args.qubit_order, log, args.layer_order
    )
    text = format_csv(records) if args.format == "csv" else format_markdown(records)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="taqr", description="Transition-aware decomposition of single-qudit gates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="decompose a unitary into allowed pulses")
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.add_argument("--graph", required=True, help="preset (line:4, star:5, bipartite:6:2) or graph JSON path")
    p.add_argument("--mode", choices=MODES, default="static")
    p.add_argument("--tol", type=float, default=UNITARY_TOL, help="unitarity tolerance for the input")
    p.add_argument("--out", help="pulse JSON output (default stdout)")
    p.add_argument("--verify", action="store_true", help="print a verification report")
    p.add_argument("--photonic", action="store_true", help="emit beam-splitter/phase pulses")
    p.add_argument("--row-order", help="explicit static row order, e.g. 4,3,2,1")
    p.add_argument("--layer-order", choices=LAYER_ORDERS, default="descending")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check a pulse file against a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--pulses", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--tol", type=float, default=UNITARY_TOL, help="unitarity tolerance for the input")
    p.add_argument("--distance-tol", type=float, default=None, help="reconstruction tolerance (default 1e-9*d)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gate", help="write a built-in gate as matrix JSON")
    p.add_argument("name", help="x+1, x-1, x+k:<k>, z, qft, swap:<i>:<j>, rxx[:chi], rzz[:chi], cx, cz, ch, swap2q")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--qubit-order", choices=("big", "little"), default="big")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("random", help="write a Haar-random unitary as matrix JSON")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help="default: $TAQR_SEED or 0")
    p.add_argument("--out")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("scheme", help="print the static elimination scheme of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--row-order")
    p.add_argument("--layer-order", choices=LAYER_ORDERS, default="descending")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("bench", help="gate-count and timing tables")
    p.add_argument("--graphs", default="line,star,bipartite")
    p.add_argument("--dims", default="4,5,6")
    p.add_argument("--gates", default=DEFAULT_GATES)
    p.add_argument("--modes", default="static,adaptive")
    p.add_argument("--reps", type=int, default=20, help="timing repetitions for fixed gates")
    p.add_argument("--samples", type=int, default=100, help="Haar samples for the random gate")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--qubit-order", choices=("big", "little"), default="big")
    p.add_argument("--layer-order", choices=LAYER_ORDERS, default="descending")
    p.add_argument("--format", choices=("csv", "md"), default="md")
    p.add_argument("--out")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"taqr: {exc}", file=sys.stderr)
        return exc.code
    except ValidationError as exc:
        print(f"taqr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TaqrError as exc:
        print(f"taqr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"taqr: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
