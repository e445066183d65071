"""Row-elimination decomposition of qudit unitaries into allowed pulses.

The working matrix is right-multiplied by ``R^{zp}(-theta, phi)`` until every
row is reduced to a diagonal phase. Inverting that product gives the pulse
list in application order: the rotations ``R^{zp}(theta, phi)`` in the order
they were found, each row followed by the phase stripped from its diagonal.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import (
    DegenerateEliminationError,
    DimensionMismatchError,
    InternalError,
    InvalidInputError,
)
from .numkit import (
    UNITARY_TOL,
    ZERO_TOL,
    BeamSplitter,
    Phase,
    PulseSequence,
    Rotation,
    check_unitary,
    compose_pulses,
    frobenius_distance,
)
from .topo import (
    EliminationScheme,
    TransitionGraph,
    build_static_scheme,
    line_graph,
    prune_for_row,
    removable_levels,
    row_steps,
)

SPARSITY_TOL = 1e-9
# eliminated entries must be this small before the row is clamped
RESIDUAL_TOL = 1e-9


def solve_elimination(u_z: complex, u_p: complex) -> tuple[float, float]:
    """Angles that cancel ``u_z`` against the pivot ``u_p``.

    Returns ``theta = 2 atan2(|u_z|, |u_p|)`` in ``[0, pi]`` and
    ``phi = pi/2 + arg(u_z) - arg(u_p)`` wrapped to ``(-pi, pi]``, so that
    ``cos(theta/2) u_z + i e^{i phi} sin(theta/2) u_p == 0``.
    """
    if abs(u_z) <= ZERO_TOL and abs(u_p) <= ZERO_TOL:
        raise DegenerateEliminationError("both elimination operands vanish")
    return kernels.solve(u_z, u_p)


def _prepare(U, tol: float) -> np.ndarray:
    A = check_unitary(U, tol)
    return np.array(A, dtype=np.complex128, order="C", copy=True)


def _row_pulses(row, steps, thetas, phis, emitted, alpha) -> list:
    out = [
        Rotation(z, p, float(t), float(f))
        for (z, p), t, f, keep in zip(steps, thetas, phis, emitted)
        if keep
    ]
    if abs(alpha) > ZERO_TOL:
        out.append(Phase(row, float(alpha)))
    return out


def eliminate_row(U: np.ndarray, row: int, steps: Sequence[tuple[int, int]], backend: Optional[str] = None):
    """Clear the off-diagonal entries of ``U[row]`` in place.

    ``U`` must be a writeable complex128 array. Returns the emitted pulses in
    application order: one rotation per step whose target entry was nonzero,
    then the diagonal phase. Afterwards row and column ``row`` of ``U`` hold
    exact zeros and the diagonal entry is exactly 1.
    """
    if U.dtype != np.complex128 or not U.flags.c_contiguous:
        raise InvalidInputError("eliminate_row works in place on a C-ordered complex128 array")
    steps = [(int(z), int(p)) for z, p in steps]
    zs = np.array([z for z, _ in steps], dtype=np.int64)
    ps = np.array([p for _, p in steps], dtype=np.int64)
    thetas, phis, emitted, alpha, residual = kernels.eliminate_row(U, row, zs, ps, backend=backend)
    if residual > RESIDUAL_TOL:
        raise InternalError(f"row {row} not cleared: residual {residual:.3e}")
    return _row_pulses(row, steps, thetas, phis, emitted, alpha)


def _final_phase(U: np.ndarray, level: int) -> list:
    alpha = math.atan2(U[level, level].imag, U[level, level].real)
    return [Phase(level, alpha)] if abs(alpha) > ZERO_TOL else []


def decompose_static(
    U,
    scheme: EliminationScheme,
    tol: float = UNITARY_TOL,
    backend: Optional[str] = None,
) -> PulseSequence:
    """Decompose ``U`` along a precomputed elimination scheme."""
    W = _prepare(U, tol)
    d = W.shape[0]
    if scheme.dim != d:
        raise DimensionMismatchError(f"scheme is for d={scheme.dim}, matrix is {d}x{d}")
    rows, offsets, zs, ps = scheme.flat
    thetas, phis, emitted, alphas, residual = kernels.run_scheme(W, rows, offsets, zs, ps, backend=backend)
    if residual > RESIDUAL_TOL:
        raise InternalError(f"scheme left residual {residual:.3e}")
    pulses = []
    for r, (row, steps) in enumerate(scheme.rows):
        a, b = offsets[r], offsets[r + 1]
        pulses.extend(_row_pulses(row, steps, thetas[a:b], phis[a:b], emitted[a:b], alphas[r]))
    pulses.extend(_final_phase(W, scheme.last))
    return PulseSequence(d, pulses)


def _pick_adaptive_row(W, g, active, sparsity_tol):
    best = None
    idx = sorted(active)
    for r in removable_levels(g, active):
        mags = np.abs(W[r, idx])
        zero = {c for c, m in zip(idx, mags) if c != r and m <= sparsity_tol}
        nnz = len(idx) - 1 - len(zero)
        retained = prune_for_row(g, active, r, zero)
        key = (nnz, len(retained), -r)
        if best is None or key < best[0]:
            best = (key, r, retained)
    return best[1], best[2]


def decompose_adaptive(
    U,
    g: TransitionGraph,
    tol: float = UNITARY_TOL,
    sparsity_tol: float = SPARSITY_TOL,
    backend: Optional[str] = None,
    layer_order: str = "descending",
) -> PulseSequence:
    """Decompose ``U`` with a scheme tailored to its zero pattern.

    Each step eliminates the removable row with the fewest nonzero
    off-diagonal entries, ties going to the row whose pruned level set is
    smallest and then to the highest index. Zero entries whose levels can be
    dropped without disconnecting the graph are skipped for that row.
    """
    W = _prepare(U, tol)
    d = W.shape[0]
    if g.dim != d:
        raise DimensionMismatchError(f"graph is for d={g.dim}, matrix is {d}x{d}")
    g.require_connected()
    active = set(range(d))
    pulses = []
    while len(active) > 1:
        row, retained = _pick_adaptive_row(W, g, active, sparsity_tol)
        steps = row_steps(g, retained, row, layer_order)
        pulses.extend(eliminate_row(W, row, steps, backend=backend))
        # pruned levels held entries below sparsity_tol; the clamp discards them
        active.remove(row)
    pulses.extend(_final_phase(W, active.pop()))
    return PulseSequence(d, pulses)


def _shortest_path(g: TransitionGraph, src: int, dst: int) -> list[int]:
    prev = {src: None}
    frontier = [src]
    while frontier and dst not in prev:
        nxt = []
        for v in frontier:
            for w in g.adj[v]:
                if w not in prev:
                    prev[w] = v
                    nxt.append(w)
        frontier = nxt
    if dst not in prev:
        raise InvalidInputError(f"no path between levels {src} and {dst}")
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def level_swap_pulse(a: int, b: int) -> Rotation:
    """``Sw^{ab} = R^{ab}(pi, pi/2)``: sends ``|a>`` to ``|b>`` and ``|b>`` to ``-|a>``."""
    return Rotation(a, b, math.pi, math.pi / 2)


def route_rotation(rot: Rotation, g: TransitionGraph) -> list:
    """Rewrite a rotation on a forbidden pair as swap-conjugated allowed pulses.

    Uses ``R^{aj} = Sw^{ba} . R^{bj} . Sw^{ab}`` along a shortest path from
    ``i`` towards ``j``; on a star graph this is one swap pair through the hub.
    """
    if g.has_edge(rot.i, rot.j):
        return [rot]
    path = _shortest_path(g, rot.i, rot.j)
    # move level i next to j along the path, rotate, then move it back
    pre = [level_swap_pulse(path[k], path[k + 1]) for k in range(len(path) - 2)]
    post = [level_swap_pulse(path[k + 1], path[k]) for k in reversed(range(len(path) - 2))]
    a = path[-2]
    # level a now plays the role of i
    core = Rotation(a, rot.j, rot.theta, rot.phi)
    return pre + [core] + post


def swap_route_baseline(U, g: TransitionGraph, tol: float = UNITARY_TOL, backend: Optional[str] = None) -> PulseSequence:
    """Naive baseline: line-graph elimination, then swap-route forbidden pulses."""
    d = np.asarray(U).shape[0]
    if g.dim != d:
        raise DimensionMismatchError(f"graph is for d={g.dim}, matrix is {d}x{d}")
    g.require_connected()
    seq = decompose_static(U, build_static_scheme(line_graph(d)), tol, backend=backend)
    pulses = []
    for p in seq:
        pulses.extend(route_rotation(p, g) if isinstance(p, Rotation) else [p])
    return PulseSequence(d, pulses)


@dataclass
class VerificationReport:
    distance: float
    rotation_count: int
    phase_count: int
    all_edges_allowed: bool
    elapsed: float = 0.0
    tol: float = float("nan")

    @property
    def ok(self) -> bool:
        return self.all_edges_allowed and self.distance <= self.tol

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "rotations": self.rotation_count,
            "phases": self.phase_count,
            "legal": self.all_edges_allowed,
            "ms": self.elapsed * 1e3,
        }


def verify(U, seq: PulseSequence, g: TransitionGraph, tol: Optional[float] = None, elapsed: float = 0.0) -> VerificationReport:
    """Check that ``seq`` rebuilds ``U`` using only edges of ``g``.

    ``tol`` defaults to ``1e-9 * d``.
    """
    A = np.asarray(U, dtype=complex)
    d = A.shape[0]
    if seq.dim != d or g.dim != d or A.shape != (d, d):
        raise DimensionMismatchError(f"dims differ: matrix {A.shape}, sequence {seq.dim}, graph {g.dim}")
    if any(isinstance(p, BeamSplitter) for p in seq):
        raise InvalidInputError("verify expects rotation/phase sequences, not photonic ones")
    rots = seq.rotations
    return VerificationReport(
        distance=frobenius_distance(compose_pulses(seq), A),
        rotation_count=len(rots),
        phase_count=seq.phase_count,
        all_edges_allowed=all(g.has_edge(r.i, r.j) for r in rots),
        elapsed=elapsed,
        tol=1e-9 * d if tol is None else tol,
    )


MODES = ("static", "adaptive", "swap-baseline")


def decompose(
    U,
    g: TransitionGraph,
    mode: str = "static",
    tol: float = UNITARY_TOL,
    scheme=None,
    layer_order: str = "descending",
) -> PulseSequence:
    """Front door dispatching on ``mode``; ``scheme`` is reused for static mode."""
    if mode == "static":
        d = np.asarray(U).shape[0]
        if g.dim != d:
            raise DimensionMismatchError(f"graph is for d={g.dim}, matrix is {d}x{d}")
        return decompose_static(U, scheme or build_static_scheme(g, layer_order=layer_order), tol)
    if mode == "adaptive":
        return decompose_adaptive(U, g, tol, layer_order=layer_order)
    if mode == "swap-baseline":
        return swap_route_baseline(U, g, tol)
    raise InvalidInputError(f"unknown mode {mode!r}; choose from {MODES}")


def timed_decompose(U, g, mode="static", tol=UNITARY_TOL, scheme=None):
    t0 = time.perf_counter()
    seq = decompose(U, g, mode, tol, scheme)
    return seq, time.perf_counter() - t0
