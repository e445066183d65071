"""Named single-qudit gates, embedded two-qubit gates and photonic export."""

from __future__ import annotations

import math
import re
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidDimensionError, InvalidInputError, LevelIndexError, UnknownGateError
from .numkit import BeamSplitter, Phase, PulseSequence, Rotation, ZERO_TOL

# qubit basis index 2*q1 + q2 -> qudit level
BIG_ENDIAN = (0, 1, 2, 3)
# level = q1 + 2*q2, i.e. the target qubit is the high bit
LITTLE_ENDIAN = (0, 2, 1, 3)
QUBIT_ORDERS = {"big": BIG_ENDIAN, "little": LITTLE_ENDIAN}


def _check_dim(d: int, minimum: int = 2) -> int:
    d = int(d)
    if d < minimum:
        raise InvalidDimensionError(f"dimension must be >= {minimum}, got {d}")
    return d


def omega(d: int) -> complex:
    return complex(math.cos(2 * math.pi / d), math.sin(2 * math.pi / d))


def make_x_shift(d: int, k: int = 1) -> np.ndarray:
    """Cyclic shift ``|n> -> |n + k mod d>``."""
    d = _check_dim(d)
    M = np.zeros((d, d), dtype=complex)
    n = np.arange(d)
    M[(n + k) % d, n] = 1.0
    return M


def make_z(d: int) -> np.ndarray:
    d = _check_dim(d)
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def make_qft(d: int) -> np.ndarray:
    d = _check_dim(d)
    n = np.arange(d)
    # reduce the exponent first so large d keeps exact roots of unity
    return np.exp(2j * np.pi * (np.outer(n, n) % d) / d) / math.sqrt(d)


def make_level_swap(d: int, i: int, j: int) -> np.ndarray:
    d = _check_dim(d)
    if i == j:
        raise InvalidInputError("level swap needs two distinct levels")
    if not (0 <= i < d and 0 <= j < d):
        raise LevelIndexError(f"levels ({i}, {j}) out of range for dim {d}")
    perm = np.arange(d)
    perm[[i, j]] = perm[[j, i]]
    return np.eye(d, dtype=complex)[:, perm]


# --------------------------------------------------------------------------
# two-qubit gates in the |q1 q2> basis (q1 is the control)

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1.0 + 0j, -1.0])
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _controlled(U: np.ndarray) -> np.ndarray:
    M = np.eye(4, dtype=complex)
    M[2:, 2:] = U
    return M


def embed_two_qubit(G, levels: Optional[Sequence[int]] = None) -> np.ndarray:
    """Reinterpret a two-qubit unitary as a ququart gate.

    ``levels[b]`` names the qudit level holding basis state ``b = 2*q1 + q2``;
    the default is the identity map ``BIG_ENDIAN``.
    """
    G = np.asarray(G, dtype=complex)
    if G.shape != (4, 4):
        raise InvalidDimensionError(f"two-qubit gate must be 4x4, got {G.shape}")
    perm = np.asarray(BIG_ENDIAN if levels is None else levels)
    if sorted(perm.tolist()) != [0, 1, 2, 3]:
        raise InvalidInputError(f"level map {levels} is not a permutation of 0..3")
    M = np.zeros((4, 4), dtype=complex)
    M[np.ix_(perm, perm)] = G
    return M


def make_rxx(chi: float = math.pi / 2) -> np.ndarray:
    """``exp(-i chi X (x) X)``."""
    return math.cos(chi) * np.eye(4) - 1j * math.sin(chi) * np.kron(_X, _X)


def make_rzz(chi: float = math.pi / 2) -> np.ndarray:
    """``exp(-i chi Z (x) Z)``."""
    return math.cos(chi) * np.eye(4) - 1j * math.sin(chi) * np.kron(_Z, _Z)


def make_cx() -> np.ndarray:
    return _controlled(_X)


def make_cz() -> np.ndarray:
    return _controlled(_Z)


def make_ch() -> np.ndarray:
    return _controlled(_H)


def make_swap2q() -> np.ndarray:
    return np.eye(4, dtype=complex)[:, [0, 2, 1, 3]]


TWO_QUBIT_GATES = {
    "rxx": make_rxx,
    "rzz": make_rzz,
    "cx": make_cx,
    "cz": make_cz,
    "ch": make_ch,
    "swap2q": make_swap2q,
}

_ANGLE_GATES = ("rxx", "rzz")


_ANGLE_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


def _parse_angle(text: str) -> float:
    """Parse ``0.5``, ``pi``, ``-pi/4`` or ``3pi/2`` style angles."""
    expr = text.strip().lower().replace(" ", "")
    try:
        return float(expr)
    except ValueError:
        pass
    m = _ANGLE_RE.match(expr)
    if not m:
        raise UnknownGateError(f"cannot parse angle {text!r}")
    coeff = m.group(1)
    scale = {"": 1.0, "+": 1.0, "-": -1.0}.get(coeff)
    if scale is None:
        scale = float(coeff)
    return scale * math.pi / (float(m.group(2)) if m.group(2) else 1.0)


def gate_from_name(name: str, d: int, qubit_order: str = "big") -> np.ndarray:
    """Build a gate from its command-line name.

    Recognised names: ``x+1``, ``x-1``, ``x+k:<k>``, ``z``, ``qft``,
    ``swap:<i>:<j>``, ``rxx[:<chi>]``, ``rzz[:<chi>]``, ``cx``, ``cz``, ``ch``,
    ``swap2q``. Angles accept expressions such as ``pi/2``.
    """
    key = name.strip().lower()
    if key in ("x+1", "x-1"):
        return make_x_shift(d, 1 if key == "x+1" else -1)
    if key.startswith("x+k:"):
        try:
            k = int(key[4:])
        except ValueError as exc:
            raise UnknownGateError(f"bad shift in {name!r}") from exc
        return make_x_shift(d, k)
    if key == "z":
        return make_z(d)
    if key in ("qft", "h"):
        return make_qft(d)
    if key.startswith("swap:"):
        parts = key.split(":")
        if len(parts) != 3:
            raise UnknownGateError(f"expected swap:<i>:<j>, got {name!r}")
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UnknownGateError(f"bad levels in {name!r}") from exc
        return make_level_swap(d, i, j)
    base, _, arg = key.partition(":")
    if base in TWO_QUBIT_GATES:
        if int(d) != 4:
            raise InvalidDimensionError(f"two-qubit gate {base!r} needs dim 4, got {d}")
        if qubit_order not in QUBIT_ORDERS:
            raise UnknownGateError(f"unknown qubit order {qubit_order!r}")
        if arg and base not in _ANGLE_GATES:
            raise UnknownGateError(f"gate {base!r} takes no parameter")
        G = TWO_QUBIT_GATES[base](_parse_angle(arg)) if arg else TWO_QUBIT_GATES[base]()
        return embed_two_qubit(G, QUBIT_ORDERS[qubit_order])
    raise UnknownGateError(f"unknown gate {name!r}")


# --------------------------------------------------------------------------
# photonic export


def rotation_to_photonic(rot: Rotation, tol: float = ZERO_TOL) -> list:
    """Beam splitter plus phase shifts realising ``rot``, in application order.

    For ``0 <= theta <= pi`` this is the textbook triple
    ``Ph_j(pi/2 - phi), BS(cos(theta/2)), Ph_j(phi - pi/2)``; other angles pick
    up compensating phases so that ``r`` stays in ``[0, 1]``.
    """
    c = math.cos(0.5 * rot.theta)
    s = math.sin(0.5 * rot.theta)
    i, j = rot.i, rot.j
    if abs(s) <= tol:
        if c > 0:
            return []
        return [Phase(i, math.pi), Phase(j, math.pi)]
    after_j = rot.phi - 0.5 * math.pi + (math.pi if s < 0 else 0.0)
    before_j = (math.pi if c < 0 else 0.0) - after_j
    after_i = math.pi if c < 0 else 0.0
    out = [Phase(j, before_j), BeamSplitter(i, j, abs(c)), Phase(j, after_j), Phase(i, after_i)]
    return [p for p in out if not (isinstance(p, Phase) and abs(p.theta) <= tol)]


def export_photonic(seq: PulseSequence, tol: float = ZERO_TOL) -> PulseSequence:
    """Rewrite every rotation as beam splitter and phase pulses."""
    out = []
    for p in seq:
        if isinstance(p, BeamSplitter):
            raise InvalidInputError("sequence already contains beam splitters")
        if isinstance(p, Rotation):
            out.extend(rotation_to_photonic(p, tol))
        elif abs(p.theta) > tol:
            out.append(p)
    return PulseSequence(seq.dim, out)
