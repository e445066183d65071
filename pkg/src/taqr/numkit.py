"""Dense complex-matrix core and the pulse primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Pulses are small
frozen dataclasses; a :class:`PulseSequence` lists them in application order,
so the first pulse acts first and the composed unitary is the reversed
product ``M(p_m) @ ... @ M(p_1)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidInputError,
    LevelIndexError,
    NotUnitaryError,
    SpecParseError,
)
from .kernels import TWO_PI, mix_columns_numpy

UNITARY_TOL = 1e-8
ZERO_TOL = 1e-12


def wrap_angle(x: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    y = math.remainder(x, TWO_PI)
    if y <= -math.pi:
        y += TWO_PI
    return y


def _wrap_theta(x: float) -> float:
    # rotation angles have period 4*pi; keep them in (-2*pi, 2*pi]
    y = math.remainder(x, 2 * TWO_PI)
    if y <= -TWO_PI:
        y += 2 * TWO_PI
    return y


@dataclass(frozen=True)
class Rotation:
    """Two-level transition ``R^{ij}(theta, phi)``.

    Stored with ``i < j``; swapping the level order is absorbed by negating
    ``phi`` since ``sigma^{ji}_phi == sigma^{ij}_{-phi}``.
    """

    i: int
    j: int
    theta: float
    phi: float

    def __post_init__(self):
        i, j = int(self.i), int(self.j)
        if i == j:
            raise InvalidInputError(f"rotation needs two distinct levels, got ({i}, {j})")
        if i < 0 or j < 0:
            raise LevelIndexError(f"negative level index in ({i}, {j})")
        phi = float(self.phi)
        if i > j:
            i, j, phi = j, i, -phi
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "theta", _wrap_theta(float(self.theta)))
        object.__setattr__(self, "phi", wrap_angle(phi))

    @property
    def levels(self) -> tuple[int, int]:
        return (self.i, self.j)

    def block(self) -> np.ndarray:
        c = math.cos(0.5 * self.theta)
        s = math.sin(0.5 * self.theta)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([[c, -1j * e.conjugate() * s], [-1j * e * s, c]])


@dataclass(frozen=True)
class Phase:
    """Phase shift ``Ph_k(theta) = exp(i theta |k><k|)``."""

    k: int
    theta: float

    def __post_init__(self):
        if int(self.k) < 0:
            raise LevelIndexError(f"negative level index {self.k}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    @property
    def levels(self) -> tuple[int]:
        return (self.k,)


@dataclass(frozen=True)
class BeamSplitter:
    """Photonic beam splitter with real amplitude reflection ``r``.

    The matrix on ``(i, j)`` is ``[[r, -t], [t, r]]`` with ``t = sqrt(1 - r^2)``.
    """

    i: int
    j: int
    r: float

    def __post_init__(self):
        if self.i == self.j:
            raise InvalidInputError("beam splitter needs two distinct levels")
        if min(self.i, self.j) < 0:
            raise LevelIndexError(f"negative level index in ({self.i}, {self.j})")
        r = float(self.r)
        if not -1e-12 <= r <= 1 + 1e-12:
            raise InvalidInputError(f"reflection amplitude {r} outside [0, 1]")
        object.__setattr__(self, "r", min(max(r, 0.0), 1.0))

    @property
    def levels(self) -> tuple[int, int]:
        return (self.i, self.j)

    def block(self) -> np.ndarray:
        t = math.sqrt(max(0.0, (1.0 - self.r) * (1.0 + self.r)))
        return np.array([[self.r, -t], [t, self.r]], dtype=complex)


Pulse = Union[Rotation, Phase, BeamSplitter]


@dataclass(frozen=True)
class PulseSequence:
    dim: int
    pulses: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if int(self.dim) < 1:
            raise InvalidDimensionError(f"dimension must be positive, got {self.dim}")
        object.__setattr__(self, "pulses", tuple(self.pulses))
        for p in self.pulses:
            if max(p.levels) >= self.dim:
                raise LevelIndexError(f"{p} does not fit a {self.dim}-level system")

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self) -> Iterator[Pulse]:
        return iter(self.pulses)

    @property
    def rotations(self) -> list[Rotation]:
        return [p for p in self.pulses if isinstance(p, Rotation)]

    @property
    def rotation_count(self) -> int:
        return sum(isinstance(p, Rotation) for p in self.pulses)

    @property
    def phase_count(self) -> int:
        return sum(isinstance(p, Phase) for p in self.pulses)

    @property
    def beam_splitter_count(self) -> int:
        return sum(isinstance(p, BeamSplitter) for p in self.pulses)

    def matrix(self) -> np.ndarray:
        return compose_pulses(self)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "pulses": [pulse_to_dict(p) for p in self.pulses]}

    @classmethod
    def from_dict(cls, data: dict) -> "PulseSequence":
        try:
            return cls(int(data["dim"]), [pulse_from_dict(p) for p in data["pulses"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (LevelIndexError, InvalidDimensionError, InvalidInputError)):
                raise
            raise SpecParseError(f"malformed pulse JSON: {exc}") from exc


def pulse_to_dict(p: Pulse) -> dict:
    if isinstance(p, Rotation):
        return {"type": "R", "i": p.i, "j": p.j, "theta": p.theta, "phi": p.phi}
    if isinstance(p, Phase):
        return {"type": "Ph", "k": p.k, "theta": p.theta}
    if isinstance(p, BeamSplitter):
        return {"type": "BS", "i": p.i, "j": p.j, "r": p.r}
    raise InvalidInputError(f"not a pulse: {p!r}")


def pulse_from_dict(data: dict) -> Pulse:
    kind = data["type"]
    if kind == "R":
        return Rotation(int(data["i"]), int(data["j"]), float(data["theta"]), float(data["phi"]))
    if kind == "Ph":
        return Phase(int(data["k"]), float(data["theta"]))
    if kind == "BS":
        return BeamSplitter(int(data["i"]), int(data["j"]), float(data["r"]))
    raise SpecParseError(f"unknown pulse type {kind!r}")


# --------------------------------------------------------------------------
# matrix helpers


def as_square(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


def unitarity_error(M) -> float:
    A = as_square(M)
    return float(np.linalg.norm(A.conj().T @ A - np.eye(A.shape[0])))


def is_unitary(M, tol: float = UNITARY_TOL) -> bool:
    """True iff ``||M^dagger M - I||_F <= tol``."""
    return unitarity_error(M) <= tol


def check_unitary(M, tol: float = UNITARY_TOL) -> np.ndarray:
    A = as_square(M)
    err = unitarity_error(A)
    if err > tol:
        raise NotUnitaryError(f"matrix is not unitary: ||M^dag M - I||_F = {err:.3e} > {tol:g}")
    return A


def haar_random_unitary(d: int, seed=None) -> np.ndarray:
    """Draw a Haar-distributed ``d x d`` unitary.

    QR of a complex Ginibre matrix, with the columns of ``Q`` rotated by the
    phases of ``diag(R)`` so the factorisation is unique and the result
    uniformly distributed.
    """
    if int(d) < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R)
    return Q * (diag / np.abs(diag))


def pulse_to_matrix(p: Pulse, d: int) -> np.ndarray:
    """Embed a pulse as a ``d x d`` unitary acting trivially off its levels."""
    if max(p.levels) >= d:
        raise LevelIndexError(f"{p} does not fit a {d}-level system")
    M = np.eye(d, dtype=complex)
    if isinstance(p, Phase):
        M[p.k, p.k] = complex(math.cos(p.theta), math.sin(p.theta))
    else:
        idx = np.ix_(p.levels, p.levels)
        M[idx] = p.block()
    return M


def _apply_left(M: np.ndarray, p: Pulse) -> None:
    # M <- pulse_matrix(p) @ M, touching only the pulse's rows
    if isinstance(p, Phase):
        M[p.k, :] *= complex(math.cos(p.theta), math.sin(p.theta))
        return
    B = p.block()
    rows = M[list(p.levels), :]
    M[list(p.levels), :] = B @ rows


def compose_pulses(seq: Union[PulseSequence, Iterable[Pulse]], d: int = None) -> np.ndarray:
    """Unitary implemented by a pulse list given in application order."""
    if isinstance(seq, PulseSequence):
        if d is not None and d != seq.dim:
            raise DimensionMismatchError(f"sequence has dim {seq.dim}, requested {d}")
        d, pulses = seq.dim, seq.pulses
    else:
        pulses = list(seq)
        if d is None:
            raise DimensionMismatchError("dimension required for a bare pulse list")
    M = np.eye(d, dtype=complex)
    for p in pulses:
        if max(p.levels) >= d:
            raise DimensionMismatchError(f"{p} does not fit a {d}-level system")
        _apply_left(M, p)
    return M


def right_mix_columns(U, i: int, j: int, theta: float, phi: float) -> np.ndarray:
    """Return ``U @ R^{ij}(-theta, phi)``; only columns ``i`` and ``j`` change.

    Each row's pair ``(U[k, i], U[k, j])`` is transformed by
    ``R(-theta, phi)^T``. The input is not modified.
    """
    A = np.array(as_square(U), dtype=complex)
    d = A.shape[0]
    if i == j:
        raise InvalidInputError("column mixing needs two distinct levels")
    if not (0 <= i < d and 0 <= j < d):
        raise LevelIndexError(f"levels ({i}, {j}) out of range for dim {d}")
    mix_columns_numpy(A, i, j, theta, phi)
    return A


def frobenius_distance(A, B) -> float:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise DimensionMismatchError(f"shape mismatch {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A - B))


# --------------------------------------------------------------------------
# matrix JSON


def matrix_to_dict(M) -> dict:
    A = as_square(M)
    return {"dim": A.shape[0], "re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_dict(data: dict, tol: float = UNITARY_TOL) -> np.ndarray:
    try:
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
        dim = int(data.get("dim", re.shape[0] if re.ndim else 0))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SpecParseError(f"malformed matrix JSON: {exc}") from exc
    if re.shape != im.shape:
        raise SpecParseError(f"re/im shapes differ: {re.shape} vs {im.shape}")
    A = as_square(re + 1j * im)
    if A.shape[0] != dim:
        raise DimensionMismatchError(f"declared dim {dim} but matrix is {A.shape[0]}x{A.shape[1]}")
    return check_unitary(A, tol)


def dump_matrix(M, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(M), fh)
        fh.write("\n")


def load_matrix(path, tol: float = UNITARY_TOL) -> np.ndarray:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"{path}: invalid JSON ({exc})") from exc
    return matrix_from_dict(data, tol)
