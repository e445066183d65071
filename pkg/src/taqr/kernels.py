"""Hot loops of the row-elimination engine.

Every kernel exists twice: a scalar-loop version compiled with numba and a
vectorised numpy version. ``eliminate_row`` and ``run_scheme`` dispatch to
whichever backend :mod:`taqr._accel` selected; both variants are importable
for testing and benchmarking.

All kernels mutate the working matrix ``U`` in place (complex128, C order).
A rotation step records ``(theta, phi)`` such that the working matrix was
right-multiplied by ``R(-theta, phi)`` on levels ``(z, p)``.
"""

import math

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

TWO_PI = 2.0 * math.pi
SKIP_TOL = 1e-12


def _wrap_angle(x):
    y = x - TWO_PI * math.floor((x + math.pi) / TWO_PI)
    if y <= -math.pi:
        y += TWO_PI
    return y


def _arg(u):
    # arg(0) := 0
    if u.real == 0.0 and u.imag == 0.0:
        return 0.0
    return math.atan2(u.imag, u.real)


def _solve(uz, up):
    theta = 2.0 * math.atan2(abs(uz), abs(up))
    phi = _wrap_angle(0.5 * math.pi + _arg(uz) - _arg(up))
    return theta, phi


_wrap_angle_jit = njit(cache=True)(_wrap_angle)
_arg_jit = njit(cache=True)(_arg)


@njit(cache=True)
def _solve_jit(uz, up):
    theta = 2.0 * math.atan2(abs(uz), abs(up))
    phi = _wrap_angle_jit(0.5 * math.pi + _arg_jit(uz) - _arg_jit(up))
    return theta, phi


# --------------------------------------------------------------------------
# numba backend


@njit(cache=True)
def _mix_columns_jit(U, z, p, theta, phi):
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    e = complex(math.cos(phi), math.sin(phi))
    a = 1j * e * s
    b = 1j * e.conjugate() * s
    for k in range(U.shape[0]):
        uz = U[k, z]
        up = U[k, p]
        U[k, z] = c * uz + a * up
        U[k, p] = b * uz + c * up


@njit(cache=True)
def _eliminate_row_jit(U, row, zs, ps, skip_tol, thetas, phis, emitted):
    residual = 0.0
    for n in range(zs.shape[0]):
        z = zs[n]
        p = ps[n]
        uz = U[row, z]
        if abs(uz) <= skip_tol:
            thetas[n] = 0.0
            phis[n] = 0.0
            emitted[n] = False
            continue
        theta, phi = _solve_jit(uz, U[row, p])
        _mix_columns_jit(U, z, p, theta, phi)
        thetas[n] = theta
        phis[n] = phi
        emitted[n] = True
    for n in range(zs.shape[0]):
        r = abs(U[row, zs[n]])
        if r > residual:
            residual = r
    alpha = _arg_jit(U[row, row])
    d = U.shape[0]
    for k in range(d):
        U[row, k] = 0.0
        U[k, row] = 0.0
    U[row, row] = 1.0
    return alpha, residual


@njit(cache=True)
def _run_scheme_jit(U, rows, offsets, zs, ps, skip_tol, thetas, phis, emitted, alphas):
    residual = 0.0
    for r in range(rows.shape[0]):
        a = offsets[r]
        b = offsets[r + 1]
        alpha, res = _eliminate_row_jit(
            U, rows[r], zs[a:b], ps[a:b], skip_tol, thetas[a:b], phis[a:b], emitted[a:b]
        )
        alphas[r] = alpha
        if res > residual:
            residual = res
    return residual


# --------------------------------------------------------------------------
# numpy backend


def mix_columns_numpy(U, z, p, theta, phi):
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    e = complex(math.cos(phi), math.sin(phi))
    col_z = U[:, z].copy()
    col_p = U[:, p]
    U[:, z] = c * col_z + (1j * e * s) * col_p
    U[:, p] = (1j * e.conjugate() * s) * col_z + c * col_p


def _eliminate_row_numpy(U, row, zs, ps, skip_tol, thetas, phis, emitted):
    for n, (z, p) in enumerate(zip(zs.tolist(), ps.tolist())):
        uz = complex(U[row, z])
        if abs(uz) <= skip_tol:
            thetas[n] = phis[n] = 0.0
            emitted[n] = False
            continue
        theta, phi = _solve(uz, complex(U[row, p]))
        mix_columns_numpy(U, z, p, theta, phi)
        thetas[n] = theta
        phis[n] = phi
        emitted[n] = True
    residual = float(np.abs(U[row, zs]).max()) if len(zs) else 0.0
    alpha = _arg(complex(U[row, row]))
    U[row, :] = 0.0
    U[:, row] = 0.0
    U[row, row] = 1.0
    return alpha, residual


def _run_scheme_numpy(U, rows, offsets, zs, ps, skip_tol, thetas, phis, emitted, alphas):
    residual = 0.0
    for r in range(len(rows)):
        a, b = offsets[r], offsets[r + 1]
        alpha, res = _eliminate_row_numpy(
            U, int(rows[r]), zs[a:b], ps[a:b], skip_tol, thetas[a:b], phis[a:b], emitted[a:b]
        )
        alphas[r] = alpha
        residual = max(residual, res)
    return residual


# --------------------------------------------------------------------------
# dispatch

KERNELS = {"numpy": (_eliminate_row_numpy, _run_scheme_numpy)}
if HAVE_NUMBA:
    KERNELS["numba"] = (_eliminate_row_jit, _run_scheme_jit)


def solve(uz, up):
    """Angles ``(theta, phi)`` that cancel ``uz`` against the pivot ``up``."""
    return _solve(complex(uz), complex(up))


def eliminate_row(U, row, zs, ps, skip_tol=SKIP_TOL, backend=None):
    """Zero the off-diagonal entries of ``U[row]`` in place.

    Returns ``(thetas, phis, emitted, alpha, residual)`` where ``alpha`` is the
    phase that was stripped from the diagonal and ``residual`` the largest
    magnitude left at an eliminated position before clamping.
    """
    kernel = KERNELS[backend or BACKEND][0]
    zs = np.ascontiguousarray(zs, dtype=np.int64)
    ps = np.ascontiguousarray(ps, dtype=np.int64)
    m = zs.shape[0]
    thetas = np.zeros(m)
    phis = np.zeros(m)
    emitted = np.zeros(m, dtype=np.bool_)
    alpha, residual = kernel(U, int(row), zs, ps, float(skip_tol), thetas, phis, emitted)
    return thetas, phis, emitted, alpha, residual


def run_scheme(U, rows, offsets, zs, ps, skip_tol=SKIP_TOL, backend=None):
    """Apply every row of a flattened elimination scheme to ``U`` in place."""
    kernel = KERNELS[backend or BACKEND][1]
    m = zs.shape[0]
    thetas = np.zeros(m)
    phis = np.zeros(m)
    emitted = np.zeros(m, dtype=np.bool_)
    alphas = np.zeros(rows.shape[0])
    residual = kernel(U, rows, offsets, zs, ps, float(skip_tol), thetas, phis, emitted, alphas)
    return thetas, phis, emitted, alphas, residual


def warmup(backend=None):
    """Trigger compilation (or cache loading) so later timings exclude it."""
    U = np.eye(2, dtype=np.complex128)[:, ::-1].copy()
    run_scheme(
        U,
        np.array([1], dtype=np.int64),
        np.array([0, 1], dtype=np.int64),
        np.array([0], dtype=np.int64),
        np.array([1], dtype=np.int64),
        backend=backend,
    )
    eliminate_row(np.eye(2, dtype=np.complex128), 1, [0], [1], backend=backend)
