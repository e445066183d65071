import os
import subprocess
import sys

import numpy as np
import pytest

from taqr import kernels
from taqr.numkit import haar_random_unitary, right_mix_columns
from taqr.topo import build_static_scheme, random_connected_graph

needs_numba = pytest.mark.skipif("numba" not in kernels.KERNELS, reason="numba not installed")


def test_numpy_mix_matches_reference(rng):
    U = haar_random_unitary(5, rng)
    W = U.copy()
    kernels.mix_columns_numpy(W, 3, 1, 1.2, -0.4)
    np.testing.assert_allclose(W, right_mix_columns(U, 3, 1, 1.2, -0.4), atol=1e-15)


@needs_numba
def test_jit_mix_matches_reference(rng):
    U = haar_random_unitary(5, rng)
    W = U.copy()
    kernels._mix_columns_jit(W, 3, 1, 1.2, -0.4)
    np.testing.assert_allclose(W, right_mix_columns(U, 3, 1, 1.2, -0.4), atol=1e-15)


@needs_numba
@pytest.mark.parametrize("seed", range(10))
def test_run_scheme_backends_agree(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 10))
    g = random_connected_graph(d, rng)
    rows, offsets, zs, ps = build_static_scheme(g).flat
    U = haar_random_unitary(d, rng)
    out = {}
    for name in ("numpy", "numba"):
        W = U.copy()
        out[name] = kernels.run_scheme(W, rows, offsets, zs, ps, backend=name) + (W,)
    for a, b in zip(out["numpy"], out["numba"]):
        np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("uz,up", [(0.3 + 0.1j, -0.2j), (1, 0), (0, 1), (-1, -1)])
def test_solve_scalar_paths_agree(uz, up):
    a = kernels._solve(complex(uz), complex(up))
    if "numba" in kernels.KERNELS:
        b = kernels._solve_jit(complex(uz), complex(up))
        assert a == pytest.approx(b, abs=1e-15)
    assert -np.pi < a[1] <= np.pi


def test_skip_branch(backend):
    U = np.eye(3, dtype=complex)
    thetas, phis, emitted, alpha, res = kernels.eliminate_row(U, 2, [0, 1], [1, 2], backend=backend)
    assert not emitted.any() and alpha == 0 and res == 0


def test_env_flag_forces_numpy():
    env = dict(os.environ, TAQR_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import taqr.kernels as k; print(k.BACKEND, sorted(k.KERNELS))"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.split()[0] == "numpy"
    assert "numba" not in out.stdout


def test_warmup_runs(backend):
    kernels.warmup(backend)
