"""Compare the numba and numpy elimination kernels.

    python benchmarks/bench_backends.py --dims 4,8,16,32 --samples 200

Prints the median time of one static decomposition per backend and the
speedup. Both backends run on identical inputs and their outputs are checked
against each other before timing.
"""

import argparse
import statistics
import time

import numpy as np

from taqr import kernels
from taqr.numkit import haar_random_unitary
from taqr.topo import build_static_scheme, preset_graph


def time_backend(backend, matrices, flat, repeat):
    rows, offsets, zs, ps = flat
    times = []
    for U in matrices:
        for _ in range(repeat):
            W = U.copy()
            t0 = time.perf_counter()
            kernels.run_scheme(W, rows, offsets, zs, ps, backend=backend)
            times.append(time.perf_counter() - t0)
    return statistics.median(times)


def check_agreement(matrices, flat):
    for U in matrices[:10]:
        outs = []
        for backend in kernels.KERNELS:
            W = U.copy()
            outs.append(kernels.run_scheme(W, *flat, backend=backend)[:2] + (W,))
        for a, b in zip(outs[0], outs[-1]):
            np.testing.assert_allclose(a, b, atol=1e-12)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", default="line", help="preset family: line, star, complete")
    ap.add_argument("--dims", default="4,6,8,16,32")
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = sorted(kernels.KERNELS)
    for b in backends:
        kernels.warmup(b)
    if "numba" not in backends:
        print("numba unavailable (or TAQR_DISABLE_NUMBA set); timing numpy only")

    print(f"{'d':>4} " + " ".join(f"{b + ' ms':>12}" for b in backends) + ("  speedup" if len(backends) > 1 else ""))
    rng = np.random.default_rng(args.seed)
    for d in (int(x) for x in args.dims.split(",")):
        flat = build_static_scheme(preset_graph(f"{args.graph}:{d}")).flat
        matrices = [haar_random_unitary(d, rng) for _ in range(args.samples)]
        check_agreement(matrices, flat)
        ms = {b: 1e3 * time_backend(b, matrices, flat, args.repeat) for b in backends}
        line = f"{d:>4} " + " ".join(f"{ms[b]:>12.4f}" for b in backends)
        if len(backends) > 1:
            line += f"  {ms['numpy'] / ms['numba']:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
