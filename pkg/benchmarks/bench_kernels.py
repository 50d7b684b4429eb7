"""Compare the numba and numpy flavours of the hot kernels.

    python3 benchmarks/bench_kernels.py --repeat 5

Reports the best wall time per kernel, the speedup, and whether the two
flavours agree on the benchmark inputs.
"""

import argparse
import time

import numpy as np

from nthneighbour import _kernels as k
from nthneighbour._backend import HAVE_NUMBA
from nthneighbour.rng import make_stream
from nthneighbour.sim import _uniform_ball
from nthneighbour.specfun import geometry_constants


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def cases(args):
    rng = make_stream(args.seed)
    for dim, points in ((2, 50), (3, 1000), (5, 100)):
        clouds = _uniform_ball(rng, (args.clouds, points - 1), dim, geometry_constants(dim).unit_ball_radius)
        for kk in (1, 10):
            yield f"knn_select D={dim} N={points} k={kk}", (k.knn_select_numba, k.knn_select_numpy), (clouds, kk)
    p = rng.random(args.quantiles)
    for a, b in ((3, 17), (5, 45), (40, 960)):
        yield f"betainc_inv a={a} b={b}", (k.betainc_inv_numba, k.betainc_inv_numpy), (p, a, b)


def same(x, y):
    if isinstance(x, tuple):
        return np.array_equal(x[0], y[0])
    return np.allclose(x, y, rtol=1e-12, atol=1e-15)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--clouds", type=int, default=2000, help="point clouds per k-NN case")
    ap.add_argument("--quantiles", type=int, default=200_000, help="probabilities per inverse-beta case")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        ap.exit(1, "numba is not installed; nothing to compare\n")

    print(f"{'kernel':<32}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  agree")
    for name, (fast, slow), inputs in cases(args):
        fast(*inputs)  # compile outside the timed region
        t_fast, out_fast = best_of(lambda: fast(*inputs), args.repeat)
        t_slow, out_slow = best_of(lambda: slow(*inputs), args.repeat)
        print(f"{name:<32}{t_fast:>10.4f}{t_slow:>10.4f}{t_slow / t_fast:>8.1f}x  {same(out_fast, out_slow)}")


if __name__ == "__main__":
    main()
