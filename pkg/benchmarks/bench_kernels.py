"""Time the compiled and numpy closed-form kernels on the same random grid.

    python3 benchmarks/bench_kernels.py [--points 1000000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from abring import kernels


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    g = rng.uniform(0.0, 1.5, args.points)
    phi = rng.uniform(0.0, np.pi / 2, args.points)
    k = rng.uniform(0.2, np.pi - 0.2, args.points)

    timings = {}
    for name in kernels.available_backends():
        best = min(timeit.repeat(lambda: kernels.closed_form(g, phi, k, backend=name),
                                 number=1, repeat=args.repeat))
        timings[name] = best
        print(f"{name:>8}: {best * 1e3:9.2f} ms  ({args.points / best / 1e6:6.1f} Mpoint/s)")

    if len(timings) == 2:
        a = kernels.closed_form(g, phi, k, backend="cython")
        b = kernels.closed_form(g, phi, k, backend="python")
        diff = max(float(np.nanmax(np.abs(x - y) / np.maximum(1.0, np.abs(y)))) for x, y in zip(a, b))
        print(f"speedup: {timings['python'] / timings['cython']:.2f}x, max scaled difference {diff:.1e}")
    else:
        print("compiled extension not built; only the numpy backend was timed")


if __name__ == "__main__":
    main()
