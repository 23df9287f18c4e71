"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--n 2000]

Prints the best-of-``repeat`` wall time per kernel and backend, the
speedup of the compiled kernels, and the largest disagreement between
the two backends.
"""
import argparse
import timeit

import numpy as np

from recenter import kernels


def _pool(trials, width, seed=0):
    rng = np.random.default_rng(seed)
    counts = rng.integers(1, width + 1, trials).astype(np.int64)
    xs = np.zeros((trials, width))
    ws = np.zeros((trials, width))
    for i, k in enumerate(counts):
        xs[i, :k] = rng.standard_t(3, k)
        ws[i, :k] = rng.dirichlet(np.ones(k))
    return xs, ws, counts


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=2000, help="lattice points per axis")
    ap.add_argument("--trials", type=int, default=10_000)
    args = ap.parse_args(argv)

    found = kernels.backends()
    if "cython" not in found:
        print("compiled extension not built; only the numpy backend is available")

    bs = 0.5 * np.arange(1, args.n + 1) / args.n
    ss = np.linspace(-1.0, 0.0, args.n)
    xs, ws, counts = _pool(args.trials, 8)
    cases = {
        f"ratio_lattice_max {args.n}x{args.n}, p=3": lambda m: m.ratio_lattice_max(3.0, bs, ss),
        f"central_moment_ratios {args.trials}x8, p=3": lambda m: m.central_moment_ratios(xs, ws, counts, 3.0),
    }

    print(f"{'kernel':<42}{'backend':<9}{'best (s)':>10}")
    for name, call in cases.items():
        times, outs = {}, {}
        for backend, mod in found.items():
            outs[backend] = call(mod)
            times[backend] = min(timeit.repeat(lambda: call(mod), number=1, repeat=args.repeat))
            print(f"{name:<42}{backend:<9}{times[backend]:>10.4f}")
        if len(found) == 2:
            a, b = outs["cython"], outs["python"]
            if isinstance(a, tuple):
                diff = abs(a[0] - b[0]) / abs(b[0])
                same = a[1:] == b[1:]
                agree = f"rel diff {diff:.1e}, same argmax: {same}"
            else:
                agree = f"max rel diff {np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)):.1e}"
            print(f"{'':<42}speedup {times['python'] / times['cython']:.1f}x; {agree}")


if __name__ == "__main__":
    main()
