#!/usr/bin/env python3
"""Compare the compiled and pure-Python downstream kernels.

Builds the edge tables for a handful of random tree games on both backends,
checks the outputs are identical, and prints a timing table.  Run from the
repository root after installing the package:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --m 256 1024 --n 12 --seeds 3
"""

import argparse
import time

import numpy as np

from treegames._backend import available_backends
from treegames.approx import downstream_pass
from treegames.generators import generate_random_tree_game
from treegames.grid import TauGrid
from treegames.orientation import orient, pick_root


def time_backend(game, orientation, grid, eps, backend):
    t0 = time.perf_counter()
    tables = downstream_pass(game, orientation, grid, eps, backend=backend)
    return time.perf_counter() - t0, tables


def same_tables(a, b):
    if not np.array_equal(a.root.bits, b.root.bits):
        return False
    return all(np.array_equal(a.edges[v].bits, b.edges[v].bits) for v in a.edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10, help="players per game")
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--seeds", type=int, default=2, help="number of games")
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--m", type=int, nargs="+", default=[128, 512, 2048])
    args = ap.parse_args()

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel missing; nothing to compare")
        return
    print(f"backends: {', '.join(backends)}")
    print(f"{'m':>6} {'seed':>4} {'python':>10} {'cython':>10} {'speedup':>8}  tables")
    for m in args.m:
        grid = TauGrid(m)
        for seed in range(args.seeds):
            game = generate_random_tree_game(args.n, args.max_degree, seed)
            orientation = orient(game, pick_root(game))
            t_py, tab_py = time_backend(game, orientation, grid, args.eps, "python")
            t_cy, tab_cy = time_backend(game, orientation, grid, args.eps, "cython")
            ok = "equal" if same_tables(tab_py, tab_cy) else "MISMATCH"
            print(f"{m:>6} {seed:>4} {t_py:>9.3f}s {t_cy:>9.3f}s "
                  f"{t_py / t_cy:>7.1f}x  {ok}")


if __name__ == "__main__":
    main()
