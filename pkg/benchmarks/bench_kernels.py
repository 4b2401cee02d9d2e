"""Compare the numba and numpy oracle kernels on random instances.

    python benchmarks/bench_kernels.py [--vertices 10] [--n 3] [--repeat 3]

Both paths are called directly, so one process times both; results must
agree exactly or the script exits nonzero.
"""
import argparse
import sys
import time

import numpy as np

from graphfair import _kernels
from graphfair.generators import gen_random
from graphfair.oracle import utility_tables


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--vertices", type=int, default=10)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or GRAPHFAIR_DISABLE_NUMBA set); nothing to compare")
        return 0

    inst = gen_random(args.n, args.vertices, 0.5, seed=args.seed)
    tables, _ = utility_tables(inst)
    nv = inst.graph.vertex_count
    drops = np.ascontiguousarray(np.stack([_kernels.drop_one_table_np(t, nv) for t in tables]))
    # warm the JIT so compile time is not charged to the first timing
    head = np.ascontiguousarray(tables[:, :2]), np.ascontiguousarray(drops[:, :2])
    _kernels._enum_nb(*head, args.n, 1, 2)

    cases = {
        "max-min": (
            lambda: _kernels.enum_max_min_np(tables, args.n, nv),
            lambda: _kernels._enum_nb(tables, tables, args.n, nv, 0),
        ),
        "max-sum": (
            lambda: _kernels.enum_max_sum_np(tables, args.n, nv),
            lambda: _kernels._enum_nb(tables, tables, args.n, nv, 1),
        ),
        "max-sum-ef1": (
            lambda: _kernels.enum_max_sum_ef1_np(tables, drops, args.n, nv),
            lambda: _kernels._enum_nb(tables, drops, args.n, nv, 2),
        ),
    }
    print(f"n={args.n} vertices={nv} assignments={args.n ** nv}")
    print(f"{'kernel':<12} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    ok = True
    for name, (np_fn, nb_fn) in cases.items():
        t_np, r_np = best_of(np_fn, args.repeat)
        t_nb, r_nb = best_of(nb_fn, args.repeat)
        same = (int(r_np[0]), int(r_np[1])) == (int(r_nb[0]), int(r_nb[1]))
        ok &= same
        print(f"{name:<12} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x" + ("" if same else "  MISMATCH"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
