"""Compare the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from quiverforge import _accel
from quiverforge.path_algebra import _tensor_arrays
from quiverforge.quiver import Quiver, tensor_quiver


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def path_case(max_len):
    q1 = Quiver.from_arrows(3, [(0, 1), (1, 2), (2, 0), (1, 1)])
    q2 = Quiver.from_arrows(2, [(0, 1), (1, 0), (0, 0)])
    tq = tensor_quiver(q1, q2)
    tails, heads, kinds, fe, fids, sids = _tensor_arrays(tq)
    args = (tq.quiver.n_vertices, tq.second.n_vertices, tails, heads, kinds, fe, fids, sids, 0, max_len)
    return lambda k: k.normal_form_counts(*args)


def thin_case(n, seed=0):
    rng = np.random.default_rng(seed)
    succ = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.15:
                succ[i] |= 1 << j
    weights = rng.integers(-5, 6, size=n).astype(np.int64)
    return lambda k: k.scan_closed_subsets(succ, weights, n)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _accel.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is available")
    cases = [(f"normal_form_counts max_len={m}", path_case(m)) for m in (6, 8, 10)]
    cases += [(f"scan_closed_subsets n={n}", thin_case(n)) for n in (12, 16, 20)]
    print(f"{'case':36s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for name, case in cases:
        row, results = [], []
        for b, mod in backends.items():
            t, out = _best(lambda: case(mod), args.repeat)
            row.append(t)
            results.append(out)
        same = all(np.array_equal(np.asarray(results[0], dtype=object), np.asarray(r, dtype=object))
                   for r in results[1:])
        speed = f"{row[0] / row[1]:10.1f}x" if len(row) > 1 else ""
        print(f"{name:36s}" + "".join(f"{t:11.4f}s" for t in row) + speed + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
