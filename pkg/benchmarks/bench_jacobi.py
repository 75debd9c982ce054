"""Compare the compiled and pure-Python Jacobi eigensolvers.

Times eig_hermitian on random Hermitian matrices for each backend and checks
that both give the same spectrum. Run: python3 benchmarks/bench_jacobi.py
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qexclusion import linalg


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (a + a.conj().T)


def time_backend(name, mats, repeats):
    linalg.set_backend(name)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        vals = [linalg.eigvalsh(m) for m in mats]
        best = min(best, time.perf_counter() - t0)
    return best, vals


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--count", type=int, default=20, help="matrices per dimension")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = linalg.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; only the python backend is available")
    original = linalg.get_backend()
    rng = np.random.default_rng(args.seed)
    header = f"{'dim':>5} " + " ".join(f"{b + ' [ms]':>15}" for b in backends)
    if len(backends) > 1:
        header += f" {'speedup':>9} {'max diff':>10}"
    print(header)
    try:
        for d in args.dims:
            mats = [random_hermitian(rng, d) for _ in range(args.count)]
            results = {b: time_backend(b, mats, args.repeats) for b in backends}
            row = f"{d:>5} " + " ".join(f"{results[b][0] * 1e3:>15.2f}" for b in backends)
            if len(backends) > 1:
                speed = results["python"][0] / results["compiled"][0]
                diff = max(float(np.max(np.abs(a - b)))
                           for a, b in zip(results["python"][1], results["compiled"][1]))
                row += f" {speed:>8.1f}x {diff:>10.1e}"
            print(row)
    finally:
        linalg.set_backend(original)


if __name__ == "__main__":
    main()
