"""Compare the compiled evaluation kernel against the numpy fallback.

Run:  python3 benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from pcompact.backend import get_backends
from pcompact.counterex import build_example_B
from pcompact.homopoly import make_probes


def bench(repeat: int = 5, n_points: int = 2048, seed: int = 0):
    backends = get_backends()
    tm = build_example_B(5, 2)
    polys = [c for c in tm.components if hasattr(c, "terms")]
    X = np.stack(make_probes(polys[0].dom_dim, 1, n_sphere=n_points,
                             seed=seed))
    rows = []
    ref = None
    for name, impl in backends.items():
        best = float("inf")
        out = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            for P in polys:
                ptr, vars_, exps, coeffs, outs = P._compile()
                out = impl.batch_eval(ptr, vars_, exps, coeffs, outs, X,
                                      P.cod_dim)
            best = min(best, time.perf_counter() - t0)
        if ref is None:
            ref = out
        agree = float(np.abs(out - ref).max())
        rows.append((name, best, agree))
    base = dict((n, t) for n, t, _ in rows)["python"]
    print(f"{'backend':<10} {'best_s':>10} {'speedup':>8} {'max_diff':>10}")
    for name, t, agree in rows:
        print(f"{name:<10} {t:>10.5f} {base / t:>8.2f} {agree:>10.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=2048)
    args = ap.parse_args()
    bench(repeat=args.repeat, n_points=args.points)
