"""Compare the compiled and pure-Python predicate backends.

    python benchmarks/bench_kernels.py [--n 200000] [--refine]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from delref import _pykernels

try:
    from delref import _ckernels
except ImportError:
    _ckernels = None


def _inputs(n, seed=0):
    rng = random.Random(seed)
    return [tuple(rng.random() for _ in range(8)) for _ in range(n)]


def bench_module(mod, rows):
    out = {}
    t = time.perf_counter()
    for ax, ay, bx, by, cx, cy, _, _ in rows:
        mod.orient2d(ax, ay, bx, by, cx, cy)
    out["orient2d"] = time.perf_counter() - t
    t = time.perf_counter()
    for ax, ay, bx, by, cx, cy, px, py in rows:
        mod.incircle(ax, ay, bx, by, cx, cy, px, py)
    out["incircle"] = time.perf_counter() - t
    t = time.perf_counter()
    for ax, ay, bx, by, cx, cy, _, _ in rows:
        mod.circumcenter(ax, ay, bx, by, cx, cy)
    out["circumcenter"] = time.perf_counter() - t
    return out


def bench_refine(pure: bool) -> float:
    code = ("import time;from delref.fixtures import random_periodic;"
            "from delref.refine_par import parallel_chew_pps;"
            "P=random_periodic(60,7);t=time.perf_counter();parallel_chew_pps(P);"
            "print(time.perf_counter()-t)")
    env = dict(os.environ, DELREF_PURE_PYTHON="1" if pure else "0")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    return float(res.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--refine", action="store_true", help="also time an end-to-end refinement")
    args = ap.parse_args(argv)
    rows = _inputs(args.n)
    py = bench_module(_pykernels, rows)
    c = bench_module(_ckernels, rows) if _ckernels is not None else None
    print(f"{'kernel':14s} {'python (s)':>11s} {'cython (s)':>11s} {'speedup':>8s}")
    for name, tp in py.items():
        if c is None:
            print(f"{name:14s} {tp:11.3f} {'n/a':>11s}")
        else:
            print(f"{name:14s} {tp:11.3f} {c[name]:11.3f} {tp / c[name]:7.1f}x")
    if args.refine:
        tp, tc = bench_refine(True), bench_refine(False)
        print(f"{'chew_pps(60)':14s} {tp:11.3f} {tc:11.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
