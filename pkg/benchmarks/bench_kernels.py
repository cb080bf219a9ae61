"""Compare the compiled and pure-Python permanent kernels.

    python3 benchmarks/bench_kernels.py [--max-n 20] [--p 0.5] [--seed 1]

The pure-Python Ryser is skipped above --python-max-n, where it would take
minutes per matrix.
"""

from __future__ import annotations

import argparse
import time

from lilperm import _purepy
from lilperm.models import NestedMatrixStream

try:
    from lilperm import _kernels
except ImportError:  # extension not built
    _kernels = None


def _time(fn, rows, repeat):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn(rows)
        best = min(best, time.perf_counter() - t0)
    return value, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-n", type=int, default=8)
    ap.add_argument("--max-n", type=int, default=24)
    ap.add_argument("--python-max-n", type=int, default=16)
    ap.add_argument("--step", type=int, default=2)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled extension not available; only the Python kernels will run")
    stream = NestedMatrixStream(args.seed, args.p)
    print(f"{'n':>3} {'engine':>7} {'compiled_s':>11} {'python_s':>11} {'speedup':>8}")
    for n in range(args.min_n, args.max_n + 1, args.step):
        rows = stream.minor(n).rows
        for name in ("ryser", "glynn"):
            c_val = c_t = p_val = p_t = None
            if _kernels is not None:
                c_val, c_t = _time(getattr(_kernels, name), rows, args.repeat)
            if n <= args.python_max_n:
                p_val, p_t = _time(getattr(_purepy, name), rows, 1)
            if c_val is not None and p_val is not None and c_val != p_val:
                raise SystemExit(f"mismatch at n={n} ({name}): {c_val} != {p_val}")
            cs = f"{c_t:11.4g}" if c_t is not None else f"{'-':>11}"
            ps = f"{p_t:11.4g}" if p_t is not None else f"{'-':>11}"
            sp = f"{p_t / c_t:8.0f}" if c_t and p_t else f"{'-':>8}"
            print(f"{n:>3} {name:>7} {cs} {ps} {sp}")


if __name__ == "__main__":
    main()
