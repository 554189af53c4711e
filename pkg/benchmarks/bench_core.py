"""Compiled versus pure Python core kernels.

Run ``python3 benchmarks/bench_core.py [--repeat N]``. Each kernel is timed
on both backends with the same inputs; the table reports the best wall time
per call, the speed-up and the largest disagreement between the backends.
"""

from __future__ import annotations

import argparse
import math
import sys
import timeit

import numpy as np

from frachelm._core import _fallback

try:
    from frachelm._core import _kernels
except ImportError:
    _kernels = None


def _weights(alpha, m):
    j = np.arange(m + 1, dtype=float)
    return np.diff(j ** (1.0 - alpha))


def cases():
    # series arguments are chosen where cancellation stays moderate, so that
    # both backends are accurate and the disagreement column is meaningful
    rng = np.random.default_rng(7)
    m = 4096
    diff = rng.standard_normal(m)
    w = _weights(0.5, m)
    profiles = rng.standard_normal((64, 129))
    shapes = rng.standard_normal((64, 257))
    return [
        ("series_double a=0.5 z=-3", "series_double", (0.5, 1.0, -3.0, 1e-16, 0.0, 200000)),
        ("series_double a=0.9 z=20", "series_double", (0.9, 1.0, 20.0, 1e-16, 0.0, 200000)),
        ("series_dd a=0.5 z=-6", "series_dd", (0.5, 1.0, -6.0, 1e-16, 0.0, 200000)),
        ("l1_convolve m=4096", "l1_convolve", (diff, w)),
        ("modal_sum 64x129x257", "modal_sum", (profiles, shapes)),
    ]


def _disagreement(a, b):
    a = np.asarray(a[0] if isinstance(a, tuple) else a, dtype=float)
    b = np.asarray(b[0] if isinstance(b, tuple) else b, dtype=float)
    scale = max(1.0, float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / scale


def _best(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled core is not built; only the pure Python backend is available", file=sys.stderr)
        return 1
    print(f"{'kernel':<28}{'compiled':>12}{'python':>12}{'speed-up':>10}{'rel diff':>11}")
    for label, name, call_args in cases():
        fast = getattr(_kernels, name)
        slow = getattr(_fallback, name)
        t_fast = _best(fast, call_args, args.repeat)
        t_slow = _best(slow, call_args, args.repeat)
        diff = _disagreement(fast(*call_args), slow(*call_args))
        ratio = t_slow / t_fast if t_fast > 0 else math.inf
        print(f"{label:<28}{t_fast * 1e6:>10.1f}us{t_slow * 1e6:>10.1f}us{ratio:>9.1f}x{diff:>11.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
