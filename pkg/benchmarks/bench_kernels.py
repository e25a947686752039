"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each row runs the same inputs through both backends, checks that the
outputs agree, and reports the best wall time of N runs.
"""

import argparse
import timeit

import numpy as np

from hypmodp import _pykernels

try:
    from hypmodp import _ckernels
except ImportError:
    _ckernels = None

P = 1_048_573


def _rand(rng, n, p, density=1.0):
    a = rng.integers(0, p, n, dtype=np.int64)
    if density < 1.0:
        a[rng.random(n) > density] = 0
    a[-1] = a[-1] or 1
    return a


def cases(rng):
    p = P
    dense_a, dense_b = _rand(rng, 4000, p), _rand(rng, 4000, p)
    sparse_a = _rand(rng, 20000, p, 0.001)
    num, den = _rand(rng, 6000, p), _rand(rng, 300, p)
    g1 = _rand(rng, 700, p)
    g2 = _rand(rng, 600, p)
    f = _rand(rng, 20000, p)
    poly = _rand(rng, 300, p)
    return [
        ("hyp_series 3F2, 200k terms", "hyp_series", ([1, 4, 5], [9, 9, 9], [1, 1, 1], [3, 1, 1], 17, 200_000)),
        ("poly_mul dense 4000x4000", "poly_mul", (dense_a, dense_b, p)),
        ("poly_mul sparse x dense", "poly_mul", (sparse_a, dense_b, p)),
        ("poly_divmod 6000 / 300", "poly_divmod", (num, den, p)),
        ("poly_gcd 700, 600", "poly_gcd", (g1, g2, p)),
        ("frob_mul_acc q=17, n=200k", "frob_mul_acc", (f, poly, 3, 17)),
    ]


def _call(mod, name, args):
    if name == "frob_mul_acc":
        f, poly, shift, q = args
        acc = np.zeros(200_000, dtype=np.int64)
        getattr(mod, name)(acc, f, poly, shift, q)
        return acc
    return getattr(mod, name)(*args)


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    return np.array_equal(np.asarray(x), np.asarray(y))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<30} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for label, name, call_args in cases(rng):
        t_py = min(timeit.repeat(lambda: _call(_pykernels, name, call_args), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{label:<30} {t_py:>11.4f} {'n/a':>11} {'':>8}")
            continue
        if not _same(_call(_pykernels, name, call_args), _call(_ckernels, name, call_args)):
            raise SystemExit(f"{label}: backends disagree")
        t_c = min(timeit.repeat(lambda: _call(_ckernels, name, call_args), number=1, repeat=args.repeat))
        print(f"{label:<30} {t_py:>11.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
