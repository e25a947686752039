import importlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypmodp import _pykernels as py
from hypmodp import kernels

try:
    c = importlib.import_module("hypmodp._ckernels")
except ImportError:  # extension not built
    c = None

needs_c = pytest.mark.skipif(c is None, reason="compiled kernels not built")
PRIMES = st.sampled_from([2, 3, 5, 13, 37, 1009])


def arrays(p, max_len=80):
    return st.lists(st.integers(0, p - 1), min_size=1, max_size=max_len).map(lambda x: np.array(x, dtype=np.int64))


def test_backend_reported():
    assert kernels.BACKEND in {"cython", "python"}


@needs_c
@pytest.mark.parametrize(
    "params,p",
    [
        (([1, 1], [2, 2], [1, 1], [1, 1]), 5),
        (([1, 1], [3, 2], [5, 1], [12, 1]), 37),
        (([1, 4, 5], [9, 9, 9], [1, 1, 1], [3, 1, 1]), 17),
        (([1, 4, 5], [9, 9, 9], [1, 1, 1], [3, 1, 1]), 19),
    ],
)
def test_series_equivalence(params, p):
    a = py.hyp_series(*params, p, 3000)
    b = c.hyp_series(*params, p, 3000)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@needs_c
@given(st.data(), PRIMES)
@settings(max_examples=60)
def test_poly_kernels_equivalence(data, p):
    a, b = data.draw(arrays(p)), data.draw(arrays(p))
    assert np.array_equal(py.poly_mul(a, b, p), c.poly_mul(a, b, p))
    b = b.copy()
    b[-1] = b[-1] or 1
    qa, ra = py.poly_divmod(a, b, p)
    qb, rb = c.poly_divmod(a, b, p)
    assert np.array_equal(np.trim_zeros(qa, "b"), np.trim_zeros(qb, "b"))
    assert np.array_equal(np.trim_zeros(ra, "b"), np.trim_zeros(rb, "b"))
    a[-1] = a[-1] or 1
    assert np.array_equal(py.poly_gcd(a, b, p), c.poly_gcd(a, b, p))


@needs_c
@given(st.data(), PRIMES, st.integers(1, 40), st.integers(0, 7))
@settings(max_examples=60)
def test_frob_acc_equivalence(data, p, q, shift):
    f, poly = data.draw(arrays(p, 60)), data.draw(arrays(p, 90))
    n = 400
    x, y = np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64)
    f = f[: max(1, (n - 1 - shift) // q + 1)]
    py.frob_mul_acc(x, f, poly, shift, q)
    c.frob_mul_acc(y, f, poly, shift, q)
    assert np.array_equal(x % p, y % p)


@given(st.data(), PRIMES, st.integers(1, 9))
@settings(max_examples=40)
def test_frob_acc_matches_naive(data, p, q):
    f, poly = data.draw(arrays(p, 30)), data.draw(arrays(p, 30))
    n = 200
    acc = np.zeros(n, dtype=np.int64)
    kernels.frob_mul_acc(acc, f[: (n - 1) // q + 1], poly, 0, q)
    spread = np.zeros(len(f) * q, dtype=np.int64)
    spread[::q] = f
    naive = np.convolve(spread, poly)[:n]
    assert np.array_equal(acc[: len(naive)] % p, naive % p)


def test_series_rejects_vanishing_factor():
    with pytest.raises(ZeroDivisionError):
        kernels.hyp_series([-2], [1], [1], [1], 5, 10)
