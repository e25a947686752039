# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_pykernels``; same signatures and results."""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef inline i64 _mod(i64 x, i64 p) nogil:
    x %= p
    return x + p if x < 0 else x


cdef i64 _inv(i64 x, i64 p) nogil:
    # extended Euclid; x is a unit mod p
    cdef i64 r0 = p, r1 = _mod(x, p), s0 = 0, s1 = 1, q, t
    while r1:
        q = r0 // r1
        t = r0 - q * r1
        r0 = r1
        r1 = t
        t = s0 - q * s1
        s0 = s1
        s1 = t
    return _mod(s0, p)


def hyp_series(a_num, a_den, b_num, b_den, i64 p, Py_ssize_t n_terms):
    cdef cnp.ndarray[i64, ndim=1] res = np.zeros(n_terms, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] val = np.zeros(n_terms, dtype=np.int64)
    if n_terms == 0:
        return res, val
    cdef const i64[::1] an = np.ascontiguousarray(a_num, dtype=np.int64)
    cdef const i64[::1] ad = np.ascontiguousarray(a_den, dtype=np.int64)
    cdef const i64[::1] bn = np.ascontiguousarray(b_num, dtype=np.int64)
    cdef const i64[::1] bd = np.ascontiguousarray(b_den, dtype=np.int64)
    cdef Py_ssize_t na = an.shape[0], nb = bn.shape[0], i, k
    cdef i64 scale = 1, unit = 1, v = 0, step, num, den, x
    for k in range(nb):
        scale = scale * _mod(bd[k], p) % p
    for k in range(na):
        scale = scale * _inv(ad[k], p) % p
    res[0] = 1
    for i in range(1, n_terms):
        num = scale
        den = 1
        for k in range(na):
            x = an[k] + (i - 1) * ad[k]
            if x == 0:
                raise ZeroDivisionError(f"factor vanishes at index {i}")
            while x % p == 0:
                x //= p
                v += 1
            num = num * _mod(x, p) % p
        for k in range(nb):
            x = bn[k] + (i - 1) * bd[k]
            if x == 0:
                raise ZeroDivisionError(f"factor vanishes at index {i}")
            while x % p == 0:
                x //= p
                v -= 1
            den = den * _mod(x, p) % p
        step = num * _inv(den, p) % p
        unit = unit * step % p
        val[i] = v
        if v == 0:
            res[i] = unit
    return res, val


def poly_mul(a, b, i64 p):
    cdef const i64[::1] x = np.ascontiguousarray(a, dtype=np.int64)
    cdef const i64[::1] y = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0], i, j
    out_arr = np.zeros(n + m - 1, dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef i64 c
    with nogil:
        for i in range(n):
            c = x[i]
            if c == 0:
                continue
            for j in range(m):
                out[i + j] += c * y[j]
        for i in range(n + m - 1):
            out[i] = _mod(out[i], p)
    return out_arr


def poly_divmod(a, b, i64 p):
    cdef const i64[::1] y = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t db = y.shape[0] - 1, na = len(a), k, j
    r_arr = np.ascontiguousarray(a, dtype=np.int64) % p
    if na <= db:
        return np.zeros(1, dtype=np.int64), r_arr
    cdef i64[::1] r = r_arr
    q_arr = np.zeros(na - db, dtype=np.int64)
    cdef i64[::1] q = q_arr
    cdef i64 inv = _inv(y[db], p), c
    with nogil:
        for k in range(na - 1, db - 1, -1):
            c = r[k]
            if c:
                c = c * inv % p
                q[k - db] = c
                for j in range(db):
                    if y[j]:
                        r[k - db + j] = _mod(r[k - db + j] - c * y[j], p)
            r[k] = 0
    if db == 0:
        return q_arr, np.zeros(1, dtype=np.int64)
    return q_arr, r_arr[:db].copy()


cdef Py_ssize_t _deg(i64[::1] a, Py_ssize_t n) nogil:
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return n - 1


def poly_gcd(a, b, i64 p):
    cdef i64[::1] u = np.ascontiguousarray(a, dtype=np.int64) % p
    cdef i64[::1] v = np.ascontiguousarray(b, dtype=np.int64) % p
    cdef Py_ssize_t du = _deg(u, u.shape[0]), dv = _deg(v, v.shape[0]), k, j
    cdef i64[::1] t
    cdef Py_ssize_t dt
    cdef i64 inv, c
    if du < dv:
        t = u; u = v; v = t
        dt = du; du = dv; dv = dt
    while dv >= 0:
        # u <- u mod v, in place
        inv = _inv(v[dv], p)
        for k in range(du, dv - 1, -1):
            c = u[k]
            if c:
                c = c * inv % p
                for j in range(dv + 1):
                    if v[j]:
                        u[k - dv + j] = _mod(u[k - dv + j] - c * v[j], p)
        du = _deg(u, dv)
        t = u; u = v; v = t
        dt = du; du = dv; dv = dt
    out = np.asarray(u)[: du + 1].copy()
    inv = _inv(out[du], p)
    return out * inv % p


def frob_mul_acc(acc, f, poly, Py_ssize_t shift, Py_ssize_t q):
    cdef i64[::1] out = acc
    cdef const i64[::1] x = np.ascontiguousarray(f, dtype=np.int64)
    cdef const i64[::1] y = np.ascontiguousarray(poly, dtype=np.int64)
    cdef Py_ssize_t n = out.shape[0], nf = x.shape[0], m = y.shape[0], j, t, base
    cdef i64 c
    with nogil:
        for j in range(nf):
            base = shift + j * q
            if base >= n:
                break
            c = x[j]
            if c == 0:
                continue
            for t in range(m):
                if base + t >= n:
                    break
                out[base + t] += c * y[t]
