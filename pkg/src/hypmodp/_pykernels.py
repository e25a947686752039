"""Reference implementations of the hot loops, in Python and numpy.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature and results.  Arrays are contiguous ``int64``; residues live in
``0..p-1``.  Primes are assumed below ``2**20`` so that sums of up to
``2**23`` products of residues fit in a signed 64-bit accumulator.
"""

import numpy as np

_SPARSE_CUTOFF = 48


def hyp_series(a_num, a_den, b_num, b_den, p, n_terms):
    """Unit-tracked coefficients of a hypergeometric series mod p.

    Step i multiplies by prod (a_num + (i-1) a_den) / a_den and divides by
    the same expression over the b-parameters.  Returns ``(res, val)``:
    ``val[i]`` is the p-adic valuation of coefficient i and ``res[i]`` its
    residue when ``val[i] == 0`` (0 otherwise).
    """
    res = np.zeros(n_terms, dtype=np.int64)
    val = np.zeros(n_terms, dtype=np.int64)
    if n_terms == 0:
        return res, val
    a_num = [int(x) for x in a_num]
    a_den = [int(x) for x in a_den]
    b_num = [int(x) for x in b_num]
    b_den = [int(x) for x in b_den]
    # constant unit contributed by the parameter denominators at every step
    scale = 1
    for d in b_den:
        scale = scale * d % p
    for d in a_den:
        scale = scale * pow(d, -1, p) % p
    unit, v = 1, 0
    res[0] = 1
    for i in range(1, n_terms):
        step = scale
        for a, d in zip(a_num, a_den):
            x = a + (i - 1) * d
            if x == 0:
                raise ZeroDivisionError(f"factor vanishes at index {i}")
            while x % p == 0:
                x //= p
                v += 1
            step = step * x % p
        for b, d in zip(b_num, b_den):
            x = b + (i - 1) * d
            if x == 0:
                raise ZeroDivisionError(f"factor vanishes at index {i}")
            while x % p == 0:
                x //= p
                v -= 1
            step = step * pow(x % p, -1, p) % p
        unit = unit * step % p
        val[i] = v
        if v == 0:
            res[i] = unit
    return res, val


def poly_mul(a, b, p):
    """Dense product mod p of two nonempty coefficient arrays."""
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    nz = np.flatnonzero(a)
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    if len(nz) <= _SPARSE_CUTOFF:
        for i in nz:
            out[i:i + len(b)] += a[i] * b
    else:
        out = np.convolve(a, b)
    return out % p


def poly_divmod(a, b, p):
    """Quotient and remainder of a by b over F_p; b[-1] must be nonzero."""
    db = len(b) - 1
    r = a.copy() % p
    if len(a) <= db:
        return np.zeros(1, dtype=np.int64), r
    inv = pow(int(b[-1]), -1, p)
    q = np.zeros(len(a) - db, dtype=np.int64)
    bnz = np.flatnonzero(b[:-1])
    bvals = b[bnz]
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k] % p
        if c:
            c = c * inv % p
            q[k - db] = c
            r[bnz + (k - db)] = (r[bnz + (k - db)] - c * bvals) % p
        r[k] = 0
    return q, r[:db] if db else np.zeros(1, dtype=np.int64)


def _trim(a):
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if len(nz) else a[:0]


def poly_gcd(a, b, p):
    """Monic gcd over F_p; inputs trimmed, not both empty."""
    a = _trim(a % p)
    b = _trim(b % p)
    while len(b):
        _, r = poly_divmod(a, b, p)
        a, b = b, _trim(r)
    inv = pow(int(a[-1]), -1, p)
    return a * inv % p


def frob_mul_acc(acc, f, poly, shift, q):
    """acc[shift + j*q + t] += f[j] * poly[t] for indices inside acc.

    No reduction is applied; callers reduce mod p once all terms are in.
    """
    n = len(acc)
    if shift >= n or not len(poly) or not len(f):
        return
    jmax = min(len(f), (n - shift - 1) // q + 1)
    fj = f[:jmax]
    if q == 1:
        prod = np.convolve(fj, poly)[: n - shift]
        acc[shift:shift + len(prod)] += prod
        return
    nz = np.flatnonzero(poly)
    if len(nz) * 4 < len(poly) or len(poly) > q:
        for t in nz:
            hi = min(jmax, (n - shift - t - 1) // q + 1) if shift + t < n else 0
            if hi > 0:
                acc[shift + t: shift + t + (hi - 1) * q + 1: q] += poly[t] * fj[:hi]
        return
    # poly shorter than the stride: outer product laid into strided blocks
    block = np.outer(fj, poly)
    span = np.zeros((jmax, q), dtype=np.int64)
    span[:, : len(poly)] = block
    flat = span.reshape(-1)[: n - shift]
    acc[shift:shift + len(flat)] += flat
