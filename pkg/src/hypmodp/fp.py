"""Polynomials, truncated power series and rational functions over F_p.

Polynomials keep a trimmed dense ``int64`` array internally but are
exposed as sparse ``{exponent: residue}`` maps; products route the
sparser operand through the outer loop so Frobenius-twisted operands stay
cheap.  Rational functions are always stored in lowest form with a monic
denominator and the power of ``z`` split off into ``z_shift``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels

MAX_PRIME = 1 << 20
RENDER_TERMS = 12


def _check_prime(p: int) -> int:
    p = int(p)
    if p < 2 or p >= MAX_PRIME:
        raise ValueError(f"prime {p} outside the supported range 2..{MAX_PRIME - 1}")
    return p


def _trim(arr: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(arr)
    return arr[: nz[-1] + 1] if len(nz) else arr[:0]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _render_terms(pairs: Sequence[tuple[int, int]], var: str = "z") -> str:
    if not pairs:
        return "0"
    parts = []
    for e, c in pairs[:RENDER_TERMS]:
        if e == 0:
            parts.append(str(c))
        else:
            mono = var if e == 1 else f"{var}^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    text = " + ".join(parts)
    if len(pairs) > RENDER_TERMS:
        text += f" … (+{len(pairs) - RENDER_TERMS} more)"
    return text


class FpPoly:
    """Immutable polynomial over F_p."""

    __slots__ = ("p", "_c")

    def __init__(self, p: int, coeffs: Sequence[int] | np.ndarray | Mapping[int, int] = ()):
        self.p = _check_prime(p)
        if isinstance(coeffs, Mapping):
            deg = max(coeffs, default=-1)
            arr = np.zeros(deg + 1, dtype=np.int64)
            for e, c in coeffs.items():
                if e < 0:
                    raise ValueError("negative exponent in polynomial")
                arr[e] = int(c) % self.p
        else:
            arr = np.array([int(c) % self.p for c in coeffs], dtype=np.int64) if not isinstance(
                coeffs, np.ndarray
            ) else np.mod(coeffs.astype(np.int64, copy=False), self.p)
        self._c = _frozen(_trim(arr).copy())

    @classmethod
    def _raw(cls, p: int, arr: np.ndarray) -> FpPoly:
        # arr already reduced mod p
        obj = cls.__new__(cls)
        obj.p = p
        obj._c = _frozen(_trim(arr))
        return obj

    @classmethod
    def zero(cls, p: int) -> FpPoly:
        return cls(p)

    @classmethod
    def one(cls, p: int) -> FpPoly:
        return cls(p, [1])

    @classmethod
    def monomial(cls, p: int, exp: int, coeff: int = 1) -> FpPoly:
        return cls(p, {exp: coeff})

    @classmethod
    def from_terms(cls, p: int, terms: Iterable[tuple[int, int]]) -> FpPoly:
        acc: dict[int, int] = {}
        for e, c in terms:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        return cls(p, acc)

    # -- views -------------------------------------------------------------
    @property
    def degree(self) -> int:
        """Largest exponent present; -1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def coeffs(self) -> dict[int, int]:
        return {int(e): int(self._c[e]) for e in np.flatnonzero(self._c)}

    def terms(self) -> list[tuple[int, int]]:
        return [(int(e), int(self._c[e])) for e in np.flatnonzero(self._c)]

    def dense(self) -> np.ndarray:
        return self._c

    def nnz(self) -> int:
        return int(np.count_nonzero(self._c))

    def is_zero(self) -> bool:
        return len(self._c) == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __getitem__(self, e: int) -> int:
        return int(self._c[e]) if 0 <= e < len(self._c) else 0

    @property
    def lc(self) -> int:
        return int(self._c[-1]) if len(self._c) else 0

    def low_degree(self) -> int:
        """Exponent of the lowest nonzero term (z-adic valuation); -1 for zero."""
        nz = np.flatnonzero(self._c)
        return int(nz[0]) if len(nz) else -1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpPoly):
            return NotImplemented
        return self.p == other.p and np.array_equal(self._c, other._c)

    def __hash__(self) -> int:
        return hash((self.p, self._c.tobytes()))

    def __repr__(self) -> str:
        return f"FpPoly(p={self.p}, {self.render()})"

    def render(self, var: str = "z") -> str:
        return _render_terms(self.terms(), var)

    # -- arithmetic --------------------------------------------------------
    def _same(self, other: FpPoly) -> None:
        if not isinstance(other, FpPoly):
            raise TypeError("expected FpPoly")
        if other.p != self.p:
            raise ValueError("mismatched primes")

    def __add__(self, other: FpPoly) -> FpPoly:
        self._same(other)
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] += b
        return FpPoly._raw(self.p, out % self.p)

    def __neg__(self) -> FpPoly:
        return FpPoly._raw(self.p, (-self._c) % self.p)

    def __sub__(self, other: FpPoly) -> FpPoly:
        return self + (-other)

    def __mul__(self, other: FpPoly | int) -> FpPoly:
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        self._same(other)
        if self.is_zero() or other.is_zero():
            return FpPoly.zero(self.p)
        a, b = self._c, other._c
        if np.count_nonzero(a) > np.count_nonzero(b):
            a, b = b, a
        return FpPoly._raw(self.p, kernels.poly_mul(a, b, self.p))

    __rmul__ = __mul__

    def scale(self, c: int) -> FpPoly:
        return FpPoly._raw(self.p, self._c * (c % self.p) % self.p)

    def __pow__(self, k: int) -> FpPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = FpPoly.one(self.p), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: FpPoly) -> tuple[FpPoly, FpPoly]:
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return FpPoly.zero(self.p), FpPoly.zero(self.p)
        q, r = kernels.poly_divmod(self._c, other._c, self.p)
        return FpPoly._raw(self.p, q), FpPoly._raw(self.p, r)

    def __floordiv__(self, other: FpPoly) -> FpPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: FpPoly) -> FpPoly:
        return divmod(self, other)[1]

    def exact_div(self, other: FpPoly) -> FpPoly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> FpPoly:
        if self.is_zero():
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def shift(self, k: int) -> FpPoly:
        """Multiply by z**k; negative k divides and must be exact."""
        if self.is_zero() or k == 0:
            return self
        if k > 0:
            return FpPoly._raw(self.p, np.concatenate([np.zeros(k, dtype=np.int64), self._c]))
        if self.low_degree() < -k:
            raise ArithmeticError("polynomial not divisible by the requested power of z")
        return FpPoly._raw(self.p, self._c[-k:].copy())

    def frobenius(self, e: int) -> FpPoly:
        """self ** (p**e), i.e. z -> z**(p**e)."""
        if e == 0 or self.degree <= 0:
            return self
        q = self.p**e
        out = np.zeros(self.degree * q + 1, dtype=np.int64)
        out[::q] = self._c
        return FpPoly._raw(self.p, out)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {"p": self.p, "terms": [[e, c] for e, c in self.terms()]}

    @classmethod
    def from_json(cls, data: Mapping) -> FpPoly:
        p = int(data["p"])
        pairs = [(int(e), int(c)) for e, c in data["terms"]]
        for e, c in pairs:
            if not 0 <= c < p:
                raise ValueError("coefficient outside 0..p-1")
        return cls.from_terms(p, pairs)


def poly_arith(a: FpPoly, b: FpPoly, op: str) -> FpPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    """Monic gcd; gcd(a, 0) = monic(a)."""
    a._same(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if b.is_zero():
        return a.monic()
    if a.is_zero():
        return b.monic()
    if a.degree == 0 or b.degree == 0:
        return FpPoly.one(a.p)
    return FpPoly._raw(a.p, kernels.poly_gcd(a._c, b._c, a.p))


class FpSeries:
    """Power series over F_p truncated at ``order`` (coefficients 0..order-1)."""

    __slots__ = ("p", "_c")

    def __init__(self, p: int, coeffs: Sequence[int] | np.ndarray):
        self.p = _check_prime(p)
        self._c = _frozen(np.mod(np.asarray(coeffs, dtype=np.int64), self.p))

    @property
    def order(self) -> int:
        return len(self._c)

    truncation_order = order

    @classmethod
    def _raw(cls, p: int, arr: np.ndarray) -> FpSeries:
        obj = cls.__new__(cls)
        obj.p = p
        obj._c = _frozen(arr)
        return obj

    @classmethod
    def from_poly(cls, poly: FpPoly, order: int) -> FpSeries:
        arr = np.zeros(order, dtype=np.int64)
        c = poly.dense()[:order]
        arr[: len(c)] = c
        return cls._raw(poly.p, arr)

    def dense(self) -> np.ndarray:
        return self._c

    def tolist(self) -> list[int]:
        return [int(x) for x in self._c]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [int(x) for x in self._c[i]]
        return int(self._c[i])

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpSeries):
            return NotImplemented
        return self.p == other.p and np.array_equal(self._c, other._c)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        pairs = [(int(e), int(self._c[e])) for e in np.flatnonzero(self._c)]
        return f"FpSeries(p={self.p}, order={self.order}, {_render_terms(pairs)} + O(z^{self.order}))"

    def _same(self, other: FpSeries) -> int:
        if other.p != self.p:
            raise ValueError("mismatched primes")
        return min(self.order, other.order)

    def truncate(self, order: int) -> FpSeries:
        return FpSeries._raw(self.p, self._c[: min(order, self.order)])

    def first_nonzero(self) -> int | None:
        nz = np.flatnonzero(self._c)
        return int(nz[0]) if len(nz) else None

    def is_zero(self) -> bool:
        return not np.any(self._c)

    def __add__(self, other: FpSeries) -> FpSeries:
        n = self._same(other)
        return FpSeries._raw(self.p, (self._c[:n] + other._c[:n]) % self.p)

    def __sub__(self, other: FpSeries) -> FpSeries:
        n = self._same(other)
        return FpSeries._raw(self.p, (self._c[:n] - other._c[:n]) % self.p)

    def __neg__(self) -> FpSeries:
        return FpSeries._raw(self.p, (-self._c) % self.p)

    def __mul__(self, other: FpSeries | FpPoly | int) -> FpSeries:
        if isinstance(other, (int, np.integer)):
            return FpSeries._raw(self.p, self._c * (int(other) % self.p) % self.p)
        if isinstance(other, FpPoly):
            if other.p != self.p:
                raise ValueError("mismatched primes")
            return series_eval_relation(self, [(other, 0)])
        n = self._same(other)
        acc = np.zeros(n, dtype=np.int64)
        kernels.frob_mul_acc(acc, self._c[:n], other._c[:n], 0, 1)
        return FpSeries._raw(self.p, acc % self.p)

    __rmul__ = __mul__

    def frobenius(self, e: int) -> FpSeries:
        """self ** (p**e), truncated at the same order."""
        q = self.p**e
        out = np.zeros(self.order, dtype=np.int64)
        src = self._c[: (self.order - 1) // q + 1] if self.order else self._c
        out[::q] = src
        return FpSeries._raw(self.p, out)

    def cartier(self, r: int) -> FpSeries:
        """Coefficients at indices j*p + r."""
        if not 0 <= r < self.p:
            raise ValueError(f"residue {r} outside 0..{self.p - 1}")
        return FpSeries._raw(self.p, self._c[r:: self.p].copy())


class FpRatFn:
    """z**z_shift * num/den in lowest form, den monic, z dividing neither."""

    __slots__ = ("num", "den", "z_shift")

    def __init__(self, num: FpPoly, den: FpPoly, z_shift: int = 0, *, _reduced: bool = False):
        if not _reduced:
            r = ratfn_reduce(num, den, z_shift)
            num, den, z_shift = r.num, r.den, r.z_shift
        self.num = num
        self.den = den
        self.z_shift = int(z_shift)

    @property
    def p(self) -> int:
        return self.num.p

    @classmethod
    def from_poly(cls, poly: FpPoly) -> FpRatFn:
        return ratfn_reduce(poly, FpPoly.one(poly.p))

    @classmethod
    def zero(cls, p: int) -> FpRatFn:
        return cls(FpPoly.zero(p), FpPoly.one(p), 0, _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0 and self.z_shift >= 0

    def as_poly(self) -> FpPoly:
        if not self.is_polynomial():
            raise ValueError("rational function is not a polynomial")
        return self.num.shift(self.z_shift)

    @property
    def height(self) -> int:
        if self.is_zero():
            return 0
        s = self.z_shift
        return max(self.num.degree + max(s, 0), self.den.degree + max(-s, 0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpRatFn):
            return NotImplemented
        return (self.num, self.den, self.z_shift) == (other.num, other.den, other.z_shift)

    def __hash__(self) -> int:
        return hash((self.num, self.den, self.z_shift))

    def __repr__(self) -> str:
        return f"FpRatFn(p={self.p}, {self.render()})"

    def render(self) -> str:
        head = f"({self.num.render()})"
        if self.z_shift:
            head = f"z^{self.z_shift}*{head}"
        if self.den.degree > 0:
            head += f"/({self.den.render()})"
        return head

    def _same(self, other: FpRatFn) -> None:
        if other.p != self.p:
            raise ValueError("mismatched primes")

    def __neg__(self) -> FpRatFn:
        return FpRatFn(-self.num, self.den, self.z_shift, _reduced=True)

    def __mul__(self, other: FpRatFn | FpPoly | int) -> FpRatFn:
        if isinstance(other, (int, np.integer)):
            if int(other) % self.p == 0:
                return FpRatFn.zero(self.p)
            return FpRatFn(self.num.scale(int(other)), self.den, self.z_shift, _reduced=True)
        if isinstance(other, FpPoly):
            other = FpRatFn.from_poly(other)
        self._same(other)
        if self.is_zero() or other.is_zero():
            return FpRatFn.zero(self.p)
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if g1.degree > 0:
            a, d = a.exact_div(g1), d.exact_div(g1)
        if g2.degree > 0:
            c, b = c.exact_div(g2), b.exact_div(g2)
        den = b * d
        num = a * c
        inv = pow(den.lc, -1, self.p)
        return FpRatFn(num.scale(inv), den.scale(inv), self.z_shift + other.z_shift, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> FpRatFn:
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        inv = pow(self.num.lc, -1, self.p)
        return FpRatFn(self.den.scale(inv), self.num.scale(inv), -self.z_shift, _reduced=True)

    def __truediv__(self, other: FpRatFn | FpPoly) -> FpRatFn:
        if isinstance(other, FpPoly):
            other = FpRatFn.from_poly(other)
        return self * other.inverse()

    def __add__(self, other: FpRatFn | FpPoly) -> FpRatFn:
        if isinstance(other, FpPoly):
            other = FpRatFn.from_poly(other)
        self._same(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        m = min(self.z_shift, other.z_shift)
        a = self.num.shift(self.z_shift - m)
        c = other.num.shift(other.z_shift - m)
        b, d = self.den, other.den
        g = poly_gcd(b, d)
        if g.degree > 0:
            b1, d1 = b.exact_div(g), d.exact_div(g)
        else:
            b1, d1 = b, d
        num = a * d1 + c * b1
        if num.is_zero():
            return FpRatFn.zero(self.p)
        if g.degree > 0:
            h = poly_gcd(num, g)
            if h.degree > 0:
                num, g = num.exact_div(h), g.exact_div(h)
        den = b1 * d1 * g
        v = num.low_degree()
        return FpRatFn(num.shift(-v), den, m + v, _reduced=True)

    __radd__ = __add__

    def __sub__(self, other: FpRatFn | FpPoly) -> FpRatFn:
        if isinstance(other, FpPoly):
            other = FpRatFn.from_poly(other)
        return self + (-other)

    def __pow__(self, k: int) -> FpRatFn:
        if k < 0:
            return self.inverse() ** (-k)
        return FpRatFn(self.num**k, self.den**k, self.z_shift * k, _reduced=True)

    def frobenius(self, e: int) -> FpRatFn:
        q = self.p**e
        return FpRatFn(self.num.frobenius(e), self.den.frobenius(e), self.z_shift * q, _reduced=True)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json(), "z_shift": self.z_shift}

    @classmethod
    def from_json(cls, data: Mapping) -> FpRatFn:
        return ratfn_reduce(FpPoly.from_json(data["num"]), FpPoly.from_json(data["den"]), int(data["z_shift"]))


def ratfn_reduce(num: FpPoly, den: FpPoly, z_shift: int = 0) -> FpRatFn:
    """Lowest form of z**z_shift * num/den with a monic denominator."""
    num._same(den)
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return FpRatFn.zero(num.p)
    vn, vd = num.low_degree(), den.low_degree()
    num, den = num.shift(-vn), den.shift(-vd)
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num.exact_div(g), den.exact_div(g)
    inv = pow(den.lc, -1, num.p)
    return FpRatFn(num.scale(inv), den.scale(inv), z_shift + vn - vd, _reduced=True)


def frobenius_pow(f, e: int):
    """f ** (p**e) for a series, polynomial or rational function."""
    if e < 0:
        raise ValueError("negative Frobenius exponent")
    return f.frobenius(e)


def cartier(f: FpSeries, r: int) -> FpSeries:
    return f.cartier(r)


def series_eval_relation(f: FpSeries, terms: Sequence[tuple[FpPoly, int]]) -> FpSeries:
    """sum_k poly_k * f**(p**e_k), truncated at f's order.

    Frobenius powers are never formed: f's coefficient j lands at j*p**e.
    """
    n = f.order
    acc = np.zeros(n, dtype=np.int64)
    for poly, e in terms:
        if poly.p != f.p:
            raise ValueError("mismatched primes")
        if poly.is_zero() or n == 0:
            continue
        q = f.p**e
        src = f.dense()[: (n - 1) // q + 1]
        kernels.frob_mul_acc(acc, src, poly.dense(), 0, q)
    return FpSeries._raw(f.p, acc % f.p)
