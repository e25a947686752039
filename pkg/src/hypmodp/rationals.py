"""Exact rationals with p-adic helpers: valuations, unit parts, the Dwork map."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` (ASCII digits, optional leading '-')."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def render_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: Fraction | int, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero undefined")
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def is_unit(x: Fraction | int, p: int) -> bool:
    """True when x lies in the unit group of the localization at p."""
    return x != 0 and vp(x, p) == 0


@dataclass(frozen=True)
class ValUnit:
    """A nonzero rational seen p-adically: ``p**val * u`` with ``u = unit mod p``."""

    val: int
    unit: int
    prime: int

    def __post_init__(self):
        if not 0 < self.unit < self.prime:
            raise ValueError("unit part must be a nonzero residue")

    def __mul__(self, other: ValUnit) -> ValUnit:
        self._same(other)
        return ValUnit(self.val + other.val, self.unit * other.unit % self.prime, self.prime)

    def __truediv__(self, other: ValUnit) -> ValUnit:
        self._same(other)
        return self * other.inverse()

    def inverse(self) -> ValUnit:
        return ValUnit(-self.val, pow(self.unit, -1, self.prime), self.prime)

    def residue(self) -> int:
        """The value mod p; 0 for positive valuation."""
        if self.val < 0:
            raise ValueError("negative valuation has no residue mod p")
        return self.unit if self.val == 0 else 0

    def _same(self, other: ValUnit) -> None:
        if other.prime != self.prime:
            raise ValueError("mismatched primes")


def valunit_of_int(n: int, p: int) -> ValUnit:
    if n == 0:
        raise ValueError("zero has no unit part")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return ValUnit(v, n % p, p)


def valunit_of_rational(x: Fraction | int, p: int) -> ValUnit:
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no unit part")
    return valunit_of_int(x.numerator, p) / valunit_of_int(x.denominator, p)


def residue(x: Fraction | int, p: int) -> int:
    """x mod p for x with nonnegative valuation."""
    x = Fraction(x)
    if x == 0:
        return 0
    return valunit_of_rational(x, p).residue()


def dwork(x: Fraction | int, p: int) -> Fraction:
    """The unique y with nonnegative valuation such that p*y - x is in 0..p-1."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError("parameter not p-integral")
    k = -x.numerator * pow(x.denominator, -1, p) % p
    return (x + k) / p


def dwork_iter(x: Fraction | int, p: int, k: int) -> Fraction:
    """k-fold iterate of the Dwork map (k = 0 returns x)."""
    x = Fraction(x)
    for _ in range(k):
        x = dwork(x, p)
    return x


def dwork_orbit(x: Fraction | int, p: int, max_steps: int = 10_000) -> tuple[list[Fraction], int]:
    """Iterates D(x), D^2(x), ... up to the first repeat, and the cycle length."""
    x = Fraction(x)
    seen = {x: 0}
    orbit: list[Fraction] = []
    y = x
    for step in range(1, max_steps + 1):
        y = dwork(y, p)
        orbit.append(y)
        if y in seen:
            return orbit, step - seen[y]
        seen[y] = step
    raise RuntimeError(f"no repetition within {max_steps} Dwork steps")


def pochhammer_vp(gamma: Fraction | int, r: int, p: int) -> int:
    """Valuation of the rising factorial (gamma)_r, counted factor by factor."""
    gamma = Fraction(gamma)
    a, b = gamma.numerator, gamma.denominator
    if b % p == 0:
        raise ValueError("parameter not p-integral")
    total = 0
    for t in range(r):
        m = a + t * b
        if m == 0:
            raise ValueError("Pochhammer hits zero")
        total += _vp_int(m, p)
    return total
