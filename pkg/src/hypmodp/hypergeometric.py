"""Parameter systems and coefficient engines for hypergeometric series.

Two engines compute the coefficients

    Q(i) = (a_1)_i ... (a_n)_i / ((b_1)_i ... (b_{n-1})_i * i!)

One is exact (Fractions, for oracles at small i).  The other tracks only
the p-adic valuation and the unit residue and runs in the compiled kernel,
which makes 10^5 coefficients cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import HypothesisViolation, NotPIntegral
from .fp import FpSeries
from .numtheory import is_prime, multiplicative_order, totient
from .rationals import (
    dwork,
    dwork_iter,
    parse_rational,
    pochhammer_vp,
    render_rational,
    residue,
    valunit_of_rational,
    vp,
)


def _is_nonpositive_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@dataclass(frozen=True)
class ParamSystem:
    """Numerator parameters ``alpha`` and denominator parameters ``beta`` (last one 1)."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(Fraction(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(Fraction(b) for b in self.beta))
        if not self.alpha:
            raise ValueError("need at least one parameter")
        if len(self.alpha) != len(self.beta):
            raise ValueError(f"expected {len(self.alpha)} beta entries, got {len(self.beta)}")
        if self.beta[-1] != 1:
            raise ValueError("last beta entry must be 1")
        for x in self.alpha + self.beta:
            if _is_nonpositive_int(x):
                raise ValueError(f"parameter {render_rational(x)} is a nonpositive integer")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @cached_property
    def d(self) -> int:
        return math.lcm(*(x.denominator for x in self.alpha + self.beta[:-1]))

    @cached_property
    def phi_d(self) -> int:
        return totient(self.d)

    @property
    def key(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Identity of the series: parameters as multisets."""
        return tuple(sorted(self.alpha)), tuple(sorted(self.beta))

    def in_unit_interval(self) -> bool:
        return all(0 < x <= 1 for x in self.alpha + self.beta)

    def map(self, fn) -> ParamSystem:
        return ParamSystem(tuple(fn(a) for a in self.alpha), tuple(fn(b) for b in self.beta))

    def render(self) -> str:
        a = ",".join(render_rational(x) for x in self.alpha)
        b = ",".join(render_rational(x) for x in self.beta)
        return f"({a}; {b})"

    def to_json(self) -> dict:
        return {
            "alpha": [render_rational(x) for x in self.alpha],
            "beta": [render_rational(x) for x in self.beta],
        }

    def __str__(self) -> str:
        return self.render()


def make_system(alpha: Sequence, beta: Sequence) -> ParamSystem:
    """Build a system, appending the trailing 1 when beta has n-1 entries."""
    alpha = [Fraction(a) for a in alpha]
    beta = [Fraction(b) for b in beta]
    if len(beta) == len(alpha) - 1:
        beta.append(Fraction(1))
    return ParamSystem(tuple(alpha), tuple(beta))


def parse_params(alpha: str, beta: str) -> ParamSystem:
    """Parse comma-separated lists such as ``"1/3,1/2"`` and ``"5/12,1"``."""

    def split(text: str) -> list[Fraction]:
        items = [s for s in text.split(",") if s.strip()]
        return [parse_rational(s) for s in items]

    return make_system(split(alpha), split(beta) if beta.strip() else [])


@dataclass(frozen=True)
class PrimeContext:
    """A system together with a prime p not dividing d and l = ord_d(p)."""

    sys: ParamSystem
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.sys.d % self.p == 0:
            raise HypothesisViolation(f"p={self.p} divides d={self.sys.d}")

    @cached_property
    def l(self) -> int:  # noqa: E743
        return multiplicative_order(self.p, self.sys.d)

    def with_system(self, sys: ParamSystem) -> PrimeContext:
        return PrimeContext(sys, self.p)

    def dwork_system(self, k: int = 1) -> ParamSystem:
        """Entrywise k-fold Dwork image of the parameters."""
        return self.sys.map(lambda x: dwork_iter(x, self.p, k))


# -- exact engine -------------------------------------------------------------


def _pochhammer_rows(params: Iterable[Fraction], i_max: int) -> Iterator[tuple[int, int]]:
    """Yield (numerator, denominator) of prod_k (params_k)_i for i = 0..i_max."""
    params = list(params)
    num, den = 1, 1
    yield num, den
    for i in range(1, i_max + 1):
        for x in params:
            num *= x.numerator + (i - 1) * x.denominator
            den *= x.denominator
        yield num, den


def coeff_exact_range(sys: ParamSystem, i_max: int) -> list[Fraction]:
    """Exact Q(0..i_max) from separately accumulated Pochhammer products."""
    out = []
    for (an, ad), (bn, bd) in zip(_pochhammer_rows(sys.alpha, i_max), _pochhammer_rows(sys.beta, i_max)):
        out.append(Fraction(an * bd, ad * bn))
    return out


def coeff_exact(sys: ParamSystem, i: int) -> Fraction:
    if i < 0:
        raise ValueError("negative index")
    return coeff_exact_range(sys, i)[i]


# -- valuation / residue engines ----------------------------------------------


def coeff_valuation(ctx: PrimeContext, i: int) -> int:
    """v_p(Q(i)) by counting p-factors of each Pochhammer factor."""
    p = ctx.p
    return sum(pochhammer_vp(a, i, p) for a in ctx.sys.alpha) - sum(pochhammer_vp(b, i, p) for b in ctx.sys.beta)


def coeff_modp(ctx: PrimeContext, i: int) -> int:
    """Q(i) mod p (0 for positive valuation)."""
    v = coeff_valuation(ctx, i)
    if v < 0:
        raise NotPIntegral(i)
    if v > 0:
        return 0
    gen = CoeffGen(ctx)
    for _ in range(i):
        gen.step()
    return gen.residue


class CoeffGen:
    """Incremental (valuation, unit) accumulator for Q(0), Q(1), ..."""

    def __init__(self, ctx: PrimeContext):
        self.ctx = ctx
        self.index = 0
        self.valuation = 0
        self._unit = 1

    @property
    def residue(self) -> int:
        if self.valuation < 0:
            raise NotPIntegral(self.index)
        return self._unit if self.valuation == 0 else 0

    def step(self) -> None:
        p = self.ctx.p
        t = self.index
        for a in self.ctx.sys.alpha:
            vu = valunit_of_rational(a + t, p)
            self.valuation += vu.val
            self._unit = self._unit * vu.unit % p
        for b in self.ctx.sys.beta:
            vu = valunit_of_rational(b + t, p)
            self.valuation -= vu.val
            self._unit = self._unit * pow(vu.unit, -1, p) % p
        self.index += 1

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        while True:
            yield self.index, self.valuation, self._unit if self.valuation == 0 else 0
            self.step()


@lru_cache(maxsize=64)
def _kernel_series(sys: ParamSystem, p: int, n_terms: int) -> tuple[np.ndarray, np.ndarray]:
    a_num = [a.numerator for a in sys.alpha]
    a_den = [a.denominator for a in sys.alpha]
    b_num = [b.numerator for b in sys.beta]
    b_den = [b.denominator for b in sys.beta]
    res, val = kernels.hyp_series(a_num, a_den, b_num, b_den, p, n_terms)
    res.setflags(write=False)
    val.setflags(write=False)
    return res, val


def series_valuations(ctx: PrimeContext, n_terms: int) -> np.ndarray:
    return _kernel_series(ctx.sys, ctx.p, n_terms)[1]


def series_modp(ctx: PrimeContext, n_terms: int) -> FpSeries:
    """Q(0..n_terms-1) mod p; raises NotPIntegral on a negative valuation."""
    if n_terms < 1:
        raise ValueError("series order must be at least 1")
    res, val = _kernel_series(ctx.sys, ctx.p, n_terms)
    bad = np.flatnonzero(val < 0)
    if len(bad):
        raise NotPIntegral(int(bad[0]))
    return FpSeries._raw(ctx.p, res)


# -- valuation oracle ------------------------------------------------------------


def _drr_term(x: Fraction, gamma: Fraction, p: int, level: int) -> int:
    # floor(x - D^level(gamma) - floor(1 - gamma)/p^level) + 1
    return math.floor(x - dwork_iter(gamma, p, level) - Fraction(math.floor(1 - gamma), p**level)) + 1


def vp_drr(ctx: PrimeContext, i: int) -> int:
    """v_p(Q(i)) as a sum over levels of floor-function counts along Dwork orbits.

    The level-l term counts, for every parameter, the number of factors of
    its Pochhammer symbol divisible by p^l, using only the l-th Dwork
    iterate.  Levels beyond ceil(log_p(i+1)) + l_ctx + 2 must vanish; one
    further full period is checked before the sum is accepted.
    """
    if i < 0:
        raise ValueError("negative index")
    p = ctx.p
    per = ctx.l
    l_max = math.ceil(math.log(i + 1, p)) + per + 2 if i > 0 else per + 2
    alpha, beta = ctx.sys.alpha, ctx.sys.beta

    def delta(level: int) -> int:
        q = p**level
        x = Fraction(i % q, q)
        return sum(_drr_term(x, a, p, level) for a in alpha) - sum(_drr_term(x, b, p, level) for b in beta)

    total = sum(delta(level) for level in range(1, l_max + 1))
    for level in range(l_max + 1, l_max + per + 1):
        if delta(level) != 0:
            raise ArithmeticError("oracle truncation failure")
    return total


# -- operator ------------------------------------------------------------------------


def _poly_residues(shifts: Sequence[Fraction], xs: np.ndarray, p: int) -> np.ndarray:
    """prod_k (x + shifts_k) mod p for every x in xs."""
    out = np.ones(len(xs), dtype=np.int64)
    for s in shifts:
        out = out * ((xs + residue(s, p)) % p) % p
    return out


def indicial_residues(ctx: PrimeContext, xs: np.ndarray) -> np.ndarray:
    """I(x) = prod (x + beta_i - 1) mod p."""
    return _poly_residues([b - 1 for b in ctx.sys.beta], np.asarray(xs, dtype=np.int64), ctx.p)


def numerator_residues(ctx: PrimeContext, xs: np.ndarray) -> np.ndarray:
    """T(x) = prod (x + alpha_i) mod p."""
    return _poly_residues(list(ctx.sys.alpha), np.asarray(xs, dtype=np.int64), ctx.p)


def apply_hyp_operator(ctx: PrimeContext, g: FpSeries) -> FpSeries:
    """Coefficientwise I(k) g[k] - T(k-1) g[k-1]."""
    if g.p != ctx.p:
        raise ValueError("mismatched primes")
    n = g.order
    ks = np.arange(n, dtype=np.int64)
    c = g.dense()
    out = indicial_residues(ctx, ks) * c % ctx.p
    if n > 1:
        out[1:] = (out[1:] - numerator_residues(ctx, ks[:-1]) * c[:-1]) % ctx.p
    return FpSeries._raw(ctx.p, out % ctx.p)


# -- reports -------------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int
    first_failure: int | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "first_failure": self.first_failure,
            "details": self.details,
        }


def recurrence_check(sys: ParamSystem, j_max: int) -> CheckReport:
    """I(j) Q(j) = Q(j-1) T(j-1) as exact rationals for j = 1..j_max."""
    if j_max < 1:
        raise ValueError("j_max must be at least 1")
    q = coeff_exact_range(sys, j_max)
    for j in range(1, j_max + 1):
        ind = math.prod((j + b - 1 for b in sys.beta), start=Fraction(1))
        num = math.prod((j - 1 + a for a in sys.alpha), start=Fraction(1))
        if ind * q[j] != q[j - 1] * num:
            return CheckReport("recurrence", False, j_max, j)
    return CheckReport("recurrence", True, j_max)


def integrality_scan(ctx: PrimeContext, n_terms: int) -> CheckReport:
    """Valuation >= 0 for every index below n_terms (a bounded scan, not a proof)."""
    val = series_valuations(ctx, n_terms)
    bad = np.flatnonzero(val < 0)
    if len(bad):
        return CheckReport("integrality", False, n_terms, int(bad[0]))
    return CheckReport("integrality", True, n_terms, details={"status": f"verified up to {n_terms}"})


def divisible_indices(gamma: Sequence[Fraction], r: int, p: int) -> frozenset[int]:
    """1-based indices s with (gamma_s)_r divisible by p."""
    return frozenset(s for s, g in enumerate(gamma, start=1) if pochhammer_vp(g, r, p) >= 1)


def shifted_child(ctx: PrimeContext, r: int) -> ParamSystem:
    """Dwork images, plus one on the entries whose Pochhammer symbol at r is divisible by p."""
    p = ctx.p
    pa = divisible_indices(ctx.sys.alpha, r, p)
    pb = divisible_indices(ctx.sys.beta, r, p)
    alpha = tuple(dwork(a, p) + (1 if s in pa else 0) for s, a in enumerate(ctx.sys.alpha, start=1))
    beta = tuple(dwork(b, p) + (1 if s in pb else 0) for s, b in enumerate(ctx.sys.beta, start=1))
    return ParamSystem(alpha, beta)


def lambda0_check(ctx: PrimeContext, j_max: int) -> CheckReport:
    """Q(jp) mod p equals the Dwork-image coefficient at j, for j < j_max."""
    p = ctx.p
    f = series_modp(ctx, (j_max - 1) * p + 1)
    image = coeff_exact_range(ctx.dwork_system(1), j_max - 1)
    for j in range(j_max):
        if f[j * p] != residue(image[j], p):
            return CheckReport("lambda0", False, j_max, j)
    return CheckReport("lambda0", True, j_max)


def congruence_lemma_check(ctx: PrimeContext, j_max: int, r: int) -> CheckReport:
    """Factorization of Q(jp + r) mod p through the shifted child at r, for j < j_max.

    Also evaluates the three auxiliary unit quantities (a ratio over the
    divisible parameters at j, a ratio of Pochhammer symbols over the
    nondivisible ones, and the product with the divisible factor removed),
    asserting that the fixed two are p-adic units and that the product
    reproduces the same residues.  Indices j where the ratio alone is not a
    unit are listed under ``lambda_nonunit``.
    """
    p = ctx.p
    if not 0 <= r < p:
        raise ValueError(f"r={r} outside 0..{p - 1}")
    sys = ctx.sys
    details: dict = {"r": r}
    qr = coeff_exact(sys, r)
    image_sys = ctx.dwork_system(1)
    pre = vp(qr, p) == 0 and all(vp(x, p) == 0 for x in image_sys.alpha + image_sys.beta)
    details["preconditions"] = pre
    if not pre:
        return CheckReport("congruence", False, 0, None, details)

    pa = divisible_indices(sys.alpha, r, p)
    pb = divisible_indices(sys.beta, r, p)
    child = shifted_child(ctx, r)
    f = series_modp(ctx, (j_max - 1) * p + r + 1)
    child_q = coeff_exact_range(child, j_max - 1)
    image_q = coeff_exact_range(image_sys, j_max - 1)

    theta = Fraction(1)
    tau = Fraction(1)
    for gam, div, sign in ((sys.alpha, pa, 1), (sys.beta, pb, -1)):
        for s, g in enumerate(gam, start=1):
            if s in div:
                skip = p * dwork(g, p) - g
                part = math.prod((g + t for t in range(r) if t != skip), start=Fraction(1))
                tau *= part**sign
            else:
                theta *= math.prod((g + t for t in range(r)), start=Fraction(1)) ** sign
    fixed_units = vp(theta, p) == 0 and vp(tau, p) == 0
    lambda_nonunit: list[int] = []
    qr_mod = residue(qr, p)
    theta_tau = residue(theta * tau, p) if fixed_units else None
    for j in range(j_max):
        lam = math.prod((dwork(sys.alpha[s - 1], p) + j for s in pa), start=Fraction(1)) / math.prod(
            (dwork(sys.beta[s - 1], p) + j for s in pb), start=Fraction(1)
        )
        if vp(lam, p) != 0:
            lambda_nonunit.append(j)
        lhs = f[j * p + r]
        if vp(child_q[j], p) < 0 or lhs != residue(child_q[j], p) * qr_mod % p:
            details["failed"] = "factorization"
            return CheckReport("congruence", False, j_max, j, details)
        # lambda_j need not be a unit on its own; the product with the image coefficient is
        scaled = image_q[j] * lam
        if theta_tau is None or vp(scaled, p) < 0 or lhs != residue(scaled, p) * theta_tau % p:
            details["failed"] = "unit-product"
            return CheckReport("congruence", False, j_max, j, details)
    details["theta_tau_units"] = fixed_units
    details["lambda_nonunit"] = lambda_nonunit[:20]
    details["child"] = child.render()
    return CheckReport("congruence", True, j_max, None, details)
