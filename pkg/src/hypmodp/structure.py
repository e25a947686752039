"""Exponent and admissible sets, divisibility partitions, shifted systems, and the
unit/non-resonance hypothesis checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import HypothesisViolation, NotPIntegral
from .hypergeometric import (
    ParamSystem,
    PrimeContext,
    coeff_valuation,
    divisible_indices,
    indicial_residues,
)
from .rationals import dwork, dwork_iter, dwork_orbit, is_unit, render_rational, residue


@dataclass(frozen=True)
class StructureSets:
    E: tuple[int, ...]
    S: tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.S) - 1

    def next_exponent(self, r: int, p: int) -> int:
        """Smallest element of E above r, or p when r is the largest."""
        return next((e for e in self.E if e > r), p)


@dataclass(frozen=True)
class Partition:
    P: frozenset[int]
    C: frozenset[int]


def exponent_set(ctx: PrimeContext) -> list[int]:
    p = ctx.p
    roots = indicial_residues(ctx, np.arange(p, dtype=np.int64))
    scanned = sorted(int(x) for x in np.flatnonzero(roots == 0))
    symbolic = sorted({0} | {residue(1 - b, p) for b in ctx.sys.beta})
    if scanned != symbolic:
        raise AssertionError(f"exponent set mismatch: scan {scanned} vs residues {symbolic}")
    return scanned


def admissible_set(ctx: PrimeContext) -> StructureSets:
    E = exponent_set(ctx)
    S = []
    for r in E:
        v = coeff_valuation(ctx, r)
        if v < 0:
            raise NotPIntegral(r)
        if v == 0:
            S.append(r)
    return StructureSets(tuple(E), tuple(S))


def partition(gamma: Sequence[Fraction], r: int, p: int) -> Partition:
    n = len(gamma)
    if not 0 <= r < p:
        raise ValueError(f"r={r} outside 0..{p - 1}")
    P = divisible_indices(gamma, r, p)
    return Partition(P, frozenset(range(1, n + 1)) - P)


def level_context(ctx: PrimeContext, a: int) -> PrimeContext:
    """Context of the a-fold Dwork image (a = 0 is ctx itself)."""
    return ctx if a == 0 else ctx.with_system(ctx.dwork_system(a))


def shift_by_partition(sys: ParamSystem, r: int, p: int) -> ParamSystem:
    """Dwork image of sys, plus one on entries whose Pochhammer symbol at r is divisible by p."""
    pa = partition(sys.alpha, r, p).P
    pb = partition(sys.beta, r, p).P
    alpha = tuple(dwork(x, p) + (s in pa) for s, x in enumerate(sys.alpha, start=1))
    beta = tuple(dwork(x, p) + (s in pb) for s, x in enumerate(sys.beta, start=1))
    return ParamSystem(alpha, beta)


def shifted_params(ctx: PrimeContext, a: int, i: int) -> ParamSystem:
    """The i-th member at level a: shift of the level-(a-1) image at its i-th admissible index."""
    if a < 1:
        raise ValueError("level must be at least 1")
    prev = level_context(ctx, a - 1)
    S = admissible_set(prev).S
    if not 0 <= i < len(S):
        raise ValueError(f"index {i} outside the admissible set of size {len(S)}")
    return shift_by_partition(prev.sys, S[i], ctx.p)


# -- sigma / tau ---------------------------------------------------------------------


def _classify(ctx: PrimeContext, a: int, i: int) -> tuple[ParamSystem, ParamSystem, Partition]:
    prev = level_context(ctx, a - 1)
    r_prev = admissible_set(prev).S[i]
    return shifted_params(ctx, a, i), ctx.dwork_system(a), partition(prev.sys.beta, r_prev, ctx.p)


def _beta_class(r: int, betas: Sequence[Fraction], part: Partition, p: int) -> str:
    """'C' or 'P' for the beta entries whose exponent 1 - beta_j is r mod p."""
    classes = {"P" if j in part.P else "C" for j, b in enumerate(betas, start=1) if residue(1 - b, p) == r}
    if len(classes) != 1:
        raise HypothesisViolation(f"hypothesis violation: exponent {r} has classes {sorted(classes)}")
    return classes.pop()


def sigma_map(ctx: PrimeContext, a: int, i: int) -> dict[int, int]:
    """Bijection from the admissible set of the shifted member onto that of the Dwork image."""
    p = ctx.p
    member, image, part = _classify(ctx, a, i)
    src = admissible_set(ctx.with_system(member)).S
    dst = set(admissible_set(ctx.with_system(image)).S)
    sigma = {}
    for r in src:
        target = r if _beta_class(r, member.beta, part, p) == "C" else r + 1
        if target not in dst:
            raise HypothesisViolation(f"hypothesis violation: sigma({r}) = {target} not admissible")
        sigma[r] = target
    if sorted(sigma.values()) != sorted(dst):
        raise HypothesisViolation("hypothesis violation: sigma is not a bijection")
    return sigma


def tau_map(ctx: PrimeContext, a: int, i: int) -> dict[int, int]:
    """Inverse of sigma_map, computed from its own rule."""
    p = ctx.p
    member, image, part = _classify(ctx, a, i)
    src = admissible_set(ctx.with_system(image)).S
    dst = set(admissible_set(ctx.with_system(member)).S)
    tau = {}
    for r in src:
        kind = _beta_class(r, image.beta, part, p)
        target = r if kind == "C" else r - 1
        if target not in dst:
            raise HypothesisViolation(f"hypothesis violation: tau({r}) = {target} not admissible")
        tau[r] = target
    if sorted(tau.values()) != sorted(dst):
        raise HypothesisViolation("hypothesis violation: tau is not a bijection")
    return tau


def partition_transport_holds(ctx: PrimeContext, a: int, i: int) -> bool:
    """Partitions of the member at r coincide with those of the Dwork image at sigma(r)."""
    p = ctx.p
    member = shifted_params(ctx, a, i)
    image = ctx.dwork_system(a)
    for r, s in sigma_map(ctx, a, i).items():
        if partition(member.alpha, r, p) != partition(image.alpha, s, p):
            return False
        if partition(member.beta, r, p) != partition(image.beta, s, p):
            return False
    return True


# -- hypothesis checker ----------------------------------------------------------------

CONDITIONS = ("P1", "P2", "P3", "P4", "P5")


@dataclass
class PPropertyReport:
    p: int
    l: int  # noqa: E741
    d: int
    E: list[int]
    S: list[int]
    verdicts: dict[str, bool]
    unit_params: bool
    p_integral: bool
    violations: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.p_integral and all(self.verdicts.values())

    @property
    def main_hypotheses(self) -> bool:
        return self.holds and self.unit_params

    def to_dict(self) -> dict:
        return {
            "E": self.E,
            "S": self.S,
            "p_property": {**self.verdicts, "unit_params": self.unit_params},
            "l": self.l,
            "d": self.d,
            "p_integral": self.p_integral,
            "violations": self.violations,
        }


def check_p_property(ctx: PrimeContext, extend_p4: bool = False) -> PPropertyReport:
    """Evaluate every sub-condition for k = 1..l and collect all violations.

    With ``extend_p4`` the P4 condition is additionally checked at k = l + 1.
    """
    p, sys = ctx.p, ctx.sys
    n = sys.n
    alpha, beta = sys.alpha, sys.beta
    bad: dict[str, list[str]] = {c: [] for c in CONDITIONS}
    r = render_rational

    p_integral = all(x.denominator % p for x in alpha + beta)
    unit_params = p_integral and all(is_unit(x, p) for x in alpha + beta)

    if p_integral:
        for k in range(1, ctx.l + 1):
            da = [dwork_iter(x, p, k) for x in alpha]
            db = [dwork_iter(x, p, k) for x in beta]
            for name, vec in (("alpha", da), ("beta", db)):
                for s, x in enumerate(vec, start=1):
                    if not is_unit(x, p):
                        bad["P1"].append(f"k={k}: D^k({name}_{s}) = {r(x)}")
            for i in range(n):
                for j in range(n):
                    if not is_unit(da[i] - db[j], p):
                        bad["P2"].append(f"k={k}: D^k(alpha_{i + 1}) - D^k(beta_{j + 1}) = {r(da[i] - db[j])}")
            for j in range(n):
                for s in range(j + 1, n):
                    if is_unit(db[j] - db[s], p) != (beta[j] != beta[s]):
                        bad["P3"].append(f"k={k}: D^k(beta_{j + 1}) - D^k(beta_{s + 1}) = {r(db[j] - db[s])}")
            for i in range(n):
                for j in range(n):
                    x = 1 - db[j] + da[i]
                    if not is_unit(x, p):
                        bad["P5"].append(f"k={k}: 1 - D^k(beta_{j + 1}) + D^k(alpha_{i + 1}) = {r(x)}")
                    y = 1 - db[j] + db[i]
                    if not is_unit(y, p):
                        bad["P5"].append(f"k={k}: 1 - D^k(beta_{j + 1}) + D^k(beta_{i + 1}) = {r(y)}")
        for k in range(1, ctx.l + 1 + bool(extend_p4)):
            for j, b in enumerate(beta, start=1):
                if b == 1:
                    continue
                x = p * dwork_iter(b, p, k) - dwork_iter(b, p, k - 1)
                if x == p - 1:
                    bad["P4"].append(f"k={k}: p*D^k(beta_{j}) - D^(k-1)(beta_{j}) = p-1")

    try:
        sets = admissible_set(ctx)
        E, S = list(sets.E), list(sets.S)
    except NotPIntegral as exc:
        E, S = exponent_set(ctx), []
        p_integral = False
        bad["P1"].append(str(exc))

    violations = [f"{c}: {msg}" for c in CONDITIONS for msg in bad[c]]
    if not p_integral:
        violations.insert(0, "parameters or series not p-integral")
    if not unit_params:
        violations.append("unit_params: some alpha_i or beta_j is not a p-adic unit")
    return PPropertyReport(
        p=p,
        l=ctx.l,
        d=sys.d,
        E=E,
        S=S,
        verdicts={c: p_integral and not bad[c] for c in CONDITIONS},
        unit_params=unit_params,
        p_integral=p_integral,
        violations=violations,
    )


def dwork_orbits(ctx: PrimeContext) -> dict[str, dict]:
    """Orbit (up to first repeat) and period of every parameter."""
    out = {}
    for name, vec in (("alpha", ctx.sys.alpha), ("beta", ctx.sys.beta)):
        for s, x in enumerate(vec, start=1):
            orbit, period = dwork_orbit(x, ctx.p)
            out[f"{name}_{s}"] = {
                "value": render_rational(x),
                "orbit": [render_rational(y) for y in orbit],
                "period": period,
            }
    return out
