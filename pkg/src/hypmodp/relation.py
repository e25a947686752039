"""Construction of a mod-p algebraic relation for a hypergeometric series.

Pipeline: one Cartier step splits f into polynomial multiples of p-th powers
of shifted series; iterating l times and collecting the member family gives a
square system ``g_i = sum_j Q_ij g_j^(p^l)``; Frobenius-twisted elimination
then leaves ``f = sum_k R_k f^(p^(k l))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from .errors import HypothesisViolation
from .fp import FpPoly, FpRatFn
from .hypergeometric import ParamSystem, PrimeContext, series_modp
from .rationals import is_unit
from .structure import (
    admissible_set,
    check_p_property,
    level_context,
    shift_by_partition,
    tau_map,
)

CHECK_FACTOR = 4


def _require_image_units(ctx: PrimeContext) -> None:
    image = ctx.dwork_system(1)
    for x in image.alpha + image.beta:
        if not is_unit(x, ctx.p):
            raise HypothesisViolation(f"Dwork image parameter {x} is not a p-adic unit")


def _check_identity(ctx: PrimeContext, terms: list[tuple[FpPoly, ParamSystem]], e: int, order: int, what: str):
    """Truncated check of f = sum poly * member^(p^e) to the given order."""
    p = ctx.p
    q = p**e
    acc = np.zeros(order, dtype=np.int64)
    for poly, member in terms:
        if poly.is_zero():
            continue
        g = series_modp(ctx.with_system(member), (order - 1) // q + 1).dense()
        kernels.frob_mul_acc(acc, g, poly.dense(), 0, q)
        acc %= p
    f = series_modp(ctx, order).dense()
    diff = np.flatnonzero((f - acc) % p)
    if len(diff):
        raise AssertionError(f"{what} identity fails at index {int(diff[0])}")


@dataclass(frozen=True)
class CartierDecomposition:
    """f = sum_i poly_i * child_i^p mod p, one term per admissible index."""

    parent: PrimeContext
    terms: tuple[tuple[FpPoly, ParamSystem], ...]


def cartier_decompose(ctx: PrimeContext, check_order: int | None = None) -> CartierDecomposition:
    p = ctx.p
    _require_image_units(ctx)
    sets = admissible_set(ctx)
    f = series_modp(ctx, p).dense()
    terms = []
    for r in sets.S:
        end = sets.next_exponent(r, p)
        poly = FpPoly.from_terms(p, ((s, int(f[s])) for s in range(r, end)))
        terms.append((poly, shift_by_partition(ctx.sys, r, p)))
    order = CHECK_FACTOR * p if check_order is None else check_order
    if order > 0:
        _check_identity(ctx, terms, 1, order, "Cartier decomposition")
    return CartierDecomposition(ctx, tuple(terms))


@dataclass(frozen=True)
class Descent:
    level: int
    terms: tuple[tuple[FpPoly, ParamSystem], ...]

    def coefficient(self, key) -> FpPoly | None:
        for poly, sys in self.terms:
            if sys.key == key:
                return poly
        return None


def descend(ctx: PrimeContext, level: int | None = None, check_order: int | None = None) -> Descent:
    """Compose ``level`` Cartier steps (default l): f = sum Q_j * member_j^(p^level)."""
    p = ctx.p
    level = ctx.l if level is None else level
    state: dict = {ctx.sys.key: (ctx.sys, FpPoly.one(p))}
    for a in range(1, level + 1):
        nxt: dict = {}
        for sys, coeff in state.values():
            dec = cartier_decompose(ctx.with_system(sys), check_order=0)
            for poly, child in dec.terms:
                contrib = coeff * poly.frobenius(a - 1)
                if child.key in nxt:
                    prev_sys, prev = nxt[child.key]
                    nxt[child.key] = (prev_sys, prev + contrib)
                else:
                    nxt[child.key] = (child, contrib)
        state = nxt
        for sys, poly in state.values():
            if poly.degree >= p**a:
                raise AssertionError(f"descent degree {poly.degree} not below p^{a}")
    terms = tuple((poly, sys) for sys, poly in state.values())
    order = CHECK_FACTOR * p**level if check_order is None else check_order
    if order > 0:
        _check_identity(ctx, list(terms), level, order, f"level-{level} descent")
    return Descent(level, terms)


@dataclass(frozen=True)
class RelationSystem:
    """g_i = sum_j matrix[i][j] * g_j^(p^l) with g_0 the original series."""

    ctx: PrimeContext
    members: tuple[ParamSystem, ...]
    matrix: tuple[tuple[FpPoly, ...], ...]

    @property
    def level(self) -> int:
        return self.ctx.l

    @property
    def size(self) -> int:
        return len(self.members)


def build_system(ctx: PrimeContext, check_order: int | None = None, force: bool = False) -> RelationSystem:
    if not force:
        report = check_p_property(ctx)
        if not report.main_hypotheses:
            raise HypothesisViolation("; ".join(report.violations))
    p, l = ctx.p, ctx.l
    prev = level_context(ctx, l - 1)
    members = [shift_by_partition(prev.sys, r, p) for r in admissible_set(prev).S]
    if members[0].key != ctx.sys.key:
        raise HypothesisViolation("the l-fold Dwork image does not return to the original parameters")
    members[0] = ctx.sys
    keys = [m.key for m in members]
    rows = []
    for m in members:
        desc = descend(ctx.with_system(m), l, check_order)
        for _, child in desc.terms:
            if child.key not in keys:
                raise HypothesisViolation(f"member family not closed: {child.render()}")
        rows.append(tuple(desc.coefficient(k) or FpPoly.zero(p) for k in keys))
    return RelationSystem(ctx, tuple(members), tuple(rows))


# -- annihilator -----------------------------------------------------------------------


@dataclass
class Annihilator:
    """f = sum_k R_k f^(p^e_k), i.e. a root of Y - sum R_k Y^(p^e_k)."""

    p: int
    l: int  # noqa: E741
    terms: list[tuple[int, FpRatFn]]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = sorted(self.terms, key=lambda t: t[0])

    @property
    def degree(self) -> int:
        return self.p ** max(e for e, _ in self.terms)

    @property
    def heights(self) -> list[int]:
        return [r.height for _, r in self.terms]

    @property
    def height(self) -> int:
        return max(self.heights)

    def render(self) -> str:
        return " + ".join(f"[{r.render()}]*f^(p^{e})" for e, r in self.terms)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "terms": [{"frob_exp": e, "ratfn": r.to_json()} for e, r in self.terms],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Annihilator:
        p = int(data["p"])
        terms = []
        for t in data["terms"]:
            r = FpRatFn.from_json(t["ratfn"])
            if r.p != p:
                raise ValueError("term prime differs from relation prime")
            e = int(t["frob_exp"])
            if e < 1:
                raise ValueError("Frobenius exponent must be positive")
            terms.append((e, r))
        if not terms:
            raise ValueError("relation has no terms")
        return cls(p, int(data["l"]), terms, dict(data.get("provenance", {})))


def case_height_bound(size: int, p: int, l: int) -> int:  # noqa: E741
    """Height bound for a system of the given size (one: degree bound p^l)."""
    if size == 1:
        return p**l
    if size == 2:
        return 2 * p ** (2 * l)
    t = size - 1
    return 5**t * math.factorial(t + 1) * p ** (2 * (t + 1) * l)


def _max_height(rows) -> int:
    return max((x.height for row in rows for x in row if not x.is_zero()), default=0)


def eliminate(system: RelationSystem) -> Annihilator:
    """Eliminate members one at a time until only powers of g_0 remain.

    State per row i: ``g_i = sum_k P[i][k] g_0^(p^((k+1) l)) + sum_j A[i][j] g_(j+1)^(p^(s l))``.
    Each step solves row 0 for the last member (pivot = largest index with a
    nonzero row-0 coefficient, swapped into last place), substitutes it into
    every row, doubling s and removing one member.
    """
    ctx = system.ctx
    p, l = ctx.p, ctx.l
    size = system.size
    to_rf = FpRatFn.from_poly
    P = [[to_rf(row[0])] for row in system.matrix]
    A = [[to_rf(x) for x in row[1:]] for row in system.matrix]
    s = 1
    labels = list(range(1, size))
    trace: list[dict] = []
    ledger = [{"step": 0, "s": s, "members": len(labels), "max_height": _max_height(P + A)}]

    while labels:
        m = len(labels)
        nonzero = [k for k in range(m) if not A[0][k].is_zero()]
        if not nonzero:
            trace.append({"step": len(trace) + 1, "branch": "zero", "remaining": [*labels]})
            break
        k = nonzero[-1]
        if k != m - 1:
            for row in A:
                row[k], row[m - 1] = row[m - 1], row[k]
            P[k + 1], P[m] = P[m], P[k + 1]
            A[k + 1], A[m] = A[m], A[k + 1]
            labels[k], labels[m - 1] = labels[m - 1], labels[k]
        trace.append({"step": len(trace) + 1, "pivot": labels[-1]})

        e = s * l
        piv = A[0][m - 1]
        C = [A[i][m - 1] / piv for i in range(m + 1)]
        Qd = [[P[i][k] - C[i] * P[0][k] for k in range(s)] for i in range(m + 1)]
        B = [[A[i][k] - C[i] * A[0][k] for k in range(m - 1)] for i in range(m + 1)]
        Cf = [c.frobenius(e) for c in C]
        Qf = [[q.frobenius(e) for q in row] for row in Qd]
        Bf = [[b.frobenius(e) for b in row] for row in B]

        newP, newA = [], []
        for i in range(m):
            a_row = A[i]
            js = [j for j in range(m) if not a_row[j].is_zero()]
            tp = list(P[i])
            tp[s - 1] = tp[s - 1] + _dot(a_row, Cf[1:], js, p)
            for kk in range(s):
                tp.append(_dot(a_row, [Qf[j + 1][kk] for j in range(m)], js, p))
            newP.append(tp)
            newA.append([_dot(a_row, [Bf[j + 1][kk] for j in range(m)], js, p) for kk in range(m - 1)])
        P, A = newP, newA
        s *= 2
        labels.pop()
        ledger.append({"step": len(trace), "s": s, "members": len(labels), "max_height": _max_height(P + A)})

    terms = [((k + 1) * l, r) for k, r in enumerate(P[0]) if not r.is_zero()]
    if not terms:
        raise ArithmeticError("elimination produced an empty relation")
    ann = Annihilator(p, l, terms, {"method": "elimination", "size": size, "steps": trace, "heights": ledger})
    _assert_case_bound(ann, size)
    return ann


def _dot(row: list[FpRatFn], col: list[FpRatFn], js: list[int], p: int) -> FpRatFn:
    """sum_j row[j] * col[j] with col[j] the substituted expression for member j+1."""
    out = FpRatFn.zero(p)
    for j in js:
        if not col[j].is_zero():
            out = out + row[j] * col[j]
    return out


def _assert_case_bound(ann: Annihilator, size: int) -> None:
    bound = case_height_bound(size, ann.p, ann.l)
    ann.provenance["case_bound"] = bound
    ann.provenance["measured_heights"] = ann.heights
    if size == 1:
        (e, r), = ann.terms
        if not r.is_polynomial() or r.as_poly().degree >= bound:
            raise AssertionError("single-member relation is not a polynomial of degree below p^l")
    elif ann.height >= bound:
        raise AssertionError(f"height {ann.height} exceeds case bound {bound}")


def construct(ctx: PrimeContext, check_order: int | None = None, force: bool = False) -> Annihilator:
    return eliminate(build_system(ctx, check_order, force))


# -- closed form for two admissible indices ---------------------------------------------


def _segment(f: np.ndarray, p: int, lo: int, hi: int) -> FpPoly:
    return FpPoly.from_terms(p, ((s, int(f[s])) for s in range(lo, hi)))


def construct_two_term(ctx: PrimeContext) -> Annihilator:
    """Closed-form relation f = Q1 f^p + Q2 f^(p^2) when p = 1 mod d and #S = 2."""
    p = ctx.p
    if ctx.l != 1:
        raise HypothesisViolation(f"p={p} is not 1 mod d={ctx.sys.d}")
    report = check_p_property(ctx)
    if not report.main_hypotheses:
        raise HypothesisViolation("; ".join(report.violations))
    sets = admissible_set(ctx)
    if len(sets.S) != 2:
        raise HypothesisViolation(f"admissible set has {len(sets.S)} elements, need 2")
    r1 = sets.S[1]
    f = series_modp(ctx, p).dense()
    p0 = _segment(f, p, 0, sets.next_exponent(0, p))
    p1 = _segment(f, p, r1, sets.next_exponent(r1, p))

    child = shift_by_partition(ctx.sys, r1, p)
    cctx = ctx.with_system(child)
    csets = admissible_set(cctx)
    start = tau_map(ctx, 1, 1)[r1]
    g = series_modp(cctx, p).dense()
    t0 = _segment(g, p, 0, csets.next_exponent(0, p))
    t1 = _segment(g, p, start, csets.next_exponent(start, p))

    rf = FpRatFn.from_poly
    p1_pow = rf(p1) ** (p - 1)
    t1p = rf(t1.frobenius(1))
    q1 = rf(p0) + t1p / p1_pow
    q2 = rf(p1) * rf(t0.frobenius(1)) - t1p * rf(p0.frobenius(1)) / p1_pow
    terms = [(e, r) for e, r in ((1, q1), (2, q2)) if not r.is_zero()]
    ann = Annihilator(p, 1, terms, {"method": "two-term closed form", "S": list(sets.S), "child_start": start})
    _assert_case_bound(ann, 2)
    return ann


def reconstruct_lucas_polynomial(ctx: PrimeContext) -> FpPoly:
    """sum_{r < p^l} a(r) z^r, the coefficient of the one-term relation when f is p^l-Lucas."""
    q = ctx.p**ctx.l
    return FpPoly(ctx.p, series_modp(ctx, q).dense())

