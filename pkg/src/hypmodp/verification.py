"""Truncated checks of constructed relations, the Lucas property, and bound audits."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .fp import FpPoly, FpRatFn, FpSeries, poly_gcd
from .hypergeometric import PrimeContext, series_modp
from .relation import Annihilator, case_height_bound, reconstruct_lucas_polynomial
from .structure import admissible_set, level_context

DEFAULT_MIN_ORDER = 20_000
DEFAULT_MAX_ORDER = 200_000


def max_order() -> int:
    return int(os.environ.get("HYPMODP_MAX_ORDER", DEFAULT_MAX_ORDER))


@dataclass
class VerificationReport:
    kind: str
    checked_order: int
    verdict: str
    first_failure_index: int | None = None
    cleared_denominator_degree: int = 0
    measured_heights: list[int] = field(default_factory=list)
    bound_verdicts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "checked_order": self.checked_order,
            "verdict": self.verdict,
            "first_failure_index": self.first_failure_index,
            "cleared_denominator_degree": self.cleared_denominator_degree,
            "measured_heights": self.measured_heights,
            "bound_verdicts": self.bound_verdicts,
            "details": self.details,
        }


def _poly_lcm(a: FpPoly, b: FpPoly) -> FpPoly:
    return (a * b.exact_div(poly_gcd(a, b))).monic()


def cleared_form(ann: Annihilator) -> tuple[FpPoly, list[tuple[int, int, FpPoly]]]:
    """Clear denominators: z^m D f = sum z^(m + s_k) (D / den_k) num_k f^(p^e_k).

    Returns the left multiplier z^m D and the list of (shift, e_k, polynomial).
    """
    p = ann.p
    D = FpPoly.one(p)
    for _, r in ann.terms:
        D = _poly_lcm(D, r.den)
    m = max(0, max(-r.z_shift for _, r in ann.terms))
    rhs = [(m + r.z_shift, e, D.exact_div(r.den) * r.num) for e, r in ann.terms]
    return D.shift(m), rhs


def default_order(ann: Annihilator) -> int:
    lhs, _ = cleared_form(ann)
    want = max(DEFAULT_MIN_ORDER, 2 * (lhs.degree + ann.degree))
    return min(want, max_order())


def relation_residual(f: FpSeries, ann: Annihilator) -> tuple[np.ndarray, int]:
    """Residual coefficients of the cleared relation below f's order, and the cleared degree."""
    p, n = f.p, f.order
    lhs, rhs = cleared_form(ann)
    src = f.dense()
    pos = np.zeros(n, dtype=np.int64)
    kernels.frob_mul_acc(pos, src, lhs.dense(), 0, 1)
    pos %= p
    neg = np.zeros(n, dtype=np.int64)
    for shift, e, poly in rhs:
        q = p**e
        if poly.is_zero() or shift >= n:
            continue
        kernels.frob_mul_acc(neg, src[: (n - 1 - shift) // q + 1], poly.dense(), shift, q)
        neg %= p
    return (pos - neg) % p, lhs.degree


def verify_relation(ctx: PrimeContext, ann: Annihilator, order: int | None = None) -> VerificationReport:
    if ann.p != ctx.p:
        raise ValueError(f"relation is for p={ann.p}, context has p={ctx.p}")
    n = default_order(ann) if order is None else order
    if n < 1:
        raise ValueError("order must be at least 1")
    lhs, _ = cleared_form(ann)
    if n < lhs.degree:
        raise ValueError("truncation below denominator degree")
    res, cleared = relation_residual(series_modp(ctx, n), ann)
    bad = np.flatnonzero(res)
    return VerificationReport(
        kind="relation",
        checked_order=n,
        verdict="fail" if len(bad) else "pass",
        first_failure_index=int(bad[0]) if len(bad) else None,
        cleared_denominator_degree=cleared,
        measured_heights=ann.heights,
        bound_verdicts=bound_audit(ann, ctx)["verdicts"],
    )


def lucas_check(ctx: PrimeContext, order: int, ann: Annihilator | None = None) -> VerificationReport:
    """Test a(m q + r) = a(m) a(r) mod p with q = p^l for every index below ``order``.

    On success the one-term relation f = R f^q with R = sum_{r<q} a(r) z^r is
    also checked directly, and compared with ``ann`` when that is a single
    polynomial term at exponent l.
    """
    p, q = ctx.p, ctx.p**ctx.l
    a = series_modp(ctx, order).dense()
    idx = np.arange(order, dtype=np.int64)
    bad = np.flatnonzero(a != a[idx // q] * a[idx % q] % p)
    details: dict = {"q": q}
    if len(bad):
        m, r = divmod(int(bad[0]), q)
        details["witness"] = {"m": m, "r": r}
        return VerificationReport("lucas", order, "fail", int(bad[0]), details=details)
    R = reconstruct_lucas_polynomial(ctx)
    one_term = Annihilator(p, ctx.l, [(ctx.l, FpRatFn.from_poly(R))])
    res, _ = relation_residual(series_modp(ctx, order), one_term)
    nz = np.flatnonzero(res)
    details["reconstructed_relation"] = "pass" if not len(nz) else f"fail at {int(nz[0])}"
    verdict = "pass" if not len(nz) else "fail"
    first = int(nz[0]) if len(nz) else None
    if ann is not None and len(ann.terms) == 1 and ann.terms[0][0] == ctx.l and ann.terms[0][1].is_polynomial():
        same = ann.terms[0][1].as_poly() == R
        details["matches_relation"] = same
        if not same:
            verdict = "fail"
    return VerificationReport("lucas", order, verdict, first, details=details)


def system_size(ctx: PrimeContext) -> int:
    """Number of members in the relation system: #S of the (l-1)-fold image."""
    return len(admissible_set(level_context(ctx, ctx.l - 1)).S)


def bound_audit(ann: Annihilator, ctx: PrimeContext) -> dict:
    """Measured degree and heights against the general and per-case bounds (exact integers)."""
    p, n, phi = ctx.p, ctx.sys.n, ctx.sys.phi_d
    degree_bound = p ** (2 * n * phi)
    height_bound = 5**n * math.factorial(n + 1) * p ** (2 * (n + 1) * phi)
    size = system_size(ctx)
    case_bound = case_height_bound(size, p, ctx.l)
    height = ann.height
    return {
        "measured_degree": ann.degree,
        "measured_height": height,
        "degree_bound": str(degree_bound),
        "height_bound": str(height_bound),
        "case_bound": str(case_bound),
        "system_size": size,
        "verdicts": {
            "degree": ann.degree <= degree_bound,
            "height": height <= height_bound,
            "case": height < case_bound,
        },
    }
