"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 bad input, 3 hypothesis violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import HypothesisViolation, NotPIntegral
from .hypergeometric import ParamSystem, PrimeContext, parse_params
from .numtheory import primes_between
from .rationals import render_rational
from .relation import Annihilator, construct
from .structure import check_p_property, dwork_orbits
from .verification import bound_audit, default_order, lucas_check, max_order, verify_relation

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_HYPOTHESIS = 0, 1, 2, 3


class InputError(Exception):
    pass


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(args, payload: dict, text: str) -> None:
    print(dump(payload) if args.json else text)


def _order(args, fallback: int) -> int:
    n = fallback if args.order is None else args.order
    if n < 1:
        raise InputError("--order must be positive")
    return min(n, max_order())


def _system(args) -> ParamSystem:
    if args.alpha is None:
        raise InputError("--alpha is required")
    return parse_params(args.alpha, args.beta or "")


def _context(args) -> PrimeContext:
    if args.prime is None:
        raise InputError("--prime is required")
    return PrimeContext(_system(args), args.prime)


# -- commands ------------------------------------------------------------------------


def analysis(ctx: PrimeContext) -> dict:
    report = check_p_property(ctx)
    return {
        "alpha": [render_rational(x) for x in ctx.sys.alpha],
        "beta": [render_rational(x) for x in ctx.sys.beta],
        "p": ctx.p,
        "phi_d": ctx.sys.phi_d,
        "orbits": dwork_orbits(ctx),
        **report.to_dict(),
    }


def cmd_analyze(args) -> int:
    ctx = _context(args)
    info = analysis(ctx)
    lines = [
        f"system   {ctx.sys.render()}",
        f"p={ctx.p}  d={info['d']}  phi(d)={info['phi_d']}  l={info['l']}",
        f"E = {info['E']}",
        f"S = {info['S']}",
        "orbits:",
        *(f"  {k}: {v['value']} -> {', '.join(v['orbit'])} (period {v['period']})" for k, v in info["orbits"].items()),
        "hypotheses: " + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in info["p_property"].items()),
        *(f"  {msg}" for msg in info["violations"]),
    ]
    _emit(args, info, "\n".join(lines))
    return EXIT_OK


def _summary(ann: Annihilator) -> list[str]:
    out = [f"relation mod {ann.p} (l={ann.l}): {len(ann.terms)} term(s), degree p^{max(e for e, _ in ann.terms)}"]
    for e, r in ann.terms:
        out.append(f"  f^(p^{e}) coefficient: height {r.height}  {r.render()}")
    steps = ann.provenance.get("steps", [])
    if steps:
        out.append("  elimination: " + "; ".join(json.dumps(s, sort_keys=True) for s in steps))
    return out


def cmd_construct(args) -> int:
    ctx = _context(args)
    if args.force:
        report = check_p_property(ctx)
        for msg in report.violations:
            print(f"warning: {msg}", file=sys.stderr)
    ann = construct(ctx, force=args.force)
    payload = ann.to_json()
    if args.out:
        Path(args.out).write_text(dump(payload) + "\n")
    audit = bound_audit(ann, ctx)
    if args.json:
        print(dump({"relation": payload, "audit": audit}))
    else:
        print("\n".join(_summary(ann)))
        print(f"  bounds: {json.dumps(audit['verdicts'], sort_keys=True)}")
        if args.out:
            print(f"  written to {args.out}")
    return EXIT_OK


def _load_relation(path: str) -> Annihilator:
    try:
        data = json.loads(Path(path).read_text())
        return Annihilator.from_json(data)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read relation file {path}: {exc}") from exc


def cmd_verify(args) -> int:
    if not args.relation:
        raise InputError("--relation is required")
    ann = _load_relation(args.relation)
    if args.prime is not None and args.prime != ann.p:
        raise InputError(f"--prime {args.prime} differs from the relation's prime {ann.p}")
    ctx = PrimeContext(_system(args), ann.p)
    report = verify_relation(ctx, ann, _order(args, default_order(ann)))
    text = (
        f"verify mod {ann.p} to order {report.checked_order}: {report.verdict}"
        + (f" (first failure at {report.first_failure_index})" if report.first_failure_index is not None else "")
        + f"; cleared denominator degree {report.cleared_denominator_degree}"
    )
    _emit(args, report.to_dict(), text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_lucas(args) -> int:
    ctx = _context(args)
    report = lucas_check(ctx, _order(args, 3000))
    text = f"p^{ctx.l}-Lucas mod {ctx.p} to order {report.checked_order}: {report.verdict}"
    if "witness" in report.details:
        w = report.details["witness"]
        text += f" (a({w['m']}*{report.details['q']}+{w['r']}) differs from a({w['m']})*a({w['r']}))"
    _emit(args, report.to_dict(), text)
    return EXIT_OK if report.passed else EXIT_FAIL


SCAN_MAX_POWER = 5_000_000


def scan_prime(sys_: ParamSystem, p: int, do_construct: bool, order: int | None) -> dict:
    row: dict = {"p": p}
    try:
        ctx = PrimeContext(sys_, p)
    except HypothesisViolation as exc:
        return {**row, "constructible": False, "failing": [str(exc)]}
    report = check_p_property(ctx)
    row.update(l=ctx.l, E=report.E, S=report.S, constructible=report.main_hypotheses)
    flags = {"p_integral": report.p_integral, **report.verdicts, "unit_params": report.unit_params}
    row["failing"] = [k for k, v in flags.items() if not v]
    if not (do_construct and report.main_hypotheses):
        return row
    if p ** (2 * ctx.l) > SCAN_MAX_POWER:
        row["verify"] = f"skipped: p^(2l) above {SCAN_MAX_POWER}"
        return row
    ann = construct(ctx)
    row.update(terms=len(ann.terms), heights=ann.heights)
    n = min(order or default_order(ann), max_order())
    try:
        row["verify"] = verify_relation(ctx, ann, n).verdict
    except ValueError as exc:
        row["verify"] = f"skipped: {exc} (order {n})"
    return row


def cmd_scan(args) -> int:
    sys_ = _system(args)
    if args.prime_min is None or args.prime_max is None:
        raise InputError("--prime-min and --prime-max are required")
    primes = primes_between(args.prime_min, args.prime_max)
    jobs = [(sys_, p, args.construct, args.order) for p in primes]
    if args.parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            rows = list(pool.map(_scan_job, jobs))
    else:
        rows = [_scan_job(j) for j in jobs]
    lines = [f"scan {sys_.render()} over {args.prime_min}..{args.prime_max}"]
    for r in rows:
        mark = "constructible" if r["constructible"] else "fails " + ",".join(r["failing"])
        extra = f"  S={r['S']} l={r['l']}" if "S" in r else ""
        if "verify" in r:
            extra += f"  verify={r['verify']}"
        lines.append(f"  p={r['p']:<6} {mark}{extra}")
    _emit(args, {"system": sys_.to_json(), "rows": rows}, "\n".join(lines))
    return EXIT_FAIL if any(r.get("verify") == "fail" for r in rows) else EXIT_OK


def _scan_job(job) -> dict:
    return scan_prime(*job)


SELFTEST_CASES = (
    ("lucas", "1/2,1/2", "1", 5),
    ("relation", "1/2,1/2", "1", 7),
    ("relation", "1/3,1/2", "5/12,1", 37),
    ("relation", "1/9,4/9,5/9", "1/3,1", 19),
    ("relation", "1/9,4/9,5/9", "1/3,1", 17),
)


def cmd_selftest(args) -> int:
    results = []
    for kind, a, b, p in SELFTEST_CASES:
        ctx = PrimeContext(parse_params(a, b), p)
        if kind == "lucas":
            ok = lucas_check(ctx, 3000).passed
        else:
            ok = verify_relation(ctx, construct(ctx), 5000).passed
        results.append({"check": kind, "system": ctx.sys.render(), "p": p, "passed": ok})
    text = "\n".join(f"{'PASS' if r['passed'] else 'FAIL'}  {r['check']:<8} {r['system']} p={r['p']}" for r in results)
    _emit(args, {"results": results}, text)
    return EXIT_OK if all(r["passed"] for r in results) else EXIT_FAIL


COMMANDS = {
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "lucas": cmd_lucas,
    "scan": cmd_scan,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypmodp",
        description="Algebraic relations for hypergeometric series modulo a prime. "
        "A beta list with one entry fewer than alpha gets a trailing 1 appended.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--alpha", help='numerator parameters, e.g. "1/3,1/2"')
        sp.add_argument("--beta", help='denominator parameters, e.g. "5/12,1" or "5/12"')
        sp.add_argument("--prime", type=int)
        sp.add_argument("--order", type=int, help="truncation order N")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if name == "construct":
            sp.add_argument("--out", help="write the relation JSON here")
            sp.add_argument("--force", action="store_true", help="construct even if hypotheses fail")
        if name == "verify":
            sp.add_argument("--relation", help="relation JSON file from construct")
        if name == "scan":
            sp.add_argument("--prime-min", type=int)
            sp.add_argument("--prime-max", type=int)
            sp.add_argument("--construct", action="store_true", help="also construct and verify")
            sp.add_argument("--parallel", action="store_true", help="one process per prime")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (HypothesisViolation, NotPIntegral) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InputError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
