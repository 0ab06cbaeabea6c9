"""Command-line front end: verification suite, Ricci/Einstein queries, flow
integration and entropy export.

Exit codes: 0 all checks pass / command succeeded, 1 verification failure,
2 invalid input or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .canonical import (MetricParams, OutOfDomain, einstein_solve_canonical,
                        ricci_canonical)
from .flow import (CANONICAL, Z, FlowState, classify, entropy_series, entropy_to_csv,
                   entropy_to_json, integrate, trajectory_to_csv, trajectory_to_json)
from .liealg import hpn_curvature, sectional
from .verify import run_checks
from .zmetric import einstein_solve_z, ricci_z


def _parse_rational(text: str):
    """Exact p/q strings stay exact; decimals fall back to float with a warning."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den)), True
    try:
        return Fraction(int(text)), True
    except ValueError:
        sys.stderr.write(f"warning: decimal input {text!r}; symbolic checks run numerically\n")
        return float(text), False


def _fmt_value(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    return format(float(x), ".17g")


def _emit(payload, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, default=_fmt_value, sort_keys=True))
    elif fmt == "csv":
        keys = list(payload)
        print(",".join(keys))
        print(",".join(_fmt_value(payload[k]) for k in keys))
    else:
        width = max(len(k) for k in payload)
        for k, v in payload.items():
            print(f"{k.ljust(width)}  {_fmt_value(v) if not isinstance(v, str) else v}")


def cmd_verify(args) -> int:
    if not (2 <= args.n <= 4):
        sys.stderr.write("verify supports n in 2..4 (the paper assumes n > 1)\n")
        return 2
    tamper = tuple(int(x) for x in args.tamper.split(",")) if args.tamper else None
    report = run_checks(args.n, tamper=tamper)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        for rec in report:
            print(f"[{rec['status']:4s}] {rec['check']}: {rec['detail']}")
    failed = [r for r in report if r["status"] == "fail"]
    return 1 if failed else 0


def cmd_ricci(args) -> int:
    mu, exact = _parse_rational(args.lambda2)
    mu_frac = mu if exact else Fraction(mu).limit_denominator(10 ** 12)
    try:
        p = MetricParams(args.n, lambda2=mu_frac)
    except ValueError as ex:
        sys.stderr.write(f"{ex}\n")
        return 2
    rd = ricci_canonical(p) if args.family == CANONICAL else ricci_z(p)
    fiber, base = rd.fiber_at(mu_frac), rd.base_at(mu_frac)
    if not exact:
        fiber, base = float(fiber), float(base)
    payload = {
        "family": args.family, "n": args.n, "lambda2": mu if not exact else mu_frac,
        "fiber": fiber, "base": base,
        "einstein": fiber == base,
        "off_diagonal_zero": rd.off_diagonal_zero,
    }
    _emit(payload, args.format)
    return 0


def cmd_einstein(args) -> int:
    if args.family == CANONICAL:
        roots = sorted(einstein_solve_canonical(args.n))
        payload = {"family": args.family, "n": args.n,
                   "lambda2_roots": "{" + ", ".join(_fmt_value(r) for r in roots) + "}"}
    else:
        payload = {"family": args.family, "n": args.n,
                   "lambda2_roots": "{" + _fmt_value(einstein_solve_z(args.n)) + "}"}
    _emit(payload, args.format)
    return 0


def cmd_curvature(args) -> int:
    T = hpn_curvature(args.n, route="both")
    payload = {"n": args.n, "scalar": T.scalar()}
    if args.sectional:
        m = 4 * args.n
        secs = sorted({sectional(T, A, B) for A in range(1, m + 1)
                       for B in range(1, m + 1) if A != B})
        payload["sectional_min"] = secs[0]
        payload["sectional_max"] = secs[-1]
    ric = T.ricci_matrix()
    payload["ricci_diagonal"] = ric[0][0]
    _emit(payload, args.format)
    return 0


def _initial_state(args) -> FlowState:
    mu, _ = _parse_rational(args.lambda2)
    rho0, _ = _parse_rational(args.rho0)
    return FlowState(0.0, float(rho0), float(mu), args.family, args.n)


def cmd_flow(args) -> int:
    try:
        init = _initial_state(args)
    except ValueError as ex:
        sys.stderr.write(f"{ex}\n")
        return 2
    if args.t_end == "auto":
        if args.family != Z:
            sys.stderr.write("--t-end auto needs the z family (classified singular time)\n")
            return 2
        t_end = 0.99 * classify(init)["time"]
    else:
        t_end = float(args.t_end)
    traj = integrate(init, args.dt, t_end)
    text = trajectory_to_csv(traj) if args.format == "csv" else trajectory_to_json(traj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    summary = {"samples": len(traj.samples),
               "max_invariant_drift": traj.max_invariant_drift()}
    if args.family == Z:
        cls = classify(init)
        if cls["mu_limit"] == float("inf"):
            cls["mu_limit"] = "inf"
        summary.update(cls)
        summary["mode_detail"] = {
            "extinction": "base-shrinks-faster", "collapse": "fiber-collapse",
            "einstein-ray": "homothety"}[summary["mode"]]
    else:
        mus = [s.mu for s in traj.samples]
        summary["mu_start"], summary["mu_end"] = mus[0], mus[-1]
        summary["mu_monotone"] = ("decreasing" if all(a >= b for a, b in zip(mus, mus[1:]))
                                  else "increasing" if all(a <= b for a, b in zip(mus, mus[1:]))
                                  else "non-monotone")
    sys.stderr.write(json.dumps(summary, default=_fmt_value) + "\n")
    return 0


def cmd_entropy(args) -> int:
    try:
        init = _initial_state(args)
        records = entropy_series(init, args.samples)
    except ValueError as ex:
        sys.stderr.write(f"{ex}\n")
        return 2
    text = (entropy_to_csv(init, records) if args.format == "csv"
            else entropy_to_json(init, records))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    ws = [r.w for r in records]
    summary = {"samples": len(records),
               "w_nondecreasing": all(a <= b + 1e-12 for a, b in zip(ws, ws[1:]))}
    sys.stderr.write(json.dumps(summary) + "\n")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tflow",
                                     description="twistor-space metric families: "
                                                 "verification and flow laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run the verification suite")
    pv.add_argument("--n", type=int, default=2)
    pv.add_argument("--format", choices=["json", "table"], default="table")
    pv.add_argument("--tamper", default=None,
                    help="test hook: 'i,j,k' perturbs one structure constant")
    pv.set_defaults(fn=cmd_verify)

    pr = sub.add_parser("ricci", help="Ricci coefficients of a family member")
    pr.add_argument("--family", choices=[CANONICAL, Z], required=True)
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--lambda2", required=True, help="exact p/q preferred")
    pr.add_argument("--format", choices=["json", "csv", "table"], default="table")
    pr.set_defaults(fn=cmd_ricci)

    pe = sub.add_parser("einstein", help="Einstein values of lambda^2")
    pe.add_argument("--family", choices=[CANONICAL, Z], required=True)
    pe.add_argument("--n", type=int, required=True)
    pe.add_argument("--format", choices=["json", "csv", "table"], default="table")
    pe.set_defaults(fn=cmd_einstein)

    pc = sub.add_parser("curvature", help="quaternion projective space curvature data")
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--sectional", action="store_true")
    pc.add_argument("--format", choices=["json", "csv", "table"], default="table")
    pc.set_defaults(fn=cmd_curvature)

    pf = sub.add_parser("flow", help="integrate the reduced Ricci flow")
    pf.add_argument("--family", choices=[CANONICAL, Z], required=True)
    pf.add_argument("--n", type=int, required=True)
    pf.add_argument("--rho0", default="1")
    pf.add_argument("--lambda2", required=True)
    pf.add_argument("--dt", type=float, default=1e-4)
    pf.add_argument("--t-end", dest="t_end", default="auto")
    pf.add_argument("--out", default=None)
    pf.add_argument("--format", choices=["csv", "json"], default="csv")
    pf.set_defaults(fn=cmd_flow)

    pn = sub.add_parser("entropy", help="entropy diagnostics along a Z-trajectory")
    pn.add_argument("--n", type=int, required=True)
    pn.add_argument("--rho0", default="1")
    pn.add_argument("--lambda2", required=True)
    pn.add_argument("--samples", type=int, default=200)
    pn.add_argument("--out", default=None)
    pn.add_argument("--format", choices=["csv", "json"], default="csv")
    pn.set_defaults(fn=cmd_entropy)
    pn.set_defaults(family=Z)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OutOfDomain as ex:
        sys.stderr.write(f"domain error: {ex}\n")
        return 2
    except ValueError as ex:
        sys.stderr.write(f"invalid input: {ex}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
