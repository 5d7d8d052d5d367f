"""Command-line harness: evaluate the special functions, certify asymptotic
regimes over degree grids, run Diophantine witness searches, and map error
decay across the scaling strip.

Subcommands and exit codes
--------------------------
eval      print one function value (ordinary + log-polar form)
verify    one report row per degree; exit 0 iff every eligible row satisfies
          observed_error <= bound, 1 on an eligible violation, 3 when no
          eligible row exists (including out-of-range tau advisories)
witness   CSV of witnesses (columns n,m,m1,beta,residual,rho); exit 3 if none
sweep     per-tau fitted vs predicted error-decay exponents

Exit code 2 flags usage errors (unknown function, undeclared rationality,
arguments outside mathematical domains).  Scaling parameters take exact
syntax: integers, fractions like -3/4, or the fixture names sqrt2, sqrt3,
golden, liouville (optionally negated).  Free decimals are accepted only
together with --assume-rational or --assume-irrational.  CSV columns are
fixed; JSON output mirrors them 1:1.  QPR_MAX_TERMS overrides the series
safety cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .asymptotics import (
    RegimeReport,
    classify_case,
    fit_decay_slope,
    predicted_decay,
    run_verify,
    scaling_range_advisory,
)
from .diophantine import (
    DiophantineWitness,
    RealValue,
    default_rho,
    joint_witness_search,
    parse_real,
    witness_search,
)
from .numerics import ConvergenceError, DomainError
from .qlaguerre import ScalingParameter, laguerre_direct, normalized_laguerre
from .qseries import (
    DEFAULT_MAX_TERMS,
    QContext,
    b_function,
    pochhammer,
    ramanujan_a,
    theta,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NO_ELIGIBLE = 3

VERIFY_COLUMNS = [
    "case_id", "n", "eligible", "bound_holds", "observed_error", "bound",
    "main_re", "main_im", "exact_re", "exact_im", "exact_log10_mag",
    "exact_phase_rad", "nu", "m", "m1", "beta", "residual", "beta2",
    "residual2", "rho", "notes",
]

WITNESS_COLUMNS = ["n", "m", "m1", "beta", "residual", "rho"]

SWEEP_COLUMNS = [
    "tau", "theta", "case_id", "points", "n_lo", "n_hi", "fitted_slope",
    "predicted_kind", "predicted_slope", "ratio", "first_observed_error",
    "first_bound",
]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(columns: list[str], rows: list[dict], fmt: str, output: str | None) -> None:
    if fmt == "json":
        text = json.dumps([{c: row.get(c) for c in columns} for row in rows], indent=2)
        text += "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in columns])
        text = buf.getvalue()
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_row(r: RegimeReport) -> dict:
    exact = r.exact_complex
    finite = math.isfinite(exact.real) and math.isfinite(exact.imag)
    w = r.witness
    notes = r.eligibility_notes if not r.meta else f"{r.eligibility_notes}; {r.meta}"
    return {
        "case_id": r.case_id,
        "n": r.n,
        "eligible": r.eligible,
        "bound_holds": r.bound_holds,
        "observed_error": r.observed_error,
        "bound": r.bound,
        "main_re": r.main.real,
        "main_im": r.main.imag,
        "exact_re": exact.real if finite else None,
        "exact_im": exact.imag if finite else None,
        "exact_log10_mag": r.exact.log10_mag(),
        "exact_phase_rad": r.exact.phase,
        "nu": r.nu,
        "m": r.m,
        "m1": r.m1,
        "beta": w.target_beta if w else None,
        "residual": w.residual if w else None,
        "beta2": w.target_beta2 if w else None,
        "residual2": w.residual2 if w else None,
        "rho": w.rho if w else None,
        "notes": notes,
    }


def _witness_row(w: DiophantineWitness) -> dict:
    residual = w.residual if w.residual2 is None else w.acceptance
    return {"n": w.n, "m": w.m, "m1": w.m1, "beta": w.target_beta,
            "residual": residual, "rho": w.rho}


def _beta_value(token: str):
    """Witness targets accept exact 'a/b' syntax or plain decimals."""
    s = str(token).strip()
    if "/" in s or ("." not in s and "e" not in s.lower()):
        try:
            f = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse beta {token!r}") from exc
        return f
    return float(s)


def _parse_n_range(text: str, step: int) -> list[int]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if hi < lo or step < 1:
        raise DomainError(f"bad degree range {text!r} with step {step}")
    return list(range(lo, hi + 1, step))


def _parse_scaling(args) -> tuple[RealValue, RealValue]:
    assume = None
    if getattr(args, "assume_rational", False):
        assume = "rational"
    elif getattr(args, "assume_irrational", False):
        assume = "irrational"
    tau = parse_real(args.tau, assume=assume)
    theta_v = parse_real(args.theta, assume=assume)
    return tau, theta_v


def _context(args) -> QContext:
    return QContext(q=args.q, alpha=args.alpha, z=complex(args.z),
                    tol=args.tol, max_terms=args.max_terms)


@dataclass
class RunConfig:
    """Parsed and revalidated settings for one verify invocation.

    Constructing it re-runs every QContext and ScalingParameter invariant
    (q in (0,1), alpha > -1, z != 0, declared rationality), so a bad flag
    combination fails at parse time rather than mid-run."""

    command: str
    ctx: QContext
    scaling: ScalingParameter
    case_id: int | None
    n_values: list[int] | None
    beta: float | Fraction
    beta2: float | Fraction
    rho: float | None
    n_max: int | None
    fmt: str
    output: str | None
    seed: int

    @staticmethod
    def from_args(command: str, args) -> "RunConfig":
        tau, theta_v = _parse_scaling(args)
        case = getattr(args, "case", None)
        return RunConfig(
            command=command,
            ctx=_context(args),
            scaling=ScalingParameter(tau, theta_v),
            case_id=None if case in (None, "auto") else int(case),
            n_values=_parse_n_range(args.n, args.n_step) if args.n else None,
            beta=args.beta,
            beta2=getattr(args, "beta2", 0.0),
            rho=args.rho,
            n_max=args.nmax,
            fmt=args.format,
            output=args.output,
            seed=args.seed,
        )


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _print_value(label: str, v: complex) -> None:
    if v.imag == 0.0:
        print(f"{label} = {v.real!r}")
    else:
        print(f"{label} = {v!r}")
    mag = abs(v)
    if mag > 0 and math.isfinite(mag):
        print(f"  log10|value| = {math.log10(mag)!r}   "
              f"phase = {math.degrees(math.atan2(v.imag, v.real))!r} deg")


def cmd_eval(args) -> int:
    fn = args.function
    mt = args.max_terms
    if fn == "pochhammer":
        n = None if args.n in (None, "inf") else int(args.n)
        v = pochhammer(complex(args.a), args.q, n, args.tol, mt)
        _print_value(f"pochhammer(a={args.a}, q={args.q}, n={args.n})", v)
    elif fn == "theta":
        v = theta(complex(args.z), args.q, args.tol, mt)
        _print_value(f"theta(z={args.z}, q={args.q})", v)
    elif fn == "ramanujan_a":
        v = ramanujan_a(args.q, complex(args.z), args.tol, mt)
        _print_value(f"ramanujan_a(q={args.q}, z={args.z})", v)
    elif fn == "b_function":
        v = b_function(args.q, complex(args.z), args.tol, mt)
        _print_value(f"b_function(q={args.q}, z={args.z})", v)
    elif fn == "laguerre":
        if args.n is None:
            raise DomainError("laguerre needs a degree: pass --n")
        ctx = _context(args)
        v = laguerre_direct(ctx, int(args.n), complex(args.x))
        _print_value(f"laguerre(n={args.n}, alpha={args.alpha}, x={args.x}, q={args.q})", v)
    elif fn == "normalized_laguerre":
        if args.n is None:
            raise DomainError("normalized_laguerre needs a degree: pass --n")
        ctx = _context(args)
        tau, theta_v = _parse_scaling(args)
        sp = ScalingParameter(tau, theta_v)
        v = normalized_laguerre(ctx, sp, int(args.n))
        _print_value(
            f"normalized_laguerre(n={args.n}, tau={args.tau}, theta={args.theta})", v)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = RunConfig.from_args("verify", args)
    advisory = scaling_range_advisory(cfg.scaling.tau.value)
    if advisory is not None:
        print(f"advisory: {advisory}", file=sys.stderr)
        _write_rows(VERIFY_COLUMNS, [], cfg.fmt, cfg.output)
        return EXIT_NO_ELIGIBLE
    reports = run_verify(cfg.ctx, cfg.scaling, case_id=cfg.case_id,
                         n_values=cfg.n_values, beta=cfg.beta, beta2=cfg.beta2,
                         rho=cfg.rho, n_max=cfg.n_max)
    _write_rows(VERIFY_COLUMNS, [_report_row(r) for r in reports],
                cfg.fmt, cfg.output)
    eligible = [r for r in reports if r.eligible]
    if not eligible:
        print("no eligible degree in this run", file=sys.stderr)
        return EXIT_NO_ELIGIBLE
    bad = [r for r in eligible if not r.bound_holds]
    if bad:
        worst = max(bad, key=lambda r: r.observed_error / r.bound if r.bound else math.inf)
        print(f"BOUND VIOLATION at n={worst.n}: observed {worst.observed_error!r} "
              f"> bound {worst.bound!r}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_witness(args) -> int:
    assume = "rational" if args.assume_rational else (
        "irrational" if args.assume_irrational else None)
    th1 = parse_real(args.theta, assume=assume)
    if args.theta2 is not None:
        th2 = parse_real(args.theta2, assume=assume)
        rho = args.rho if args.rho is not None else default_rho(th1, args.beta, joint=True)
        wits = joint_witness_search(th1, th2, args.beta, args.beta2, rho, args.nmax)
    else:
        rho = args.rho if args.rho is not None else default_rho(th1, args.beta)
        wits = witness_search(th1, args.beta, rho, args.nmax)
    _write_rows(WITNESS_COLUMNS, [_witness_row(w) for w in wits],
                args.format, args.output)
    return EXIT_OK if wits else EXIT_NO_ELIGIBLE


def cmd_sweep(args) -> int:
    assume = None
    if args.assume_rational:
        assume = "rational"
    elif args.assume_irrational:
        assume = "irrational"
    theta_v = parse_real(args.theta, assume=assume)
    rows = []
    for tok in args.tau_grid.split(","):
        tau = parse_real(tok.strip(), assume=assume)
        ctx = _context(args)
        sp = ScalingParameter(tau, theta_v)
        advisory = scaling_range_advisory(tau.value)
        if advisory is not None:
            rows.append({"tau": tau.value, "theta": theta_v.value, "case_id": None,
                         "points": 0, "n_lo": None, "n_hi": None,
                         "fitted_slope": None, "predicted_kind": "out-of-range",
                         "predicted_slope": None, "ratio": None,
                         "first_observed_error": None, "first_bound": None})
            continue
        case_id = classify_case(sp)
        # dense cases need a grid (default 5..40); witness-driven cases scan
        # all witnesses up to --nmax unless a grid is given explicitly
        n_spec = args.n if args.n is not None else (
            "5..40" if case_id in (1, 2, 4) else None)
        n_values = _parse_n_range(n_spec, args.n_step) if n_spec else None
        # resolve the witness exponent once so the fit and the prediction
        # describe the same search
        rho_eff = args.rho
        if rho_eff is None:
            if case_id in (3, 5):
                rho_eff = default_rho(sp.theta, float(args.beta))
            elif case_id == 6:
                rho_eff = default_rho(sp.tau.neg(), float(args.beta))
            elif case_id == 7:
                rho_eff = 0.4
        reports = run_verify(ctx, sp, case_id=case_id, n_values=n_values,
                             beta=args.beta, rho=rho_eff, n_max=args.nmax)
        kind, predicted = predicted_decay(case_id, ctx, sp, rho_eff)
        ns = [r.n for r in reports]
        errs = [r.observed_error for r in reports]
        fitted = None
        usable = sum(1 for e in errs if e > 0 and math.isfinite(e))
        if usable >= 2:
            fitted = fit_decay_slope(ns, errs, log_abscissa=(kind == "pow_n"))
        ratio = (fitted / predicted) if (fitted is not None and predicted != 0) else None
        rows.append({
            "tau": tau.value, "theta": theta_v.value, "case_id": case_id,
            "points": len(reports),
            "n_lo": ns[0] if ns else None, "n_hi": ns[-1] if ns else None,
            "fitted_slope": fitted, "predicted_kind": kind,
            "predicted_slope": predicted, "ratio": ratio,
            "first_observed_error": errs[0] if errs else None,
            "first_bound": reports[0].bound if reports else None,
        })
    _write_rows(SWEEP_COLUMNS, rows, args.format, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_context_args(p: argparse.ArgumentParser, max_terms_default: int) -> None:
    p.add_argument("--q", type=float, required=True, help="base q in (0,1)")
    p.add_argument("--alpha", type=float, default=0.0, help="exponent alpha > -1")
    p.add_argument("--z", type=str, default="1",
                   help="nonzero complex z ('2', '0.7+0.2j')")
    p.add_argument("--tol", type=float, default=1e-15,
                   help="relative truncation tolerance")
    p.add_argument("--max-terms", type=int, default=max_terms_default,
                   help="safety cap on series terms (env QPR_MAX_TERMS)")


def _add_scaling_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=str, default="0",
                   help="tau: integer, fraction, or fixture name; negatives need "
                        "the --tau=-3/4 form")
    p.add_argument("--theta", type=str, default="0",
                   help="theta: integer, fraction, or fixture name")
    p.add_argument("--assume-rational", action="store_true",
                   help="treat free-decimal tau/theta as exact rationals")
    p.add_argument("--assume-irrational", action="store_true",
                   help="treat free-decimal tau/theta as irrational")


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", type=str, default=None, help="write to file instead of stdout")
    p.add_argument("--seed", type=int, default=0,
                   help="recorded for reproducibility of sampled runs")


def build_parser() -> argparse.ArgumentParser:
    max_terms_default = int(os.environ.get("QPR_MAX_TERMS", DEFAULT_MAX_TERMS))
    top = argparse.ArgumentParser(
        prog="qpr",
        description="q-series special functions and asymptotic-regime certification",
    )
    sub = top.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate one special function")
    pe.add_argument("function", choices=(
        "pochhammer", "theta", "ramanujan_a", "b_function", "laguerre",
        "normalized_laguerre"))
    _add_context_args(pe, max_terms_default)
    _add_scaling_args(pe)
    pe.add_argument("--a", type=str, default="0", help="Pochhammer argument a")
    pe.add_argument("--x", type=str, default="1", help="polynomial argument x")
    pe.add_argument("--n", type=str, default=None,
                    help="order/degree n (integer, or 'inf' for products)")
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser(
        "verify", help="certify a regime over a degree grid",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="CSV columns (JSON mirrors them 1:1):\n  "
               + ", ".join(VERIFY_COLUMNS))
    _add_context_args(pv, max_terms_default)
    _add_scaling_args(pv)
    pv.add_argument("--case", type=str, default="auto",
                    help="regime 1..7, or auto to dispatch from declarations")
    pv.add_argument("--n", type=str, default=None, help="degree grid 'lo..hi'")
    pv.add_argument("--n-step", type=int, default=1, help="stride through the grid")
    pv.add_argument("--beta", type=_beta_value, default=Fraction(0),
                    help="witness target in [0,1); accepts a/b or decimal")
    pv.add_argument("--beta2", type=_beta_value, default=Fraction(0),
                    help="second witness target (case 7)")
    pv.add_argument("--rho", type=float, default=None, help="witness exponent")
    pv.add_argument("--nmax", type=int, default=None, help="witness search limit")
    _add_output_args(pv)
    pv.set_defaults(func=cmd_verify)

    pw = sub.add_parser(
        "witness", help="Diophantine witness search",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="CSV columns (JSON mirrors them 1:1):\n  "
               + ", ".join(WITNESS_COLUMNS)
               + "\nJoint searches fill m1 and report the larger |residual|.")
    pw.add_argument("--theta", type=str, required=True)
    pw.add_argument("--theta2", type=str, default=None,
                    help="second angle for a joint search")
    pw.add_argument("--beta", type=_beta_value, default=Fraction(0))
    pw.add_argument("--beta2", type=_beta_value, default=Fraction(0))
    pw.add_argument("--rho", type=float, default=None)
    pw.add_argument("--nmax", type=int, default=10_000)
    pw.add_argument("--assume-rational", action="store_true")
    pw.add_argument("--assume-irrational", action="store_true")
    _add_output_args(pw)
    pw.set_defaults(func=cmd_witness)

    ps = sub.add_parser(
        "sweep", help="map error decay across tau values",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="CSV columns (JSON mirrors them 1:1):\n  "
               + ", ".join(SWEEP_COLUMNS))
    _add_context_args(ps, max_terms_default)
    ps.add_argument("--tau-grid", type=str, required=True,
                    help="comma-separated tau tokens, e.g. '0.25,0.5,1' with --assume-rational")
    ps.add_argument("--theta", type=str, default="0")
    ps.add_argument("--assume-rational", action="store_true")
    ps.add_argument("--assume-irrational", action="store_true")
    ps.add_argument("--n", type=str, default=None,
                    help="degree grid; defaults to 5..40 for dense regimes")
    ps.add_argument("--n-step", type=int, default=1)
    ps.add_argument("--beta", type=_beta_value, default=Fraction(0))
    ps.add_argument("--rho", type=float, default=None)
    ps.add_argument("--nmax", type=int, default=None)
    _add_output_args(ps)
    ps.set_defaults(func=cmd_sweep)
    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, OverflowError) as exc:
        # range guards and uncertified truncations are runtime failures
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
