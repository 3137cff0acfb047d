"""
Command line front end.

    hardyconj [global flags] <command> [args]

Commands: ``check-conjugation``, ``check-inner``, ``divides``, ``project``,
``kernel``, ``case <id>...``, ``all`` and ``list``.  Exit status is 0 when every
reported verdict is ``pass``, 1 when any is ``fail`` or ``error`` and 2 on
usage, parse or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable, TextIO

import numpy as np

from ..antilinear import ConjugationError, Kind, PointConjugation, check_Mz_relation, make_structured, verify_axioms
from ..innerfun import NotInnerError, certify_inner, divides, quotient
from ..modelspace import (
    KTheta_residual,
    ModelContext,
    PreconditionError,
    kernel,
    project_KTheta,
    reproducing_residual,
)
from .registry import DATA, DEFAULT_SEED, REGISTRY, CaseResult, RunOptions, merge_overrides, run_case
from .symfile import SymbolFileError, parse_symbol_file

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# reports


def _fmt(x: float) -> str:
    return f"{x:.3e}"


def emit_report(results: Iterable[CaseResult], fmt: str, stream: TextIO) -> None:
    """Write results as ``CASE`` lines plus a summary, or as sorted JSON."""
    results = list(results)
    counts = {v: sum(r.verdict == v for r in results) for v in ("pass", "fail", "error")}
    if fmt == "structured":
        doc = {"results": [r.to_dict() for r in results], "summary": {"total": len(results), **counts}}
        stream.write(json.dumps(doc, sort_keys=True) + "\n")
        return
    if not results:
        return
    for r in results:
        name, value = r.worst()
        line = f"CASE {r.case_id} {r.verdict.upper()} residual={_fmt(value)}"
        if name is not None:
            line += f" worst={name}"
        if r.verdict != "pass":
            line += f" ({r.message})"
        stream.write(line + "\n")
    stream.write(f"SUMMARY total={len(results)} pass={counts['pass']} fail={counts['fail']} error={counts['error']}\n")


def exit_status(results: Iterable[CaseResult]) -> int:
    return EXIT_PASS if all(r.verdict == "pass" for r in results) else EXIT_FAIL


# --------------------------------------------------------------------------
# single-object commands


def _verdict(case_id, residuals, tolerances, checks=None, artifacts=None) -> CaseResult:
    checks = checks or {}
    bad = [k for k, v in residuals.items() if not v <= tolerances[k]] + [k for k, v in checks.items() if not v]
    return CaseResult(
        case_id,
        "fail" if bad else "pass",
        residuals,
        tolerances,
        checks,
        artifacts or {},
        "failed: " + ",".join(bad) if bad else "",
    )


def _point(path: str | None, d: int) -> PointConjugation:
    return PointConjugation.standard(d) if path is None else parse_symbol_file(path).to_point()


def cmd_check_conjugation(args, opts: RunOptions) -> list[CaseResult]:
    U = parse_symbol_file(args.symbol).to_symbol()
    J = _point(args.J, U.dim)
    kind = Kind(args.kind)
    cid = f"check-conjugation:{args.symbol}"
    try:
        C = make_structured(U, J, kind, opts.tol)
    except ConjugationError as exc:
        res = {"structure": exc.residual if np.isfinite(exc.residual) else np.inf}
        return [CaseResult(cid, "fail", res, {"structure": opts.tol}, {}, {}, str(exc))]
    ax = verify_axioms(C, opts.trials, opts.seed, opts.tol)
    rel = check_Mz_relation(C, "commute" if kind is Kind.STAR else "intertwine", opts.tol)
    res = {**ax.residuals, "relation": rel.residual}
    return [_verdict(cid, res, {k: opts.tol for k in res})]


def cmd_check_inner(args, opts: RunOptions) -> list[CaseResult]:
    F = parse_symbol_file(args.symbol).to_symbol()
    J = None if args.J is None else _point(args.J, F.dim)
    cert = certify_inner(F, max(opts.tol, 1e-12), J)
    checks = {"analytic": cert.analytic, "unitary_valued": cert.unitary_valued}
    if J is not None:
        checks["j_symmetric"] = cert.j_symmetric_for is not None
    if args.require_pure:
        checks["pure"] = cert.pure
    res = {k: v for k, v in cert.residuals.items() if k != "norm_at_zero"}
    arts = {"pure": cert.pure, "norm_at_zero": cert.residuals["norm_at_zero"]}
    return [_verdict(f"check-inner:{args.symbol}", res, {k: max(opts.tol, 1e-12) for k in res}, checks, arts)]


def cmd_divides(args, opts: RunOptions) -> list[CaseResult]:
    lam = parse_symbol_file(args.lam).to_symbol()
    theta = parse_symbol_file(args.theta).to_symbol()
    cid = f"divides:{args.lam}:{args.theta}"
    ok = divides(lam, theta)
    if not ok:
        return [_verdict(cid, {}, {}, {"divides": False})]
    psi = quotient(lam, theta)
    res = {"reconstruction": (lam @ psi).distance(theta)}
    return [_verdict(cid, res, {"reconstruction": opts.tol}, {"divides": True}, {"Psi": psi})]


def cmd_project(args, opts: RunOptions) -> list[CaseResult]:
    ctx = ModelContext(parse_symbol_file(args.theta).to_symbol())
    f = parse_symbol_file(args.field).to_field()
    g = project_KTheta(ctx, f)
    res = {"idempotence": (project_KTheta(ctx, g) - g).norm(), "membership": KTheta_residual(ctx, g)}
    arts = {"projection": g, "distance": (f - g).norm()}
    return [_verdict(f"project:{args.field}", res, {k: opts.tol for k in res}, None, arts)]


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot read {text!r} as a complex number") from exc


def cmd_kernel(args, opts: RunOptions) -> list[CaseResult]:
    theta = parse_symbol_file(args.theta).to_symbol()
    ctx = ModelContext(theta)
    lam = _complex(args.lam)
    x = np.array([_complex(t) for t in args.x.split(",")])
    if x.shape != (ctx.dim,):
        raise UsageError(f"--x needs {ctx.dim} comma-separated entries")
    kf = kernel(ctx, args.which, lam, x, degree=args.degree)
    res = {"membership": KTheta_residual(ctx, kf.base)}
    tols = {"membership": opts.tol}
    if args.which == "k":
        res["reproducing"] = reproducing_residual(ctx, kf, x)
        tols["reproducing"] = opts.tol + kf.error_bound
    arts = {"kernel": kf.base, "truncation_degree": kf.truncation_degree, "error_bound": kf.error_bound}
    return [_verdict(f"kernel:{args.which}:{args.theta}", res, tols, None, arts)]


def cmd_case(args, opts: RunOptions, data) -> list[CaseResult]:
    unknown = [c for c in args.ids if c not in REGISTRY]
    if unknown:
        raise UsageError(f"unknown case id(s): {', '.join(unknown)} (see the list command)")
    return [run_case(c, opts, data) for c in args.ids]


def cmd_all(args, opts: RunOptions, data) -> list[CaseResult]:
    return [run_case(c, opts, data) for c in REGISTRY]


# --------------------------------------------------------------------------
# argument parsing


def _band(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("band must be two integers 'lo,hi'") from exc
    if hi < lo:
        raise argparse.ArgumentTypeError("band must satisfy lo <= hi")
    return lo, hi


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)  # noqa: E731
    p.add_argument("--tol", type=_positive_float, default=d(1e-10), help="residual tolerance (default 1e-10)")
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="base random seed")
    p.add_argument("--trials", type=_positive_int, default=d(100), help="random trials for axiom checks (default 100)")
    p.add_argument("--band", type=_band, default=d((-16, 16)), help="index band, written --band=lo,hi (default -16,16)")
    p.add_argument("--format", choices=("text", "structured"), default=d("text"), help="report format")
    p.add_argument("--output", default=d(None), help="write the report to this path instead of stdout")
    p.add_argument("--data", default=d(None), help="JSON file of overrides merged into the registry data")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardyconj", description="Verify conjugations on vector-valued L^2 and H^2.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        return p

    p = add("check-conjugation", "validate M_U J* or M_U J~ from a symbol file")
    p.add_argument("symbol", help="symbol file holding U")
    p.add_argument("--kind", choices=[k.value for k in Kind], default="star")
    p.add_argument("--J", help="conjugation-K file (default: entrywise conjugation)")

    p = add("check-inner", "certify that a symbol is inner")
    p.add_argument("symbol")
    p.add_argument("--J", help="also test J-symmetry for this conjugation-K file")
    p.add_argument("--require-pure", action="store_true", help="fail unless ||Theta(0)|| < 1")

    p = add("divides", "decide Lambda <= Theta and print the quotient")
    p.add_argument("lam", metavar="LAMBDA")
    p.add_argument("theta", metavar="THETA")

    p = add("project", "project a field onto K_Theta")
    p.add_argument("theta", metavar="THETA")
    p.add_argument("field", metavar="FIELD")

    p = add("kernel", "reproducing kernel of K_Theta at lambda")
    p.add_argument("theta", metavar="THETA")
    p.add_argument("--lam", required=True, help="point of the disk, e.g. 0.3+0.2j")
    p.add_argument("--x", required=True, help="comma-separated vector, e.g. 1,0")
    p.add_argument("--which", choices=("k", "ktilde"), default="k")
    p.add_argument("--degree", type=int, default=None, help="truncation degree (default: chosen for 1e-10 accuracy)")

    p = add("case", "run registered cases by id")
    p.add_argument("ids", nargs="+", metavar="ID")

    add("all", "run the whole registry")
    add("list", "list registered cases")
    return parser


def _options(args) -> RunOptions:
    return RunOptions(tol=args.tol, seed=args.seed, trials=args.trials, band=tuple(args.band))


def _load_data(path: str | None):
    if path is None:
        return DATA
    try:
        with open(path, encoding="utf-8") as fh:
            overrides = json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(overrides, dict):
        raise UsageError(f"{path}: overrides must be a JSON object")
    return merge_overrides(DATA, overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        opts = _options(args)
        if args.command == "list":
            for case in REGISTRY.values():
                print(f"{case.case_id}\t{case.summary}")
            return EXIT_PASS
        data = _load_data(args.data)
        handlers = {
            "check-conjugation": cmd_check_conjugation,
            "check-inner": cmd_check_inner,
            "divides": cmd_divides,
            "project": cmd_project,
            "kernel": cmd_kernel,
        }
        if args.command in handlers:
            results = handlers[args.command](args, opts)
        elif args.command == "case":
            results = cmd_case(args, opts, data)
        else:
            results = cmd_all(args, opts, data)
    except (UsageError, SymbolFileError, ConjugationError, NotInnerError, PreconditionError, ValueError) as exc:
        print(f"hardyconj: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.output is None:
            emit_report(results, args.format, sys.stdout)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                emit_report(results, args.format, fh)
    except OSError as exc:
        print(f"hardyconj: error: {args.output}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    return exit_status(results)


if __name__ == "__main__":
    sys.exit(main())
