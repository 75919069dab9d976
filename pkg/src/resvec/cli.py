"""Command-line driver: ``resvec analyze|fit|conjecture|oracle``.

Exit codes: 0 success, 1 class or bound failure (or oracle deviation above
threshold), 2 input error, 3 counterexample found by ``conjecture``.
"""
from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import report
from .arts import (
    FitError,
    ar_residuals,
    arch_fit,
    fit_ols,
    fit_yule_walker,
    load_csv,
    model_mean,
    select_order,
    stationarity_verdict,
    transform,
)
from .cpoly import RootFindingError
from .norms import DEFAULT_PS, conjecture_scan, parse_p, verify_bounds
from .residua import (
    NonSimplePoleError,
    OperatorError,
    QuadratureConfig,
    QuadratureError,
    RationalOperator,
    check_class,
    operator_poles,
    residues_analytic,
    residues_quadrature,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_VIOLATION = 3

ORACLE_THRESHOLD = 1e-8


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _split(text: str, comma_locale: bool) -> list[str]:
    sep = ";" if comma_locale else ","
    return [t.strip() for t in text.split(sep)]


def parse_alpha(text: str, comma_locale: bool = False) -> list[float]:
    values = []
    for token in _split(text, comma_locale):
        raw = token.replace(",", ".") if comma_locale else token
        try:
            if not raw:
                raise ValueError
            values.append(float(raw))
        except ValueError:
            raise InputError(f"invalid coefficient {token!r}") from None
    return values


def parse_ps(text: str) -> tuple:
    try:
        ps = tuple(parse_p(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if not ps:
        raise InputError("empty --p list")
    return ps


def _emit(doc: dict, text: str, as_json: bool, out) -> None:
    out.write(report.dumps(doc) if as_json else text)


# -- analyze -----------------------------------------------------------------


def analysis_document(alpha, ps=DEFAULT_PS, oracle: bool = False, qcfg: QuadratureConfig | None = None) -> tuple[dict, int]:
    op = RationalOperator(tuple(alpha))
    poles = operator_poles(op)
    cls = check_class(op, poles)
    doc = report.header("analyze")
    doc["input"] = {"alpha": list(op.alpha), "p": [report.encode_p(p) for p in ps], "oracle": oracle}
    doc["class"] = report.class_doc(cls)
    doc["poles"] = report.poles_doc(op, poles)
    doc["residues"] = []
    doc["bounds"] = None
    if cls.condition_II.simplicity.simple:
        rv = residues_analytic(op, poles)
        doc["residues"].append(report.residues_doc(rv))
        if oracle:
            rq = residues_quadrature(op, poles, qcfg)
            block = report.residues_doc(rq)
            block["max_deviation"] = float(np.max(np.abs(rq.values - rv.values)))
            doc["residues"].append(block)
        bounds = verify_bounds(rv, cls, ps)
        doc["bounds"] = report.bounds_doc(bounds)
        ok = cls.in_class and bounds.all_hold
    else:
        ok = False
    code = EXIT_OK if ok else EXIT_FAIL
    doc["exit_code"] = code
    return doc, code


def cmd_analyze(args, out) -> int:
    alpha = parse_alpha(args.alpha, args.locale_comma)
    ps = parse_ps(args.p)
    qcfg = QuadratureConfig(args.points, args.radius_factor)
    doc, code = analysis_document(alpha, ps, args.oracle, qcfg)
    _emit(doc, report.render_analysis(doc), args.json, out)
    return code


# -- fit ---------------------------------------------------------------------


def fit_document(args) -> tuple[dict, int]:
    column = int(args.column) if args.column.lstrip("-").isdigit() else args.column
    ts = load_csv(args.csv, column, decimal="," if args.locale_comma else ".")
    if args.log:
        ts = transform(ts, "log")
    if args.diff:
        ts = transform(ts, "diff", args.diff)
    ps = parse_ps(args.p)

    selected = None
    if args.auto_order is not None:
        selected = select_order(ts, args.auto_order, args.criterion)
        order = selected
    else:
        order = args.order
    fitter = fit_ols if args.method == "ols" else fit_yule_walker
    fit = fitter(ts, order)

    doc = report.header("fit")
    doc["input"] = {
        "csv": str(args.csv),
        "column": column,
        "transforms": list(ts.transforms),
        "order": args.order,
        "auto_order": args.auto_order,
        "criterion": args.criterion,
        "selected_order": selected,
        "method": args.method,
        "arch": args.arch,
        "p": [report.encode_p(p) for p in ps],
    }
    try:
        mean = model_mean(fit)
    except FitError:
        mean = None
    doc["fit"] = report.fit_doc(fit, mean)

    ok = False
    doc["diagnostic"] = None
    if fit.order >= 1:
        diag = stationarity_verdict(fit, ps)
        doc["diagnostic"] = report.diagnostic_doc(diag)
        ok = diag.in_class and diag.bounds is not None and diag.bounds.all_hold

    doc["arch"] = None
    if args.arch:
        afit = arch_fit(ar_residuals(ts, fit), args.arch)
        try:
            amean = model_mean(afit)
        except FitError:
            amean = None
        arch = {"fit": report.fit_doc(afit, amean), "diagnostic": None}
        if afit.phi[-1] != 0.0:
            arch["diagnostic"] = report.diagnostic_doc(stationarity_verdict(afit, ps))
        doc["arch"] = arch

    code = EXIT_OK if ok else EXIT_FAIL
    doc["exit_code"] = code
    return doc, code


def cmd_fit(args, out) -> int:
    if (args.order is None) == (args.auto_order is None):
        raise InputError("give exactly one of --order and --auto-order")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            doc, code = fit_document(args)
    except (OSError, KeyError) as exc:
        raise InputError(str(exc)) from None
    except (FitError, ValueError, np.linalg.LinAlgError) as exc:
        raise InputError(str(exc)) from None
    _emit(doc, report.render_fit(doc), args.json, out)
    return code


# -- conjecture --------------------------------------------------------------


def cmd_conjecture(args, out) -> int:
    if args.nmax < 1:
        raise InputError("--nmax must be >= 1")
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    ps = parse_ps(args.p)
    scan = conjecture_scan(args.nmax, args.trials, ps, args.seed)
    doc = report.header("conjecture")
    doc.update(report.scan_doc(scan))
    code = EXIT_OK if scan.ok else EXIT_VIOLATION
    doc["exit_code"] = code
    _emit(doc, report.render_scan(doc), args.json, out)
    return code


# -- oracle ------------------------------------------------------------------


def oracle_document(alpha, points: int = 256, radius_factor: float = 0.25) -> tuple[dict, int]:
    op = RationalOperator(tuple(alpha))
    poles = operator_poles(op)
    cls = check_class(op, poles)
    if not cls.condition_II.simplicity.simple:
        raise QuadratureError("poles are not simple: " + cls.condition_II.simplicity.reason)
    rq = residues_quadrature(op, poles, QuadratureConfig(points, radius_factor))
    rv = residues_analytic(op, poles)
    dev = np.abs(rq.values - rv.values)
    doc = report.header("oracle")
    doc.update(
        {
            "alpha": list(op.alpha),
            "points": points,
            "radius_factor": radius_factor,
            "threshold": ORACLE_THRESHOLD,
            "rows": [
                {
                    "pole": report.encode_complex(z),
                    "analytic": report.encode_complex(a),
                    "quadrature": report.encode_complex(q),
                    "deviation": float(d),
                }
                for z, a, q, d in zip(poles.roots, rv.values, rq.values, dev)
            ],
            "max_deviation": float(dev.max()),
        }
    )
    code = EXIT_OK if dev.max() < ORACLE_THRESHOLD else EXIT_FAIL
    doc["exit_code"] = code
    return doc, code


def cmd_oracle(args, out) -> int:
    alpha = parse_alpha(args.alpha, args.locale_comma)
    doc, code = oracle_document(alpha, args.points, args.radius_factor)
    _emit(doc, report.render_oracle(doc), args.json, out)
    return code


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="resvec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p):
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.add_argument("--text", dest="json", action="store_false", help="emit text (default)")
        p.add_argument("--locale-comma", action="store_true",
                       help="comma decimal separator; lists are then separated by ';'")

    p = sub.add_parser("analyze", help="class checks, residues and bounds for given coefficients")
    p.add_argument("--alpha", required=True, help="coefficients a1,...,an")
    p.add_argument("--p", default="1,2,inf", help="norm orders, e.g. 1,2,inf")
    p.add_argument("--oracle", action="store_true", help="add quadrature residues")
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--radius-factor", type=float, default=0.25)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fit", help="fit an AR model to a CSV column and diagnose it")
    p.add_argument("--csv", required=True)
    p.add_argument("--column", default="0", help="column index or header name")
    p.add_argument("--log", action="store_true")
    p.add_argument("--diff", type=int, default=0)
    p.add_argument("--order", type=int)
    p.add_argument("--auto-order", type=int, metavar="SMAX")
    p.add_argument("--criterion", choices=("aic", "bic", "hqic"), default="aic")
    p.add_argument("--method", choices=("ols", "yule_walker"), default="ols")
    p.add_argument("--arch", type=int, default=0, metavar="S")
    p.add_argument("--p", default="1,2,inf")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("conjecture", help="Monte Carlo scan for counterexamples to the bound")
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--p", default="1,2,inf")
    common(p)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("oracle", help="compare analytic and quadrature residues")
    p.add_argument("--alpha", required=True)
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--radius-factor", type=float, default=0.25)
    common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except InputError as exc:
        err.write(f"resvec: error: {exc}\n")
        return EXIT_INPUT
    except (OperatorError, QuadratureError, NonSimplePoleError, RootFindingError) as exc:
        err.write(f"resvec: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
