"""JSON-ready documents for the command-line tool, and their text rendering.

Documents are plain dicts of JSON types.  Complex numbers become
``{"re": x, "im": y}``; norm orders become ``1, 2, ...`` or ``"inf"``; a
non-finite float (only the separation of a single pole) becomes ``null``.
Floats are emitted by :mod:`json` with shortest round-trip repr, so every
value survives ``loads(dumps(doc))`` unchanged.
"""
from __future__ import annotations

import json
import math
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .arts import ARFit, DiagnosticReport
from .cpoly import RootSet, poly_derivative, poly_eval
from .norms import BoundReport, ScanReport
from .residua import ClassReport, RationalOperator, ResidueVector

TEXT_DIGITS = 12


def encode_complex(z) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def decode_complex(d: dict) -> complex:
    return complex(d["re"], d["im"])


def encode_p(p):
    return "inf" if p == math.inf else int(p)


def _finite_or_none(x):
    x = float(x)
    return x if math.isfinite(x) else None


def header(command: str) -> dict:
    return {
        "tool": "resvec",
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def class_doc(cls: ClassReport) -> dict:
    c1, c2 = cls.condition_I, cls.condition_II
    v = c2.simplicity
    return {
        "in_class": cls.in_class,
        "condition_I": {
            "passed": c1.passed,
            "coefficient_sum": c1.coefficient_sum,
            "margin": c1.margin,
        },
        "condition_II": {
            "passed": c2.passed,
            "outside_unit_circle": c2.outside_unit_circle,
            "min_pole_modulus": c2.min_pole_modulus,
            "simple": v.simple,
            "min_separation": _finite_or_none(v.min_separation),
            "min_derivative": v.min_derivative,
            "reason": v.reason,
        },
    }


def poles_doc(op: RationalOperator, poles: RootSet) -> list:
    dp = np.abs(poly_eval(poly_derivative(op.denominator), poles.roots))
    return [
        {"value": encode_complex(z), "modulus": float(abs(z)), "derivative_magnitude": float(d)}
        for z, d in zip(poles.roots, dp)
    ]


def residues_doc(rv: ResidueVector) -> dict:
    return {"method": rv.method, "values": [encode_complex(c) for c in rv.values]}


def bounds_doc(br: BoundReport) -> dict:
    return {
        "n": br.n,
        "advisory": br.advisory,
        "all_hold": br.all_hold,
        "entries": [
            {
                "p": encode_p(e.p),
                "norm": e.norm_value,
                "lower_bound": e.lower_bound,
                "margin": e.margin,
                "holds": e.holds,
            }
            for e in br.entries
        ],
    }


def fit_doc(fit: ARFit, mean: float | None) -> dict:
    return {
        "order": fit.order,
        "phi": list(fit.phi),
        "intercept": fit.intercept,
        "noise_variance": fit.noise_variance,
        "mean": mean,
        "diff_order": fit.diff_order,
        "method": fit.method,
        "nobs": fit.nobs,
        "stderr": list(fit.stderr) if fit.stderr is not None else None,
    }


def diagnostic_doc(rep: DiagnosticReport) -> dict:
    return {
        "verdict": rep.verdict,
        "alpha": list(rep.operator.alpha),
        "class": class_doc(rep.class_report),
        "poles": poles_doc(rep.operator, rep.poles),
        "residues": [residues_doc(rep.residues)] if rep.residues is not None else [],
        "bounds": bounds_doc(rep.bounds) if rep.bounds is not None else None,
    }


def scan_doc(scan: ScanReport) -> dict:
    return {
        "seed": scan.seed,
        "n_max": scan.n_max,
        "trials_per_n": scan.trials_per_n,
        "p": [encode_p(p) for p in scan.ps],
        "trials": scan.trials,
        "accepted": scan.accepted,
        "rejected": scan.rejected,
        "rejected_zero_leading": scan.rejected_zero_leading,
        "rejected_not_simple": scan.rejected_not_simple,
        "rejected_no_convergence": scan.rejected_no_convergence,
        "min_margin": [
            {"n": n, "p": encode_p(p), "min_margin": _finite_or_none(m)}
            for (n, p), m in sorted(scan.min_margin.items())
        ],
        "min_pole_modulus": [
            {"n": n, "value": _finite_or_none(m)} for n, m in sorted(scan.min_pole_modulus.items())
        ],
        "max_residue_sum": [
            {"n": n, "value": m} for n, m in sorted(scan.max_residue_sum.items())
        ],
        "modulus_failures": [list(a) for a in scan.modulus_failures],
        "violations": [
            {"alpha": list(v["alpha"]), "p": encode_p(v["p"]), "norm": v["norm"], "bound": v["bound"]}
            for v in scan.violations
        ],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


# -- text rendering -----------------------------------------------------------


def fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, f".{TEXT_DIGITS}g")
    if isinstance(x, dict) and set(x) == {"re", "im"}:
        re, im = x["re"], x["im"]
        sign = "-" if im < 0 or (im == 0 and math.copysign(1, im) < 0) else "+"
        return f"{fmt(re)} {sign} {fmt(abs(im))}i"
    return str(x)


def _class_lines(cls: dict) -> list[str]:
    c1, c2 = cls["condition_I"], cls["condition_II"]
    return [
        f"condition I   : {'pass' if c1['passed'] else 'FAIL'}  "
        f"sum|alpha| = {fmt(c1['coefficient_sum'])}  margin = {fmt(c1['margin'])}",
        f"condition II  : {'pass' if c2['passed'] else 'FAIL'}  "
        f"min|z| = {fmt(c2['min_pole_modulus'])}  simple = {fmt(c2['simple'])} ({c2['reason']})",
        f"in class      : {fmt(cls['in_class'])}",
    ]


def _pole_lines(poles: list) -> list[str]:
    lines = ["poles:"]
    for k, p in enumerate(poles, 1):
        lines.append(
            f"  z{k} = {fmt(p['value'])}   |z| = {fmt(p['modulus'])}   "
            f"|P'(z)| = {fmt(p['derivative_magnitude'])}"
        )
    return lines


def _residue_lines(residues: list) -> list[str]:
    lines = []
    for block in residues:
        lines.append(f"residues ({block['method']}):")
        for k, c in enumerate(block["values"], 1):
            lines.append(f"  c{k} = {fmt(c)}")
        if "max_deviation" in block:
            lines.append(f"  max deviation from analytic = {fmt(block['max_deviation'])}")
    return lines


def _bound_lines(bounds: dict | None) -> list[str]:
    if bounds is None:
        return ["bounds: not evaluated (poles not simple)"]
    tag = " [advisory: class conditions unmet]" if bounds["advisory"] else ""
    lines = [f"bounds (n = {bounds['n']}){tag}:"]
    for e in bounds["entries"]:
        lines.append(
            f"  p = {e['p']!s:>3}  norm = {fmt(e['norm'])}  bound = {fmt(e['lower_bound'])}  "
            f"margin = {fmt(e['margin'])}  {'holds' if e['holds'] else 'VIOLATED'}"
        )
    return lines


def render_analysis(doc: dict) -> str:
    lines = [f"alpha = ({', '.join(fmt(a) for a in doc['input']['alpha'])})"]
    lines += _class_lines(doc["class"])
    lines += _pole_lines(doc["poles"])
    lines += _residue_lines(doc["residues"])
    lines += _bound_lines(doc["bounds"])
    return "\n".join(lines) + "\n"


def _render_diagnostic(diag: dict) -> list[str]:
    lines = [f"verdict: {diag['verdict']}"]
    lines.append(f"operator alpha = ({', '.join(fmt(a) for a in diag['alpha'])})")
    lines += _class_lines(diag["class"])
    lines += _pole_lines(diag["poles"])
    lines += _residue_lines(diag["residues"])
    lines += _bound_lines(diag["bounds"])
    return lines


def _fit_lines(fit: dict, title: str) -> list[str]:
    return [
        f"{title}: order {fit['order']} ({fit['method']}), {fit['nobs']} observations, "
        f"diff order {fit['diff_order']}",
        f"  phi = ({', '.join(fmt(v) for v in fit['phi'])})",
        f"  intercept = {fmt(fit['intercept'])}  mean = {fmt(fit['mean'])}  "
        f"noise variance = {fmt(fit['noise_variance'])}",
    ]


def render_fit(doc: dict) -> str:
    inp = doc["input"]
    lines = [f"series: {inp['csv']} column {inp['column']} transforms {inp['transforms']}"]
    if inp.get("selected_order") is not None:
        lines.append(f"selected order ({inp['criterion']}): {inp['selected_order']}")
    lines += _fit_lines(doc["fit"], "AR fit")
    if doc["diagnostic"] is not None:
        lines += _render_diagnostic(doc["diagnostic"])
    arch = doc.get("arch")
    if arch is not None:
        lines += _fit_lines(arch["fit"], "ARCH fit on squared residuals")
        if arch["diagnostic"] is not None:
            lines += ["  " + s for s in _render_diagnostic(arch["diagnostic"])]
    return "\n".join(lines) + "\n"


def render_scan(doc: dict) -> str:
    lines = [
        f"conjecture scan: n <= {doc['n_max']}, {doc['trials_per_n']} trials per n, seed {doc['seed']}",
        f"trials {doc['trials']}  accepted {doc['accepted']}  rejected {doc['rejected']}",
        "minimum margin by (n, p):",
    ]
    for e in doc["min_margin"]:
        lines.append(f"  n = {e['n']}  p = {e['p']!s:>3}  {fmt(e['min_margin'])}")
    for e in doc["min_pole_modulus"]:
        lines.append(f"  n = {e['n']}  min |z| = {fmt(e['value'])}")
    if doc["violations"]:
        lines.append("VIOLATIONS:")
        for v in doc["violations"]:
            lines.append(
                f"  alpha = {v['alpha']!r}  p = {v['p']}  norm = {fmt(v['norm'])}  bound = {fmt(v['bound'])}"
            )
    else:
        lines.append("no violations")
    return "\n".join(lines) + "\n"


def render_oracle(doc: dict) -> str:
    lines = [
        f"alpha = ({', '.join(fmt(a) for a in doc['alpha'])})  points = {doc['points']}  "
        f"radius factor = {fmt(doc['radius_factor'])}",
        "  pole | analytic | quadrature | |difference|",
    ]
    for k, row in enumerate(doc["rows"], 1):
        lines.append(
            f"  z{k} = {fmt(row['pole'])} | {fmt(row['analytic'])} | {fmt(row['quadrature'])} | "
            f"{fmt(row['deviation'])}"
        )
    status = "ok" if doc["max_deviation"] < doc["threshold"] else "ABOVE THRESHOLD"
    lines.append(f"max deviation = {fmt(doc['max_deviation'])} (threshold {fmt(doc['threshold'])}) {status}")
    return "\n".join(lines) + "\n"
