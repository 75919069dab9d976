"""Residue vectors of ``1 / (1 - a_1 z - ... - a_n z**n)`` and AR stationarity diagnostics."""

__version__ = "0.1.0"

from .cpoly import (  # noqa: E402
    Polynomial,
    RootConfig,
    RootFindingError,
    RootSet,
    cauchy_root_bound,
    find_roots,
    poly_derivative,
    poly_eval,
    separation_report,
)
from .residua import (  # noqa: E402
    ClassReport,
    QuadratureConfig,
    RationalOperator,
    ResidueVector,
    check_class,
    operator_new,
    operator_poles,
    residues_analytic,
    residues_closed_form,
    residues_quadrature,
)
from .norms import (  # noqa: E402
    BoundReport,
    ScanReport,
    conjecture_scan,
    inf_norm,
    p_norm,
    sandwich_check,
    theorem_lower_bound,
    verify_bounds,
)
from .arts import (  # noqa: E402
    ARFit,
    TimeSeries,
    arch_fit,
    fit_ols,
    fit_yule_walker,
    load_csv,
    model_mean,
    operator_from_fit,
    select_order,
    stationarity_verdict,
)
