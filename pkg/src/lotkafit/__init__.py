"""Fit discrete power laws, with and without exponential cutoff, to frequency data."""

__version__ = "0.1.0"

from .data import (
    CurveData,
    FrequencyTable,
    SufficientStats,
    load_frequency_table,
    load_lotka_chemistry,
    read_frequency_table,
    sufficient_stats,
    to_curve,
    truncate_data,
    truncate_distribution,
)
from .distributions import CutoffParams, PowerLawParams, cdf, pmf, sample
from .estimators import (
    FitResult,
    Method,
    fit_constrained_nls,
    fit_constrained_ols,
    fit_mle_cutoff,
    fit_mle_fixed_beta,
    fit_mle_power_law,
    fit_nls,
    fit_ols_loglog,
)
from .comparison import build_comparison_report, ks_statistic, lr_statistic, lr_test
from .specfun import polylog, zeta
