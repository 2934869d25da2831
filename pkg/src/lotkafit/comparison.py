"""Likelihood-ratio and Kolmogorov-Smirnov comparisons of the fitted models."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import erfcinv

from .data import FrequencyTable, empirical_cdf_values, sufficient_stats
from .distributions import CutoffParams, PowerLawParams, cdf_values, pmf
from .errors import NestingViolationError, NotConvergedError
from .estimators import FitResult, Method, fit_mle_cutoff, fit_mle_fixed_beta, fit_mle_power_law
from .specfun import chi2_sf_1dof

KS_COEF_95 = 1.36
DEFAULT_BETA_PROBE = -1e-6
DEFAULT_LEVEL = 0.99

_FREE_PARAMS = {
    Method.MLE_POWERLAW: 1,
    Method.MLE_FIXED_BETA: 1,
    Method.MLE_CUTOFF: 2,
}


@dataclass(frozen=True)
class LrTestResult:
    statistic: float
    p_value: float
    dof: int
    critical_value_99: float
    reject_null: bool
    level: float = DEFAULT_LEVEL
    # null sits on beta = 0, where the chi-squared reference is not justified
    boundary_null: bool = False


@dataclass(frozen=True)
class KsResult:
    d_statistic: float
    argmax_x: int
    critical_value_95: float
    reject: bool
    # 1.36/sqrt(n) comes from the continuous case and is conservative here
    conservative_threshold: bool = True


def chi2_1dof_critical(level):
    """t with P(chi^2_1 <= t) = level."""
    return 2.0 * float(erfcinv(1.0 - level)) ** 2


def lr_statistic(loglik_null, loglik_alt):
    """-2 ln(lambda) for nested models, clipped at 0 for round-off."""
    if loglik_alt < loglik_null - 1e-6:
        raise NestingViolationError(
            f"alternative log-likelihood {loglik_alt} is below null {loglik_null}; "
            "an upstream fit probably failed"
        )
    return max(0.0, -2.0 * (loglik_null - loglik_alt))


def lr_test(null_fit: FitResult, alt_fit: FitResult, level=DEFAULT_LEVEL) -> LrTestResult:
    for fit in (null_fit, alt_fit):
        if not fit.converged:
            raise NotConvergedError(f"{fit.method.value} fit did not converge")
        if fit.log_likelihood is None:
            raise ValueError(f"{fit.method.value} has no log-likelihood")
    dof = _FREE_PARAMS[alt_fit.method] - _FREE_PARAMS[null_fit.method]
    if dof != 1:
        raise ValueError("need a one-parameter null nested in the two-parameter cutoff model")
    stat = lr_statistic(null_fit.log_likelihood, alt_fit.log_likelihood)
    crit = chi2_1dof_critical(level)
    return LrTestResult(
        statistic=stat,
        p_value=chi2_sf_1dof(stat),
        dof=dof,
        critical_value_99=chi2_1dof_critical(0.99),
        reject_null=stat > crit,
        level=level,
        boundary_null=null_fit.method is Method.MLE_POWERLAW,
    )


def ks_statistic(table: FrequencyTable, params) -> KsResult:
    """Two-sided KS distance between the empirical and model CDFs.

    Both CDFs are right-continuous steps on the integers, and past x_max
    the gap 1 - F(x) only shrinks, so checking x = 1..x_max is exact.
    """
    model = cdf_values(params, table.x_max)
    emp = empirical_cdf_values(table, table.x_max)
    gaps = np.abs(emp - model)
    i = int(np.argmax(gaps))
    d = float(gaps[i])
    crit = KS_COEF_95 / math.sqrt(table.n)
    return KsResult(d, i + 1, crit, d > crit)


def params_of(fit: FitResult):
    if fit.method is Method.MLE_POWERLAW:
        return PowerLawParams(fit.alpha)
    return CutoffParams(fit.alpha, fit.beta)


def proximity(p0, p1, x_max):
    """max |p0 - p1| and the range of p0/p1 over x = 1..x_max."""
    x = np.arange(1, x_max + 1)
    a, b = pmf(p0, x), pmf(p1, x)
    ratio = a / b
    return {
        "max_abs_diff": float(np.max(np.abs(a - b))),
        "ratio_min": float(ratio.min()),
        "ratio_max": float(ratio.max()),
    }


@dataclass(frozen=True)
class HypothesisRow:
    name: str
    label: str
    fit: FitResult
    ks: KsResult
    lr: Optional[LrTestResult] = None

    @property
    def log_likelihood(self):
        return self.fit.log_likelihood


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    x_max: int
    rows: tuple
    proximity: dict = field(default_factory=dict)

    def row(self, name):
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self):
        def g7(v):
            return None if v is None else float(f"{v:.7g}")

        rows = []
        for r in self.rows:
            d = {
                "hypothesis": r.name,
                "label": r.label,
                "alpha": g7(r.fit.alpha),
                "beta": g7(r.fit.beta if r.fit.beta is not None else 0.0),
                "loglik": g7(r.fit.log_likelihood),
                "lr_statistic": g7(r.lr.statistic) if r.lr else None,
                "ks_d": g7(r.ks.d_statistic),
                "ks_argmax_x": r.ks.argmax_x,
                "converged": r.fit.converged,
                "iterations": r.fit.iterations,
            }
            if r.lr:
                d.update(
                    p_value=g7(r.lr.p_value),
                    reject_null_99=r.lr.reject_null,
                    boundary_null=r.lr.boundary_null,
                )
            rows.append(d)
        first = self.rows[0].ks
        return {
            "n": self.n,
            "x_max": self.x_max,
            "hypotheses": rows,
            "lr_critical_value_99": g7(chi2_1dof_critical(0.99)),
            "ks_critical_value_95": g7(first.critical_value_95),
            "ks_conservative_threshold": first.conservative_threshold,
            "proximity_p0_p1": {k: g7(v) for k, v in self.proximity.items()},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self):
        lines = [
            f"{'hypothesis':<32}{'alpha':>12}{'beta':>14}{'log lik':>14}{'-2 ln lambda':>14}{'KS D':>11}",
        ]
        for r in self.rows:
            lr = f"{r.lr.statistic:.7g}" if r.lr else ""
            beta = r.fit.beta if r.fit.beta is not None else 0.0
            lines.append(
                f"{r.label:<32}{r.fit.alpha:>12.7g}{beta:>14.7g}{r.fit.log_likelihood:>14.7g}"
                f"{lr:>14}{r.ks.d_statistic:>11.7g}"
            )
        ks = self.rows[0].ks
        lines.append("")
        lines.append(f"chi^2(1) critical value at 0.99: {chi2_1dof_critical(0.99):.7g}")
        lines.append(f"KS 95% critical value 1.36/sqrt({self.n}) = {ks.critical_value_95:.7g} (conservative)")
        for r in self.rows[1:]:
            verdict = "reject" if r.lr.reject_null else "do not reject"
            note = " [null on beta=0 boundary: chi^2 reference not justified]" if r.lr.boundary_null else ""
            lines.append(f"{r.name} vs p_a: p = {r.lr.p_value:.3g}, {verdict} at 0.99{note}")
        for r in self.rows:
            verdict = "above" if r.ks.reject else "within"
            lines.append(f"KS {r.name}: D = {r.ks.d_statistic:.7g} at x = {r.ks.argmax_x}, {verdict} the conservative threshold")
        p = self.proximity
        lines.append(
            f"p0 vs p1 on 1..{self.x_max}: max |diff| = {p['max_abs_diff']:.7g}, "
            f"ratio in [{p['ratio_min']:.7g}, {p['ratio_max']:.7g}]"
        )
        return "\n".join(lines) + "\n"


def build_comparison_report(table: FrequencyTable, beta_probe=DEFAULT_BETA_PROBE, level=DEFAULT_LEVEL):
    """Fit the cutoff model, the power law and the fixed-beta probe, and compare."""
    stats = sufficient_stats(table)
    fit_a = fit_mle_cutoff(stats)
    fit_0 = fit_mle_power_law(stats)
    fit_1 = fit_mle_fixed_beta(stats, beta_probe)
    rows = (
        HypothesisRow("p_a", "general exponential cutoff", fit_a, ks_statistic(table, params_of(fit_a))),
        HypothesisRow("p_0", "discrete power law (beta=0)", fit_0, ks_statistic(table, params_of(fit_0)),
                      lr_test(fit_0, fit_a, level)),
        HypothesisRow("p_1", f"virtual power law (beta={beta_probe:g})", fit_1,
                      ks_statistic(table, params_of(fit_1)), lr_test(fit_1, fit_a, level)),
    )
    return ComparisonReport(
        n=table.n,
        x_max=table.x_max,
        rows=rows,
        proximity=proximity(params_of(fit_0), params_of(fit_1), table.x_max),
    )
