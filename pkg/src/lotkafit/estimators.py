"""Least-squares and maximum-likelihood estimators for both families.

Least squares work on curve points (x_i, y_i); maximum likelihood works on
the sufficient statistics (n, sum z_i, sum ln z_i).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import CurveData, SufficientStats
from .errors import BoundaryError, ConvergenceError, DegenerateInputError, DomainError
from .optimize import brent_minimize, decreasing_root, newton_maximize
from .specfun import polylog, polylog_ds, zeta, zeta_deriv

ALPHA_LO = 1.0 + 1e-6
ALPHA_HI = 50.0
XTOL = 1e-10
# NLS exponent is unconstrained; search this window
NLS_ALPHA_RANGE = (-20.0, 50.0)


class Method(str, enum.Enum):
    OLS_LOGLOG = "ols-loglog"
    CONSTRAINED_OLS = "constrained-ols"
    NLS = "nls"
    CONSTRAINED_NLS = "constrained-nls"
    MLE_POWERLAW = "mle-powerlaw"
    MLE_CUTOFF = "mle-cutoff"
    MLE_FIXED_BETA = "mle-fixed-beta"


@dataclass(frozen=True)
class FitResult:
    method: Method
    alpha: float
    objective: float
    converged: bool
    iterations: int
    b: Optional[float] = None
    beta: Optional[float] = None
    log_likelihood: Optional[float] = None

    def as_dict(self):
        out = {"method": self.method.value, "alpha": self.alpha}
        if self.b is not None:
            out["b"] = self.b
        if self.beta is not None:
            out["beta"] = self.beta
        if self.log_likelihood is not None:
            out["loglik"] = self.log_likelihood
        out.update(objective=self.objective, converged=self.converged, iterations=self.iterations)
        return out


def _ln_zeta(alpha):
    return math.log(zeta(alpha).value)


def _minimize_1d(obj, lo, hi, n_grid=200):
    """Coarse scan to isolate the basin, then Brent inside it."""
    grid = np.linspace(lo, hi, n_grid)
    vals = [obj(a) for a in grid]
    i = int(np.nanargmin(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n_grid - 1)]
    res = brent_minimize(obj, a, b, xtol=XTOL)
    if not res.converged:
        raise ConvergenceError("Brent minimization did not converge")
    return res.x, res.fun, res.iterations + n_grid


def grid_scan(objective, *axes):
    """Exhaustive minimum of objective over the product of the given axes.

    Returns (argmin tuple, min value).  Reduction order is fixed, so the
    result does not depend on how the caller might split the work.
    """
    best, best_at = math.inf, None
    for point in np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(axes), -1).T:
        v = objective(*point)
        if v < best:
            best, best_at = v, tuple(point)
    return best_at, best


# ---------------------------------------------------------------------------
# least squares on curve points


def _check_curve(curve, min_points):
    if len(curve) < min_points:
        raise DegenerateInputError(f"need at least {min_points} curve points")
    xs, ys = curve.xs, curve.ys
    if np.any(ys <= 0):
        raise DegenerateInputError("log-based fits need every y > 0")
    return xs, ys


def fit_ols_loglog(curve: CurveData) -> FitResult:
    """Ordinary least squares of ln y on ln x: ln y = -alpha ln x + b."""
    xs, ys = _check_curve(curve, 2)
    if np.all(xs == xs[0]):
        raise DegenerateInputError("all x equal; slope undefined")
    X, Y = np.log(xs), np.log(ys)
    Xc, Yc = X - X.mean(), Y - Y.mean()
    slope = float(np.dot(Xc, Yc) / np.dot(Xc, Xc))
    b = float(Y.mean() - slope * X.mean())
    rss = float(np.sum((Y - (slope * X + b)) ** 2))
    return FitResult(Method.OLS_LOGLOG, -slope, rss, True, 1, b=b)


def constrained_ols_objective(curve, alpha):
    X, Y = np.log(curve.xs), np.log(curve.ys)
    return float(np.sum((Y + alpha * X + _ln_zeta(alpha)) ** 2))


def fit_constrained_ols(curve: CurveData) -> FitResult:
    """Log-log least squares over lines ln y = -alpha ln x - ln zeta(alpha)."""
    _check_curve(curve, 1)
    alpha, rss, its = _minimize_1d(lambda a: constrained_ols_objective(curve, a), ALPHA_LO, ALPHA_HI)
    return FitResult(Method.CONSTRAINED_OLS, alpha, rss, True, its)


def nls_objective(curve, alpha, b):
    return float(np.sum((curve.ys - math.exp(b) * curve.xs ** -alpha) ** 2))


def _nls_profile(xs, ys, alpha):
    """Best amplitude for fixed alpha (linear least squares) and its RSS."""
    basis = xs ** -alpha
    amp = float(np.dot(ys, basis) / np.dot(basis, basis))
    return amp, float(np.sum((ys - amp * basis) ** 2))


def fit_nls(curve: CurveData) -> FitResult:
    """Nonlinear least squares y = e^b x^-alpha on the raw ordinates.

    The amplitude e^b enters linearly, so it is profiled out and only
    alpha is searched.
    """
    xs, ys = _check_curve(curve, 2)
    if np.all(xs == xs[0]):
        raise DegenerateInputError("all x equal; exponent undefined")
    alpha, _, its = _minimize_1d(lambda a: _nls_profile(xs, ys, a)[1], *NLS_ALPHA_RANGE)
    amp, rss = _nls_profile(xs, ys, alpha)
    if amp <= 0:
        raise ConvergenceError("best amplitude is not positive; b undefined")
    return FitResult(Method.NLS, alpha, rss, True, its, b=math.log(amp))


def constrained_nls_objective(curve, alpha):
    return float(np.sum((curve.ys - curve.xs ** -alpha / zeta(alpha).value) ** 2))


def fit_constrained_nls(curve: CurveData) -> FitResult:
    """Nonlinear least squares within the normalized family x^-alpha / zeta(alpha)."""
    _check_curve(curve, 1)
    alpha, rss, its = _minimize_1d(lambda a: constrained_nls_objective(curve, a), ALPHA_LO, ALPHA_HI)
    return FitResult(Method.CONSTRAINED_NLS, alpha, rss, True, its)


# ---------------------------------------------------------------------------
# maximum likelihood on sufficient statistics


def loglik_power_law(stats: SufficientStats, alpha):
    return -alpha * stats.sum_log_z - stats.n * _ln_zeta(alpha)


def loglik_cutoff(stats: SufficientStats, alpha, beta):
    li = polylog(alpha, beta).value
    if li <= 0:
        raise DomainError(f"normalizer underflows at alpha={alpha}, beta={beta}")
    return beta * stats.sum_z - alpha * stats.sum_log_z - stats.n * math.log(li)


def power_law_score(stats, alpha):
    """d loglik / d alpha divided by n."""
    return -stats.sum_log_z / stats.n - zeta_deriv(alpha).value / zeta(alpha).value


def cutoff_score(stats, alpha, beta):
    """Per-observation gradient (d/d alpha, d/d beta) of the cutoff loglik."""
    li = polylog(alpha, beta).value
    d_alpha = -stats.sum_log_z / stats.n - polylog_ds(alpha, beta).value / li
    d_beta = stats.sum_z / stats.n - polylog(alpha - 1, beta).value / li
    return np.array([d_alpha, d_beta])


def fit_mle_power_law(stats: SufficientStats) -> FitResult:
    """Maximum likelihood for the discrete power law.

    The log-likelihood is concave in alpha, so the maximizer is the root of
    the score, found by Brent's root method on [1 + 1e-6, 50].
    """
    if stats.sum_log_z <= 0:
        raise DegenerateInputError("all observations equal 1; likelihood grows without bound in alpha")
    score = lambda a: power_law_score(stats, a)
    if score(ALPHA_HI) > 0:
        raise ConvergenceError(f"power-law MLE lies above alpha={ALPHA_HI}")
    alpha, its = decreasing_root(score, 2.0, step=0.25, lo=ALPHA_LO, hi=ALPHA_HI)
    ll = loglik_power_law(stats, alpha)
    return FitResult(Method.MLE_POWERLAW, alpha, ll, True, its, log_likelihood=ll)


def _two_point_support(stats):
    """True when every observation lies in {k, k+1} for one k.

    The piecewise-linear interpolant L of ln through the integers is
    concave, so sum ln z_i <= n L(mean z) with equality exactly in this
    case.  The sample point then sits on the edge of the mean space and
    the cutoff likelihood has no maximizer (it climbs as alpha, beta -> -inf).
    """
    n, sum_z = stats.n, int(stats.sum_z)
    k, m = divmod(sum_z, n)  # m observations at k + 1 if two-point
    bound = (n - m) * math.log(k) + (m * math.log(k + 1) if m else 0.0)
    return stats.sum_log_z >= bound - 1e-12 * max(n, 1) * (1 + math.log(k + 1))


def fit_mle_cutoff(stats: SufficientStats, start=None) -> FitResult:
    """Maximum likelihood for the power law with exponential cutoff.

    Optimizes (alpha, t) with beta = -exp(t) by Newton's method.  Starts
    from the power-law MLE and beta = -n / sum_z unless `start` is given.
    The family is exponential in (beta, -alpha), so the log-likelihood is
    concave and the optimum sits on beta = 0 exactly when the power-law
    fit has alpha > 2 and a model mean no larger than the sample mean.
    """
    if _two_point_support(stats):
        raise DegenerateInputError(
            "all values lie in {k, k+1}; the cutoff likelihood has no maximum"
        )
    n = stats.n
    pl = fit_mle_power_law(stats)
    if pl.alpha > 2:
        pl_mean = zeta(pl.alpha - 1).value / zeta(pl.alpha).value
        if stats.sum_z / n >= pl_mean:
            raise BoundaryError(
                f"maximum is at beta = 0; use the power-law fit (alpha={pl.alpha:.7f})"
            )

    def fun(p):
        a, t = p
        try:
            return loglik_cutoff(stats, a, -math.exp(t)) / n
        except DomainError:
            return -math.inf

    def grad(p):
        a, t = p
        beta = -math.exp(t)
        g = cutoff_score(stats, a, beta)
        return np.array([g[0], g[1] * beta])

    def small_gradient(p):
        return np.linalg.norm(cutoff_score(stats, p[0], -math.exp(p[1]))) < 1e-7

    if start is None:
        start = (pl.alpha, -n / stats.sum_z)
    x0 = np.array([start[0], math.log(-start[1])])
    p, its, ok = newton_maximize(fun, grad, x0, stop=small_gradient)
    alpha, beta = float(p[0]), -math.exp(float(p[1]))
    if beta > -1e-12:
        raise BoundaryError("cutoff fit ran to beta -> 0-; use the power-law fit")
    if not ok:
        raise ConvergenceError(f"cutoff MLE did not converge (alpha={alpha}, beta={beta})")
    ll = loglik_cutoff(stats, alpha, beta)
    return FitResult(Method.MLE_CUTOFF, alpha, ll, True, its, beta=beta, log_likelihood=ll)


def fit_mle_fixed_beta(stats: SufficientStats, beta) -> FitResult:
    """Maximum likelihood for alpha with beta < 0 held fixed (any real alpha)."""
    beta = float(beta)
    if not beta < 0:
        raise DomainError(f"fixed beta must be < 0 (got {beta})")
    score = lambda a: cutoff_score(stats, a, beta)[0]
    try:
        alpha, its = decreasing_root(score, 2.0, step=0.25, hi=ALPHA_HI)
    except DomainError as exc:
        raise ConvergenceError(f"fixed-beta MLE left the representable range: {exc}") from exc
    ll = loglik_cutoff(stats, alpha, beta)
    return FitResult(Method.MLE_FIXED_BETA, alpha, ll, True, its, beta=beta, log_likelihood=ll)


def fit_table1(curve: CurveData, stats: SufficientStats):
    """The five power-law estimates, in display order."""
    return [
        fit_ols_loglog(curve),
        fit_constrained_ols(curve),
        fit_nls(curve),
        fit_constrained_nls(curve),
        fit_mle_power_law(stats),
    ]
