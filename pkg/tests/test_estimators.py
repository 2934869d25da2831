import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lotkafit.data import CurveData, FrequencyTable, SufficientStats, sufficient_stats
from lotkafit.distributions import CutoffParams, model_mean
from lotkafit.errors import BoundaryError, DegenerateInputError, DomainError
from lotkafit.estimators import (
    Method,
    constrained_nls_objective,
    constrained_ols_objective,
    cutoff_score,
    fit_constrained_nls,
    fit_constrained_ols,
    fit_mle_cutoff,
    fit_mle_fixed_beta,
    fit_mle_power_law,
    fit_nls,
    fit_ols_loglog,
    grid_scan,
    loglik_cutoff,
    loglik_power_law,
    nls_objective,
    power_law_score,
)
from lotkafit.specfun import zeta, zeta_deriv

X = np.arange(1, 41)


def exact_curve(alpha, scale=None):
    scale = 1 / zeta(alpha).value if scale is None else scale
    return CurveData(tuple(zip(X.tolist(), (scale * X ** -float(alpha)).tolist())))


def test_ols_exact():
    r = fit_ols_loglog(exact_curve(2.0, 0.3))
    assert r.alpha == pytest.approx(2.0, abs=1e-12)
    assert r.b == pytest.approx(math.log(0.3), abs=1e-12)
    assert r.objective == pytest.approx(0.0, abs=1e-20)
    assert r.beta is None and r.log_likelihood is None


def test_constrained_ols_exact():
    assert fit_constrained_ols(exact_curve(2.2)).alpha == pytest.approx(2.2, abs=1e-8)


def test_nls_exact():
    r = fit_nls(exact_curve(2.0, 0.5))
    assert r.alpha == pytest.approx(2.0, abs=1e-8)
    assert r.b == pytest.approx(math.log(0.5), abs=1e-8)


def test_constrained_nls_exact():
    assert fit_constrained_nls(exact_curve(1.7)).alpha == pytest.approx(1.7, abs=1e-8)


def test_curve_fit_errors():
    with pytest.raises(DegenerateInputError):
        fit_ols_loglog(CurveData(((3, 0.5), (3, 0.5))))
    with pytest.raises(DegenerateInputError):
        fit_ols_loglog(CurveData(((3, 0.5),)))
    with pytest.raises(DegenerateInputError):
        fit_nls(CurveData(((2, 0.5),)))


def test_all_five_agree_on_exact_power_law():
    alpha = 2.2
    curve = exact_curve(alpha)
    # population statistics of the same law: mean ln X = -zeta'/zeta
    stats = SufficientStats(1, 1, -zeta_deriv(alpha).value / zeta(alpha).value)
    fits = [fit_ols_loglog(curve), fit_constrained_ols(curve), fit_nls(curve),
            fit_constrained_nls(curve), fit_mle_power_law(stats)]
    for f in fits:
        assert f.alpha == pytest.approx(alpha, abs=1e-6), f.method


@given(st.floats(1e-3, 1e3), st.floats(1.2, 3.5))
@settings(max_examples=30, deadline=None)
def test_ols_slope_scale_invariant(c, alpha):
    base = fit_ols_loglog(exact_curve(alpha, 0.1))
    noisy = CurveData(tuple((x, y * (1 + 0.1 * math.sin(x))) for x, y in exact_curve(alpha, 0.1).points))
    scaled = CurveData(tuple((x, c * y) for x, y in noisy.points))
    a, b = fit_ols_loglog(noisy), fit_ols_loglog(scaled)
    assert b.alpha == pytest.approx(a.alpha, abs=1e-10)
    assert b.b - a.b == pytest.approx(math.log(c), abs=1e-10)
    assert base.alpha == pytest.approx(alpha, abs=1e-10)


def test_lotka_table1(lotka_curve, lotka_stats):
    assert fit_ols_loglog(lotka_curve).alpha == pytest.approx(1.8122, abs=0.005)
    assert fit_constrained_ols(lotka_curve).alpha == pytest.approx(1.8985, abs=0.005)
    nls = fit_nls(lotka_curve)
    assert (nls.alpha, nls.b) == pytest.approx((1.9018, -0.5466), abs=0.005)
    assert fit_constrained_nls(lotka_curve).alpha == pytest.approx(1.9185, abs=0.005)
    assert fit_mle_power_law(lotka_stats).alpha == pytest.approx(1.9665088, abs=5e-4)


def test_nls_beats_coarse_grid(lotka_curve):
    fit = fit_nls(lotka_curve)
    _, best = grid_scan(lambda a, b: nls_objective(lotka_curve, a, b),
                        np.arange(1.5, 2.5001, 0.02), np.arange(-1.0, 0.0001, 0.02))
    assert fit.objective <= best
    assert nls_objective(lotka_curve, fit.alpha, fit.b) == pytest.approx(fit.objective, rel=1e-12)


def test_constrained_objectives_match_results(lotka_curve):
    c = fit_constrained_ols(lotka_curve)
    assert constrained_ols_objective(lotka_curve, c.alpha) == c.objective
    c = fit_constrained_nls(lotka_curve)
    assert constrained_nls_objective(lotka_curve, c.alpha) == c.objective


def test_power_law_mle_stationarity(lotka_stats):
    f = fit_mle_power_law(lotka_stats)
    assert abs(power_law_score(lotka_stats, f.alpha)) <= 1e-8
    assert f.log_likelihood == loglik_power_law(lotka_stats, f.alpha)
    assert f.method is Method.MLE_POWERLAW and f.beta is None


def test_cutoff_mle_stationarity(lotka_stats):
    f = fit_mle_cutoff(lotka_stats)
    assert np.linalg.norm(cutoff_score(lotka_stats, f.alpha, f.beta)) <= 1e-7
    mean = model_mean(CutoffParams(f.alpha, f.beta))
    assert mean == pytest.approx(lotka_stats.sum_z / lotka_stats.n, rel=1e-6)
    assert f.beta < 0 and f.converged


@pytest.mark.parametrize("which", ["cutoff", "power", "fixed"])
def test_gradient_matches_finite_difference(lotka_stats, which):
    s, h = lotka_stats, 1e-6
    if which == "power":
        a = fit_mle_power_law(s).alpha
        fd = (loglik_power_law(s, a + h) - loglik_power_law(s, a - h)) / (2 * h)
        assert fd == pytest.approx(s.n * power_law_score(s, a), abs=1e-5)
        return
    f = fit_mle_cutoff(s) if which == "cutoff" else fit_mle_fixed_beta(s, -1e-6)
    a, b = f.alpha, f.beta
    grad = s.n * cutoff_score(s, a, b)
    fd_a = (loglik_cutoff(s, a + h, b) - loglik_cutoff(s, a - h, b)) / (2 * h)
    assert fd_a == pytest.approx(grad[0], abs=1e-5)
    if which == "cutoff":
        fd_b = (loglik_cutoff(s, a, b + h) - loglik_cutoff(s, a, b - h)) / (2 * h)
        assert fd_b == pytest.approx(grad[1], abs=1e-5)


def test_fixed_beta_profile_consistency(lotka_stats):
    a = fit_mle_cutoff(lotka_stats)
    f = fit_mle_fixed_beta(lotka_stats, a.beta)
    assert f.alpha == pytest.approx(a.alpha, abs=1e-6)
    with pytest.raises(DomainError):
        fit_mle_fixed_beta(lotka_stats, 0.0)


def test_fixed_beta_allows_alpha_below_one():
    # light tail and many large values: best alpha for this beta is negative
    s = sufficient_stats(FrequencyTable(((1, 1), (5, 3), (10, 5), (20, 4))))
    f = fit_mle_fixed_beta(s, -0.3)
    assert f.alpha < 1
    assert abs(cutoff_score(s, f.alpha, -0.3)[0]) < 1e-10


def test_fixed_beta_deep_negative_alpha():
    # mass piled at x=108 under beta=-0.5 needs alpha near -50
    s = sufficient_stats(FrequencyTable.from_counts({1: 1, 108: 69}))
    f = fit_mle_fixed_beta(s, -0.5)
    assert f.alpha < -49
    assert abs(cutoff_score(s, f.alpha, -0.5)[0]) < 1e-8
    assert fit_mle_cutoff(s).log_likelihood >= f.log_likelihood


def test_mle_degenerate_inputs():
    ones = sufficient_stats(FrequencyTable(((1, 50),)))
    with pytest.raises(DegenerateInputError):
        fit_mle_power_law(ones)
    with pytest.raises(DegenerateInputError):
        fit_mle_cutoff(ones)
    single = sufficient_stats(FrequencyTable(((4, 9),)))
    with pytest.raises(DegenerateInputError):
        fit_mle_cutoff(single)
    for rows in (((1, 80), (2, 1)), ((6, 3), (7, 11))):
        with pytest.raises(DegenerateInputError):
            fit_mle_cutoff(sufficient_stats(FrequencyTable(rows)))
    # one step further apart and the maximum exists
    assert fit_mle_cutoff(sufficient_stats(FrequencyTable(((1, 5), (3, 4))))).beta < 0


def test_cutoff_boundary_error():
    # steep head (alpha_0 > 2) with a mean above the fitted power law's
    s = sufficient_stats(FrequencyTable(((1, 970), (2, 20), (1000, 10))))
    assert fit_mle_power_law(s).alpha > 2
    with pytest.raises(BoundaryError):
        fit_mle_cutoff(s)


def test_cutoff_custom_start(lotka_stats):
    a = fit_mle_cutoff(lotka_stats)
    b = fit_mle_cutoff(lotka_stats, start=(2.5, -0.2))
    assert (b.alpha, b.beta) == pytest.approx((a.alpha, a.beta), abs=1e-7)


def test_grid_scan_is_exhaustive():
    f = lambda a, b: (a - 0.3) ** 2 + (b + 0.7) ** 2
    at, best = grid_scan(f, np.linspace(-1, 1, 21), np.linspace(-1, 1, 21))
    assert at == pytest.approx((0.3, -0.7))
    assert best == pytest.approx(0.0, abs=1e-24)


def test_as_dict_fields():
    d = fit_ols_loglog(exact_curve(2.0, 0.3)).as_dict()
    assert set(d) == {"method", "alpha", "b", "objective", "converged", "iterations"}
