"""Cross-module invariants on random inputs."""
import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from lotkafit.comparison import ks_statistic, lr_statistic
from lotkafit.data import FrequencyTable, sufficient_stats
from lotkafit.distributions import CutoffParams, sample
from lotkafit.errors import BoundaryError, DegenerateInputError
from lotkafit.estimators import (
    cutoff_score,
    fit_mle_cutoff,
    fit_mle_fixed_beta,
    fit_mle_power_law,
    loglik_cutoff,
)

slow = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])

tables = st.dictionaries(st.integers(1, 200), st.integers(1, 300), min_size=2, max_size=15).map(
    FrequencyTable.from_counts
)


@given(tables, st.floats(-0.5, -1e-5))
@slow
def test_nesting_monotone(table, beta):
    stats = sufficient_stats(table)
    fixed = fit_mle_fixed_beta(stats, beta)
    # the fixed-beta fit beats its own alpha grid
    grid = np.linspace(fixed.alpha - 0.5, fixed.alpha + 0.5, 41)
    assert fixed.log_likelihood >= max(loglik_cutoff(stats, a, beta) for a in grid) - 1e-9
    ll0 = fit_mle_power_law(stats).log_likelihood
    try:
        lla = fit_mle_cutoff(stats).log_likelihood
    except DegenerateInputError:
        # only when the support is two neighbouring integers
        assert table.x_max - table.rows[0][0] == 1
        return
    except BoundaryError:
        # optimum on beta = 0: the power law is the full-model maximum
        assert ll0 >= fixed.log_likelihood - 1e-9
        return
    assert lla >= fixed.log_likelihood - 1e-9
    assert lla >= ll0 - 1e-9
    assert lr_statistic(ll0, lla) >= 0
    assert lr_statistic(fixed.log_likelihood, lla) >= 0


@given(st.floats(1.0, 3.0), st.floats(-0.3, -0.01), st.integers(0, 2**64 - 1))
@settings(max_examples=20, deadline=None)
def test_sampler_is_a_function_of_seed(alpha, beta, seed):
    p = CutoffParams(alpha, beta)
    t = sample(p, 300, seed)
    assert t == sample(p, 300, seed)
    assert t.n == 300


@given(st.floats(1.2, 2.8), st.floats(-0.2, -0.005), st.integers(0, 10**6))
@slow
def test_sample_ks_small(alpha, beta, seed):
    # a 2000-draw sample should rarely sit far outside the model
    p = CutoffParams(alpha, beta)
    t = sample(p, 2000, seed)
    assert ks_statistic(t, p).d_statistic < 2.5 * 1.36 / np.sqrt(t.n)


@given(st.floats(1.3, 2.6), st.floats(-0.1, -0.005), st.integers(0, 10**6))
@slow
def test_cutoff_fit_stationary_on_samples(alpha, beta, seed):
    stats = sufficient_stats(sample(CutoffParams(alpha, beta), 3000, seed))
    try:
        f = fit_mle_cutoff(stats)
    except BoundaryError:
        return
    assert f.converged and f.beta < 0
    assert np.linalg.norm(cutoff_score(stats, f.alpha, f.beta)) < 1e-7
