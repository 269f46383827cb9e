"""Target distribution constructors, quantile/cdf inversion, moment identities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from costeff.targetdist import TargetDistribution


def test_from_mean_std_log_params_match_moment_formulas():
    # closed-form lognormal moments: E = e^{m + v^2/2}, Var = (e^{v^2}-1) e^{2m+v^2}
    d = TargetDistribution.from_mean_std(100.0, 40.0)
    mean_back = math.exp(d.log_m + 0.5 * d.log_v**2)
    var_back = math.expm1(d.log_v**2) * math.exp(2 * d.log_m + d.log_v**2)
    assert mean_back == pytest.approx(100.0, rel=1e-12)
    assert math.sqrt(var_back) == pytest.approx(40.0, rel=1e-12)


def test_from_mean_std_sampling_reproduces_moments():
    d = TargetDistribution.from_mean_std(100.0, 40.0)
    rng = np.random.default_rng(0)
    draws = d.quantile(rng.random(1_000_000))
    se_mean = draws.std(ddof=1) / 1000.0
    assert abs(draws.mean() - 100.0) < 3 * se_mean
    assert abs(draws.std(ddof=1) - 40.0) < 0.5


def test_from_scale_std_hits_requested_std_with_fixed_scale():
    d = TargetDistribution.from_scale_std(100.0, 40.0)
    assert math.exp(d.log_m) == pytest.approx(100.0, rel=1e-12)
    assert d.std == pytest.approx(40.0, rel=1e-12)


def test_degenerate_concentration():
    d = TargetDistribution.from_mean_std(1.0, 1e-6)
    for p in (0.01, 0.5, 0.99):
        assert d.quantile(p) == pytest.approx(1.0, abs=1e-4)


def test_lognormal_median_is_exp_log_m():
    d = TargetDistribution.from_mean_std(80.0, 25.0)
    assert d.quantile(0.5) == pytest.approx(math.exp(d.log_m), rel=1e-12)
    assert d.cdf(math.exp(d.log_m)) == pytest.approx(0.5, abs=1e-12)


def test_quantile_cdf_roundtrip():
    d = TargetDistribution.from_mean_std(100.0, 40.0)
    for p in (1e-6, 0.31, 0.5, 0.999):
        assert d.cdf(d.quantile(p)) == pytest.approx(p, abs=1e-9)
    x = d.quantile(0.999)
    assert d.cdf(x) == pytest.approx(0.999, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(
    log_m=st.floats(-2.0, 6.0),
    log_v=st.floats(0.01, 2.0),
    p=st.floats(1e-6, 1.0 - 1e-6),
)
def test_roundtrip_property(log_m, log_v, p):
    d = TargetDistribution.from_log_params(log_m, log_v)
    assert d.cdf(d.quantile(p)) == pytest.approx(p, abs=1e-9)
    x = d.quantile(p)
    assert d.quantile(d.cdf(x)) == pytest.approx(x, rel=1e-9)


def test_quantile_non_decreasing():
    d = TargetDistribution.from_mean_std(50.0, 20.0)
    ps = np.linspace(0.001, 0.999, 500)
    q = d.quantile(ps)
    assert np.all(np.diff(q) >= 0)


def test_lognormal_cdf_zero_below_support():
    d = TargetDistribution.from_mean_std(10.0, 5.0)
    assert d.cdf(0.0) == 0.0
    assert d.cdf(-3.0) == 0.0


def test_empirical_generalized_inverse():
    d = TargetDistribution.from_samples([1.0, 2.0, 3.0])
    assert d.quantile(0.4) == 2.0
    assert d.quantile(0.333) == 1.0
    assert d.quantile(0.99) == 3.0
    assert d.cdf(2.0) == pytest.approx(2.0 / 3.0)
    assert d.cdf(1.999) == pytest.approx(1.0 / 3.0)


def test_empirical_degenerate_constant():
    d = TargetDistribution.degenerate(7.5)
    for p in (0.01, 0.6, 0.99):
        assert d.quantile(p) == 7.5


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        TargetDistribution.from_mean_std(-1.0, 2.0)
    with pytest.raises(ValueError):
        TargetDistribution.from_mean_std(1.0, 0.0)
    with pytest.raises(ValueError):
        TargetDistribution.from_log_params(0.0, -0.1)
    with pytest.raises(ValueError):
        TargetDistribution.from_samples([])
    d = TargetDistribution.from_mean_std(1.0, 1.0)
    with pytest.raises(ValueError):
        d.quantile(0.0)
    with pytest.raises(ValueError):
        d.quantile(1.0)
