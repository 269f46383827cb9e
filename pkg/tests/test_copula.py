"""Clayton generator identities, Kendall radial distribution, sampler laws."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import kendalltau, kstest

from costeff.copula import (
    ClaytonParams,
    copula_cdf,
    generator,
    inverse_generator,
    inverse_generator_derivative,
    radial_cdf,
    radial_quantile,
    sample,
)

KS_CRIT_1PCT = 1.6276  # asymptotic Kolmogorov critical value at the 1% level

alphas = st.one_of(st.floats(0.05, 30.0), st.floats(-0.95, -0.05))


def test_generator_hand_values():
    assert generator(1.0, ClaytonParams(5.0)) == 0.0
    assert generator(0.5, ClaytonParams(1.0)) == pytest.approx(1.0, rel=1e-14)
    # (0.25^{0.5} - 1) / (-0.5) = (-0.5)/(-0.5); the generator is nonnegative
    assert generator(0.25, ClaytonParams(-0.5)) == pytest.approx(1.0, rel=1e-14)


def test_generator_strictly_decreasing():
    us = np.linspace(0.01, 1.0, 200)
    for a in (-0.9, -0.3, 0.5, 2.0, 20.0):
        vals = generator(us, ClaytonParams(a))
        assert np.all(np.diff(vals) < 0)
        assert np.all(vals >= 0.0)


def test_generator_domain_errors():
    with pytest.raises(ValueError):
        generator(0.0, ClaytonParams(1.0))
    with pytest.raises(ValueError):
        generator(1.5, ClaytonParams(1.0))


def test_inverse_generator_hand_values():
    assert inverse_generator(0.0, ClaytonParams(2.5)) == pytest.approx(1.0, rel=1e-14)
    assert inverse_generator(1.0, ClaytonParams(1.0)) == pytest.approx(0.5, rel=1e-14)
    with pytest.raises(ValueError):
        inverse_generator(2.1, ClaytonParams(-0.5))  # 1 + alpha t <= 0


@settings(max_examples=300, deadline=None)
@given(u=st.floats(1e-3, 1.0), alpha=alphas)
def test_generator_roundtrip(u, alpha):
    p = ClaytonParams(alpha)
    assert inverse_generator(generator(u, p), p) == pytest.approx(u, abs=1e-12, rel=1e-12)


def test_inverse_generator_derivative_hand_value():
    assert inverse_generator_derivative(0.0, ClaytonParams(1.0), 1) == pytest.approx(-1.0)


@pytest.mark.parametrize(
    "t,alpha,k,rel_tol",
    [(0.5, 1.0, 1, 1e-6), (0.2, 2.0, 2, 1e-4), (0.3, 5.0, 3, 1e-4), (0.4, -0.4, 2, 1e-4)],
)
def test_inverse_generator_derivative_vs_finite_difference(t, alpha, k, rel_tol):
    p = ClaytonParams(alpha)
    h = 1e-6 if k == 1 else (1e-4 if k == 2 else 1e-3)
    # central finite-difference stencils (weights at offsets)
    stencils = {
        1: ([-0.5, 0.5], [-1, 1]),
        2: ([1.0, -2.0, 1.0], [-1, 0, 1]),
        3: ([-0.5, 1.0, -1.0, 0.5], [-2, -1, 1, 2]),
    }
    weights, offsets = stencils[k]
    fd = sum(w * inverse_generator(t + o * h, p) for w, o in zip(weights, offsets)) / h**k
    exact = inverse_generator_derivative(t, p, k)
    assert exact == pytest.approx(fd, rel=rel_tol)


def test_copula_cdf_values():
    assert copula_cdf([1.0, 1.0, 1.0, 1.0], ClaytonParams(3.0)) == 1.0
    assert copula_cdf([0.5, 0.5], ClaytonParams(1.0)) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert copula_cdf([0.7, 0.0], ClaytonParams(2.0)) == 0.0


def test_copula_cdf_two_increasing():
    # rectangle inequality C(b1,b2) - C(a1,b2) - C(b1,a2) + C(a1,a2) >= 0
    p = ClaytonParams(2.5)
    grid = np.linspace(0.05, 0.95, 10)
    for i in range(len(grid) - 1):
        for j in range(len(grid) - 1):
            a1, b1 = grid[i], grid[i + 1]
            a2, b2 = grid[j], grid[j + 1]
            mass = (
                copula_cdf([b1, b2], p)
                - copula_cdf([a1, b2], p)
                - copula_cdf([b1, a2], p)
                + copula_cdf([a1, a2], p)
            )
            assert mass >= -1e-12


def test_radial_cdf_boundary_and_monotone():
    assert radial_cdf(1.0, ClaytonParams(3.0), 4) == 1.0
    vs = np.linspace(1e-3, 1.0, 1000)
    vals = radial_cdf(vs, ClaytonParams(5.0), 10)
    # non-decreasing up to series round-off (a few ulps near the plateau at 1)
    assert np.all(np.diff(vals) >= -1e-12)
    assert vals[-1] == pytest.approx(1.0, abs=1e-12)


def test_radial_cdf_bivariate_closed_form_and_quadrature():
    # N=2, alpha=1: F(v) = v + v^2 phi(v) = 2v - v^2; quadrature of the density
    # (-1)^{N-1} phi^{-1(N)}(phi(w)) phi(w)^{N-1} phi'(w) / (N-1)! gives the same
    p = ClaytonParams(1.0)
    v = 0.5
    assert radial_cdf(v, p, 2) == pytest.approx(0.75, abs=1e-12)
    w = np.linspace(1e-9, v, 1_000_001)
    phi_w = generator(w, p)
    dens = -inverse_generator_derivative(phi_w, p, 2) * phi_w * (-(w ** (-2.0)))
    quad = np.trapezoid(dens, w)
    assert quad == pytest.approx(0.75, abs=1e-6)


def test_radial_quantile_roundtrip_and_boundary():
    p = ClaytonParams(5.0)
    v = radial_quantile(0.5, p, 10)
    assert radial_cdf(v, p, 10) == pytest.approx(0.5, abs=1e-10)
    # w -> 1- pushes v toward 1 (up to the |F - w| <= 1e-10 stopping rule,
    # which is reached early on the flat shoulder of F near 1)
    ws = [0.9, 0.99, 1.0 - 1e-7]
    vs = [radial_quantile(w, p, 10) for w in ws]
    assert vs == sorted(vs)
    for w, v in zip(ws, vs):
        assert radial_cdf(v, p, 10) == pytest.approx(w, abs=1e-10)


def test_radial_quantile_matches_bivariate_inverse():
    # alpha=1, N=2: F(v) = 2v - v^2 so F^{-1}(w) = 1 - sqrt(1 - w)
    v = radial_quantile(0.25, ClaytonParams(1.0), 2)
    assert v == pytest.approx(1.0 - math.sqrt(0.75), abs=1e-9)


def test_sample_deterministic_and_in_range():
    p = ClaytonParams(5.0)
    s1 = sample(500, 4, p, 123)
    s2 = sample(500, 4, p, 123)
    assert np.array_equal(s1.values, s2.values)
    assert s1.values.shape == (500, 4)
    assert np.all((s1.values > 0.0) & (s1.values < 1.0))
    s3 = sample(500, 4, p, 124)
    assert not np.array_equal(s1.values, s3.values)


def test_sample_marginals_uniform():
    s = sample(20_000, 10, ClaytonParams(5.0), 7)
    for k in (0, 4, 9):
        stat = kstest(s.values[:, k], "uniform").statistic
        assert stat * math.sqrt(20_000) < KS_CRIT_1PCT


@pytest.mark.parametrize("alpha", [1.0, 5.0, 20.0])
def test_sample_kendall_tau(alpha):
    s = sample(20_000, 3, ClaytonParams(alpha), 11)
    tau = kendalltau(s.values[:, 0], s.values[:, 1]).statistic
    assert tau == pytest.approx(alpha / (alpha + 2.0), abs=0.02)


def test_sample_exchangeable_pairs():
    s = sample(20_000, 5, ClaytonParams(5.0), 13)
    taus = [
        kendalltau(s.values[:, i], s.values[:, j]).statistic
        for i, j in ((0, 1), (1, 2), (0, 4), (2, 3))
    ]
    assert max(taus) - min(taus) < 0.04


def test_sample_empirical_joint_cdf_matches_copula():
    # the whole joint law, not just pairwise concordance: the empirical CDF
    # of sampled triples matches the closed-form copula within binomial noise
    n = 20_000
    p = ClaytonParams(5.0)
    s = sample(n, 3, p, 29)
    for point in ([0.3, 0.5, 0.7], [0.2, 0.2, 0.2], [0.8, 0.6, 0.9], [0.5, 0.5, 0.5]):
        emp = float(np.mean(np.all(s.values <= np.asarray(point), axis=1)))
        theo = copula_cdf(point, p)
        se = math.sqrt(theo * (1.0 - theo) / n)
        assert abs(emp - theo) < 4 * se + 1e-12


def test_kendall_tau_brute_force_concordance():
    # O(n^2) concordance count agrees with the library statistic
    s = sample(1500, 2, ClaytonParams(5.0), 17)
    x, y = s.values[:, 0], s.values[:, 1]
    dx = np.sign(x[:, None] - x[None, :])
    dy = np.sign(y[:, None] - y[None, :])
    n = x.size
    tau_brute = (dx * dy).sum() / (n * (n - 1))
    assert kendalltau(x, y).statistic == pytest.approx(tau_brute, abs=1e-10)


def test_sample_independent_mode():
    s = sample(20_000, 3, None, 19, independent=True)
    stat = kstest(s.values[:, 1], "uniform").statistic
    assert stat * math.sqrt(20_000) < KS_CRIT_1PCT
    tau = kendalltau(s.values[:, 0], s.values[:, 1]).statistic
    assert abs(tau) < 0.02


def test_sample_warns_below_validity_floor():
    with pytest.warns(UserWarning, match="not a proper copula"):
        sample(100, 10, ClaytonParams(-0.9), 23)


def test_invalid_alpha_rejected():
    for bad in (0.0, -1.5, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            ClaytonParams(bad)


def test_sample_shape_validation():
    with pytest.raises(ValueError):
        sample(0, 3, ClaytonParams(1.0), 1)
    with pytest.raises(ValueError):
        sample(10, 1, ClaytonParams(1.0), 1)
