import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ampdesign.denoisers import DenoiserState, soft_threshold_complex, soft_threshold_real
from ampdesign.priors import Domain, bernoulli_gaussian, least_favorable, make_rng, sample
from ampdesign.risk import (
    RiskParams,
    err_bg,
    err_bg_empirical,
    err_lf,
    i_integral,
    i_integral_complex,
    m_finite_mu,
    m_worst_case,
    m_worst_case_complex,
    optimal_alpha,
)
from oracles import err_bg_complex_oracle, err_bg_oracle, i_complex_tensor_oracle, i_oracle

MC_SAMPLES = 10 ** 7


# --- soft-threshold risk -------------------------------------------------------

def test_m_at_eps_one_is_one():
    alpha, m = optimal_alpha(1.0)
    assert alpha == 0.0 and m == 1.0
    alpha, m = optimal_alpha(1.0, Domain.COMPLEX)
    assert alpha == 0.0 and m == 1.0


@pytest.mark.parametrize("domain", [Domain.REAL, Domain.COMPLEX])
def test_optimal_alpha_against_grid(domain):
    f = m_worst_case_complex if domain is Domain.COMPLEX else m_worst_case
    grid = np.linspace(0, 10, 200_001)
    for eps in [0.02, 0.1, 0.3, 0.7]:
        vals = np.array([f(eps, a) for a in grid]) if domain is Domain.COMPLEX else f(eps, grid)
        alpha, m = optimal_alpha(eps, domain)
        assert abs(alpha - grid[np.argmin(vals)]) <= 1e-4
        assert m <= vals.min() + 1e-12


def test_simple_values():
    # values of the minimax risk that follow from the closed form
    assert m_worst_case(0.5, 0.0) == pytest.approx(1.0)
    assert m_worst_case_complex(0.3, 0.0) == pytest.approx(1.0)
    alpha, m = optimal_alpha(0.1)
    assert alpha == pytest.approx(1.1401711578, abs=1e-8)
    assert m == pytest.approx(0.3287935054, abs=1e-9)


@pytest.mark.parametrize("domain", [Domain.REAL, Domain.COMPLEX])
def test_minimax_risk_increases_with_eps(domain):
    ms = [optimal_alpha(e, domain)[1] for e in np.linspace(0.01, 1, 60)]
    assert np.all(np.diff(ms) > 0)
    assert ms[-1] == 1.0


def test_complex_risk_below_real():
    for eps in [0.05, 0.2, 0.5]:
        assert optimal_alpha(eps, Domain.COMPLEX)[1] < optimal_alpha(eps)[1]


@settings(max_examples=40, deadline=None)
@given(eps=st.floats(0.01, 1.0), alpha=st.floats(0, 5), mu=st.floats(0.1, 8))
def test_finite_mu_below_worst_case_and_increasing(eps, alpha, mu):
    m = m_finite_mu(eps, alpha, mu)
    assert m <= m_worst_case(eps, alpha) + 1e-12
    assert m_finite_mu(eps, alpha, mu * 1.5) >= m - 1e-12


def test_finite_mu_limit():
    for eps, alpha in [(0.1, 1.14), (0.5, 0.4), (0.9, 0.05)]:
        assert m_finite_mu(eps, alpha, 60.0) == pytest.approx(m_worst_case(eps, alpha), abs=1e-12)


def test_finite_mu_scale_invariance():
    assert m_finite_mu(0.2, 1.0, 3.0, 1.0) == pytest.approx(m_finite_mu(0.2, 1.0, 6.0, 2.0), rel=1e-14)


def _mc_tolerance(samples):
    return 5 * samples.std() / math.sqrt(samples.size)


def test_real_risk_monte_carlo():
    eps, mu = 0.1, 40.0
    alpha, m = optimal_alpha(eps)
    rng = make_rng(123)
    x = sample(least_favorable(eps, mu), MC_SAMPLES, rng=rng)
    y = x + rng.standard_normal(MC_SAMPLES)
    err = (soft_threshold_real(y, alpha) - x) ** 2
    assert abs(err.mean() - m) <= max(1e-3 * m, _mc_tolerance(err))
    assert abs(err.mean() - m_finite_mu(eps, alpha, mu)) <= max(1e-3 * m, _mc_tolerance(err))


def test_complex_risk_monte_carlo():
    # the complex finite-amplitude risk approaches its limit only like alpha * eps / mu
    eps, mu = 0.1, 1e5
    alpha, m = optimal_alpha(eps, Domain.COMPLEX)
    rng = make_rng(321)
    x = sample(least_favorable(eps, mu, Domain.COMPLEX), MC_SAMPLES, rng=rng)
    w = math.sqrt(0.5) * (rng.standard_normal(MC_SAMPLES) + 1j * rng.standard_normal(MC_SAMPLES))
    err = np.abs(soft_threshold_complex(x + w, alpha) - x) ** 2
    assert abs(err.mean() - m) <= max(1e-3 * m, _mc_tolerance(err))


def test_risk_params_dispatch():
    p = RiskParams(0.2, 1.0)
    assert p.m() == m_worst_case(0.2, 1.0)
    assert RiskParams(0.2, 1.0, domain=Domain.COMPLEX).m() == m_worst_case_complex(0.2, 1.0)
    assert RiskParams(0.2, 1.0, mu=3.0, sigma_e=2.0).threshold == 2.0
    with pytest.raises(ValueError):
        RiskParams(0.0, 1.0)


def test_err_lf_scales_with_noise():
    alpha, m = optimal_alpha(0.2)
    assert err_lf(0.2, alpha, 3.0) == pytest.approx(3 * m)


# --- Bernoulli-Gaussian integrals ----------------------------------------------

def test_i_integral_against_quad():
    rng = np.random.default_rng(7)
    for R, eps in zip(rng.uniform(0.05, 0.995, 20), rng.uniform(0.01, 0.99, 20)):
        assert abs(i_integral(R, eps) - i_oracle(R, eps)) <= 1e-6


def test_i_complex_against_tensor():
    rng = np.random.default_rng(8)
    for R, eps in zip(rng.uniform(0.05, 0.99, 10), rng.uniform(0.01, 0.99, 10)):
        assert abs(i_integral_complex(R, eps) - i_complex_tensor_oracle(R, eps)) <= 1e-6


def test_i_integrals_at_eps_one():
    assert i_integral(0.3, 1.0) == 1.0
    assert i_integral_complex(0.3, 1.0) == 1.0
    with pytest.raises(ValueError):
        i_integral(1.0, 0.5)


@settings(max_examples=30, deadline=None)
@given(R=st.floats(0.01, 0.99), eps=st.floats(0.01, 1.0))
def test_i_integral_bounds(R, eps):
    # 0 < I <= 1 since the denominator is at least 1
    for f in (i_integral, i_integral_complex):
        v = f(R, eps)
        assert 0.0 < v <= 1.0 + 1e-12


def test_err_bg_against_bruteforce():
    rng = np.random.default_rng(9)
    for eps, sx2, se2 in zip(rng.uniform(0.02, 0.98, 20), rng.uniform(0.2, 5, 20), rng.uniform(0.005, 2, 20)):
        assert abs(err_bg(eps, sx2, se2) - err_bg_oracle(eps, sx2, se2)) <= 1e-6


def test_err_bg_complex_against_bruteforce():
    rng = np.random.default_rng(10)
    for eps, sx2, se2 in zip(rng.uniform(0.02, 0.98, 6), rng.uniform(0.2, 5, 6), rng.uniform(0.005, 2, 6)):
        assert abs(err_bg(eps, sx2, se2, Domain.COMPLEX) - err_bg_complex_oracle(eps, sx2, se2)) <= 1e-6


def test_err_bg_gaussian_limit():
    sx2, se2 = 2.0, 0.5
    assert err_bg(1.0, sx2, se2) == pytest.approx(sx2 * se2 / (sx2 + se2), rel=1e-14)
    assert err_bg(1.0, sx2, se2, Domain.COMPLEX) == pytest.approx(sx2 * se2 / (sx2 + se2), rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(eps=st.floats(0.01, 1.0), se2=st.floats(1e-3, 10))
def test_err_bg_below_prior_and_noise(eps, se2):
    e = err_bg(eps, 1.0, se2)
    assert 0 <= e <= min(eps, se2) + 1e-12


def test_err_bg_empirical_matches():
    eps, sx2, se2 = 0.1, 1.0, 0.05
    for domain in (Domain.REAL, Domain.COMPLEX):
        p = bernoulli_gaussian(eps, sx2, domain)
        rng = make_rng(4)
        n = 2_000_000
        x = sample(p, n, rng=rng)
        if domain is Domain.COMPLEX:
            w = math.sqrt(se2 / 2) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        else:
            w = math.sqrt(se2) * rng.standard_normal(n)
        est = err_bg_empirical(x + w, DenoiserState(p, se2), domain)
        assert est == pytest.approx(err_bg(eps, sx2, se2, domain), rel=0.01)
