"""Risk functions of the soft-threshold and posterior-mean denoisers.

``m_*`` functions are normalised soft-threshold risks (MSE divided by the
equivalent-noise variance); ``err_*`` functions return per-iteration MSEs.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.special import expit

from . import denoisers
from .numerics import (
    DEFAULT_QUADRATURE,
    golden_minimize,
    integrate_1d,
    std_normal_cdf as Phi,
    std_normal_pdf as phi,
)
from .priors import Domain

ALPHA_BRACKET = (0.0, 10.0)
SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class RiskParams:
    epsilon: float
    alpha: float
    mu: float = math.inf
    sigma_e: float = 1.0
    domain: Domain = Domain.REAL

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if not self.sigma_e > 0:
            raise ValueError("sigma_e must be positive")

    @property
    def threshold(self):
        return self.alpha * self.sigma_e

    def m(self):
        if math.isinf(self.mu):
            if self.domain is Domain.COMPLEX:
                return m_worst_case_complex(self.epsilon, self.alpha)
            return m_worst_case(self.epsilon, self.alpha)
        if self.domain is Domain.COMPLEX:
            raise NotImplementedError("finite-amplitude risk is only available for real signals")
        return m_finite_mu(self.epsilon, self.alpha, self.mu, self.sigma_e)


def m_finite_mu(epsilon, alpha, mu, sigma_e=1.0):
    """Normalised risk of soft thresholding at ``alpha * sigma_e`` for the
    three-point law {-mu, 0, +mu} with weights {eps/2, 1-eps, eps/2}."""
    a, u, e = alpha, mu / sigma_e, epsilon
    a21 = a * a + 1.0
    return (
        e * a21 * Phi(-a + u)
        - e * (a + u) * phi(a - u)
        + e * u * u * (Phi(a - u) - Phi(-a - u))
        + e * a21 * Phi(-a - u)
        - e * (a - u) * phi(-a - u)
        + (1.0 - e) * (2.0 * a21 * Phi(-a) - 2.0 * a * phi(a))
    )


def m_worst_case(epsilon, alpha):
    a21 = 1.0 + alpha * alpha
    return epsilon * a21 + (1.0 - epsilon) * (2.0 * a21 * Phi(-alpha) - 2.0 * alpha * phi(alpha))


def m_worst_case_complex(epsilon, alpha):
    r2a = math.sqrt(2.0) * alpha
    zero_part = SQRT_2PI * phi(r2a) - 2.0 * alpha * SQRT_PI * Phi(-r2a)
    return epsilon * (1.0 + alpha * alpha) + (1.0 - epsilon) * zero_part


@lru_cache(maxsize=4096)
def _optimal_alpha(epsilon, domain, tol):
    m = m_worst_case_complex if domain is Domain.COMPLEX else m_worst_case
    return golden_minimize(lambda a: m(epsilon, a), *ALPHA_BRACKET, tol=tol)


def optimal_alpha(epsilon, domain=Domain.REAL, tol=1e-10):
    """Minimax threshold multiplier and the risk it attains: ``(alpha_dagger, m_value)``."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    return _optimal_alpha(float(epsilon), Domain.parse(domain), tol)


def optimal_alpha_finite_mu(epsilon, mu, sigma_e, tol=1e-10):
    """Threshold multiplier minimising ``m_finite_mu`` at the given noise level."""
    return golden_minimize(lambda a: m_finite_mu(epsilon, a, mu, sigma_e), *ALPHA_BRACKET, tol=tol)


# --- Bernoulli-Gaussian MMSE -----------------------------------------------

def _memo_key(q, epsilon):
    # q = 1 - R is kept to 12 significant digits so tiny noise levels stay distinct
    return float(f"{float(q):.12g}"), round(float(epsilon), 12)


def _check_R_eps(R, epsilon):
    if not 0.0 < R < 1.0:
        raise ValueError(f"R must lie in (0, 1), got {R}")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")


def _upper(rk, centre, width):
    # the logistic factor is negligible past its centre plus ``width``; the
    # Gaussian weight past the truncation radius in the original variable
    return min(DEFAULT_QUADRATURE.truncation_radius * rk, centre + width)


@lru_cache(maxsize=1 << 16)
def _j_real(q, epsilon):
    """``1 - I`` as a function of ``q = 1 - R``, integrated in ``u = sqrt(k) x``."""
    if epsilon == 1.0:
        return 0.0
    R = 1.0 - q
    k = R / q
    log_c = math.log1p(-epsilon) - math.log(epsilon) - 0.5 * math.log(q)
    rk = math.sqrt(k)

    def f(u):
        x = u / rk
        return x * x * phi(x) * expit(log_c - 0.5 * u * u)

    return 2.0 * integrate_1d(f, 0.0, _upper(rk, math.sqrt(2.0 * max(log_c, 0.0)), 12.0)) / rk


@lru_cache(maxsize=1 << 16)
def _j_complex(q, epsilon):
    if epsilon == 1.0:
        return 0.0
    R = 1.0 - q
    k = R / q
    log_c = math.log1p(-epsilon) - math.log(epsilon) - math.log(q)
    rk = math.sqrt(k)

    # isotropic integrand: d(area) = 2 pi r dr and phi_C = exp(-r^2) / pi
    def f(u):
        r = u / rk
        r2 = r * r
        return 2.0 * r * r2 * np.exp(-r2) * expit(log_c - u * u)

    return integrate_1d(f, 0.0, _upper(rk, math.sqrt(max(log_c, 0.0)), 9.0)) / rk


def _j(q, epsilon, domain):
    f = _j_complex if Domain.parse(domain) is Domain.COMPLEX else _j_real
    return f(*_memo_key(q, epsilon))


def i_integral(R, epsilon):
    _check_R_eps(R, epsilon)
    return 1.0 - _j(1.0 - R, epsilon, Domain.REAL)


def i_integral_complex(R, epsilon):
    _check_R_eps(R, epsilon)
    return 1.0 - _j(1.0 - R, epsilon, Domain.COMPLEX)


def err_lf(epsilon, alpha_dagger, sigma_e2, domain=Domain.REAL):
    """Worst-case (mu -> inf) MSE after one soft-threshold step."""
    m = m_worst_case_complex if Domain.parse(domain) is Domain.COMPLEX else m_worst_case
    return m(epsilon, alpha_dagger) * sigma_e2


def err_bg(epsilon, sigma_x2, sigma_e2, domain=Domain.REAL):
    """Posterior-mean MSE for a Bernoulli-Gaussian signal in Gaussian noise of variance ``sigma_e2``.

    Evaluated as ``eps * sigma_x2 * (1 - R I)`` with ``1 - R I = q + R (1 - I)``
    and ``q = 1 - R``, which keeps full relative accuracy as ``sigma_e2 -> 0``.
    """
    if not sigma_e2 > 0:
        raise ValueError(f"sigma_e2 must be positive, got {sigma_e2}")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    q = sigma_e2 / (sigma_e2 + sigma_x2)
    R = sigma_x2 / (sigma_e2 + sigma_x2)
    return epsilon * sigma_x2 * (q + R * _j(q, epsilon, domain))


def err_bg_empirical(beta, s, domain=Domain.REAL):
    """MSE estimate from the average denoiser slope over the observed inputs."""
    beta = np.asarray(beta)
    if beta.size == 0:
        raise ValueError("beta must be non-empty")
    if Domain.parse(domain) is Domain.COMPLEX:
        slope = denoisers.bg_eta_complex_partials(beta, s)[0]
    else:
        slope = denoisers.bg_eta_real_deriv(beta, s)
    return float(np.mean(slope)) * s.sigma_e2
