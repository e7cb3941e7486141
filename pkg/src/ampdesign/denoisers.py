"""Component-wise denoisers and their derivatives.

All functions are vectorised over ``beta``. The Bernoulli-Gaussian
posterior means are written as ``R * beta / (1 + v3)``, where ``v3`` is the
ratio of the "zero" and "active" mixture components; ``v3`` is formed in
log space so that neither density ever under- or overflows.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import expit

from .priors import Prior, PriorKind


@dataclass(frozen=True)
class DenoiserState:
    prior: Prior
    sigma_e2: float
    lam: float = 0.0

    def __post_init__(self):
        if not self.sigma_e2 > 0:
            raise ValueError(f"sigma_e2 must be positive, got {self.sigma_e2}")
        if self.lam < 0:
            raise ValueError("threshold must be non-negative")

    @property
    def R(self):
        sx2 = self.prior.sigma_x2
        return sx2 / (self.sigma_e2 + sx2)


def _check_bg(s):
    if s.prior.kind is PriorKind.LEAST_FAVORABLE:
        raise ValueError("posterior-mean denoiser needs a Gaussian or Bernoulli-Gaussian prior")


def _log_odds_zero(eps):
    # log((1 - eps) / eps); -inf at eps == 1
    return math.log1p(-eps) - math.log(eps) if eps < 1.0 else -math.inf


# --- soft thresholding -----------------------------------------------------

def soft_threshold_real(beta, lam):
    beta = np.asarray(beta, dtype=float)
    return np.sign(beta) * np.maximum(np.abs(beta) - lam, 0.0)


def soft_threshold_real_deriv(beta, lam):
    # 0 on the kink |beta| == lam
    return (np.abs(np.asarray(beta, dtype=float)) > lam).astype(float)


def soft_threshold_complex(beta, lam):
    beta = np.asarray(beta, dtype=complex)
    mag = np.abs(beta)
    with np.errstate(divide="ignore", invalid="ignore"):
        shrink = np.where(mag > lam, 1.0 - lam / mag, 0.0)
    return beta * shrink


def soft_threshold_complex_partials(beta, lam):
    """``(dRR, dRI, dIR, dII)`` of the complex soft threshold."""
    beta = np.asarray(beta, dtype=complex)
    br, bi = beta.real, beta.imag
    mag = np.abs(beta)
    on = mag > lam
    safe = np.where(on, mag, 1.0)
    k = lam / safe ** 3
    drr = np.where(on, 1.0 - lam / safe + k * br * br, 0.0)
    dii = np.where(on, 1.0 - lam / safe + k * bi * bi, 0.0)
    dri = np.where(on, k * br * bi, 0.0)
    return drr, dri, dri.copy(), dii


# --- Bernoulli-Gaussian posterior mean, real ---------------------------------

def _real_log_v3(beta, s):
    eps, se2, R = s.prior.epsilon, s.sigma_e2, s.R
    log_v1 = _log_odds_zero(eps) + 0.5 * math.log((se2 + s.prior.sigma_x2) / se2)
    v2 = R / se2
    return log_v1 - 0.5 * v2 * np.square(beta), v2


def bg_eta_real(beta, s):
    _check_bg(s)
    beta = np.asarray(beta, dtype=float)
    log_v3, _ = _real_log_v3(beta, s)
    return s.R * beta * expit(-log_v3)


def bg_eta_real_deriv(beta, s):
    """R/(v3+1) + R v3 v2 beta^2 / (v3+1)^2."""
    _check_bg(s)
    beta = np.asarray(beta, dtype=float)
    log_v3, v2 = _real_log_v3(beta, s)
    g = expit(-log_v3)              # 1 / (1 + v3)
    v3g2 = expit(log_v3) * g        # v3 / (1 + v3)^2
    return s.R * g + s.R * v2 * np.square(beta) * v3g2


# --- Bernoulli-Gaussian posterior mean, complex ------------------------------

def _complex_terms(beta, s):
    """Return ``(p3/p1, p_o/p1)`` with p1 = p_CG(beta; 0, se2 + sx2).

    p2/p1 is evaluated from its logarithm; p_o uses the equivalent-noise
    variance se2 in its middle term.
    """
    eps, se2, sx2 = s.prior.epsilon, s.sigma_e2, s.prior.sigma_x2
    tot = se2 + sx2
    mag2 = np.square(beta.real) + np.square(beta.imag)
    log_q = math.log(tot / se2) - mag2 * (1.0 / se2 - 1.0 / tot)
    q = np.exp(log_q)                           # p2 / p1
    p3 = (1.0 - eps) * q + eps
    po = -2.0 / tot * p3 + 2.0 * (1.0 - eps) / se2 * q + 2.0 * eps / tot
    return p3, po


def bg_eta_complex(beta, s):
    _check_bg(s)
    beta = np.asarray(beta, dtype=complex)
    p3, _ = _complex_terms(beta, s)
    return s.prior.epsilon * s.R * beta / p3


def bg_eta_complex_partials(beta, s):
    """Four partial derivatives ``(dRR, dRI, dIR, dII)`` of the complex posterior mean."""
    _check_bg(s)
    beta = np.asarray(beta, dtype=complex)
    p3, po = _complex_terms(beta, s)
    er = s.prior.epsilon * s.R
    br, bi = beta.real, beta.imag
    quad = po / np.square(p3) * er
    lin = er / p3
    drr = quad * br * br + lin
    dri = quad * br * bi
    dii = quad * bi * bi + lin
    return drr, dri, dri.copy(), dii
