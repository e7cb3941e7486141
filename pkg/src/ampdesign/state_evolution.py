"""State evolution of AMP under a measurement-dependent noise level.

The recursion tracks the equivalent-noise variance ``sigma_e2`` seen by the
denoiser::

    sigma_e2[t+1] = err(sigma_e2[t]) / delta + sigma_w2
    sigma_e2[0]   = E|X|^2 / delta + sigma_w2

where ``err`` is the one-step MSE of the denoiser matched to the prior.
"""

from dataclasses import dataclass, field
import enum
import math

from . import risk
from .priors import Domain, Prior, PriorKind, second_moment

DIVERGENCE_GROWTH = 1e6
DIVERGENCE_STREAK = 50


class NoiseRule(enum.Enum):
    QUADRATIC_SNR = "quadratic"
    CONSTANT = "constant"


@dataclass(frozen=True)
class NoiseModel:
    """Noise base level; under ``QUADRATIC_SNR`` the noise variance is ``delta * sigma0_2``."""

    sigma0_2: float
    rule: NoiseRule = NoiseRule.QUADRATIC_SNR

    def __post_init__(self):
        if self.sigma0_2 < 0:
            raise ValueError("sigma0_2 must be non-negative")

    def sigma_w2(self, delta):
        if self.rule is NoiseRule.QUADRATIC_SNR:
            return delta * self.sigma0_2
        return self.sigma0_2


@dataclass(frozen=True)
class SEState:
    t: int
    sigma_e2: float
    err: float


@dataclass
class SETrace:
    delta: float
    states: list = field(default_factory=list)
    converged: bool = False

    @property
    def fixed_point(self):
        return self.states[-1] if self.converged else None

    @property
    def sigma_e2(self):
        return [s.sigma_e2 for s in self.states]

    @property
    def errs(self):
        return [s.err for s in self.states]


class Diverged(ArithmeticError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


def one_step_mse(prior, sigma_e2, finite_mu=False):
    """MSE of the prior-matched denoiser applied to X + N(0, sigma_e2)."""
    if prior.kind is PriorKind.GAUSSIAN:
        return prior.sigma_x2 * sigma_e2 / (prior.sigma_x2 + sigma_e2)
    if prior.kind is PriorKind.BERNOULLI_GAUSSIAN:
        return risk.err_bg(prior.epsilon, prior.sigma_x2, sigma_e2, prior.domain)
    if finite_mu:
        if prior.is_complex:
            raise NotImplementedError("finite-amplitude state evolution is real-domain only")
        sigma_e = math.sqrt(sigma_e2)
        _, m = risk.optimal_alpha_finite_mu(prior.epsilon, prior.mu, sigma_e)
        return m * sigma_e2
    alpha, _ = risk.optimal_alpha(prior.epsilon, prior.domain)
    return risk.err_lf(prior.epsilon, alpha, sigma_e2, prior.domain)


def se_run(prior, delta, noise, max_iter=10_000, tol=1e-12, finite_mu=False):
    """Iterate state evolution until the relative change of ``sigma_e2`` is at most ``tol``.

    Raises ``Diverged`` (carrying the partial trace) when the variance grows
    past ``DIVERGENCE_GROWTH`` times its initial value or increases for
    ``DIVERGENCE_STREAK`` consecutive steps.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    sw2 = noise.sigma_w2(delta)
    ex2 = second_moment(prior)
    s2 = ex2 / delta + sw2
    trace = SETrace(delta=delta, states=[SEState(0, s2, ex2)])
    s0 = s2
    streak = 0
    monotone = True
    for t in range(1, max_iter + 1):
        err = one_step_mse(prior, s2, finite_mu)
        new = err / delta + sw2
        trace.states.append(SEState(t, new, err))
        change = new - s2
        if change > tol * s2:
            monotone = False
            streak += 1
        else:
            streak = 0
        if new > DIVERGENCE_GROWTH * s0 or streak >= DIVERGENCE_STREAK:
            raise Diverged(f"state evolution diverges at delta={delta:g}", trace)
        # noiseless runs can converge to zero variance
        if abs(change) <= tol * s2 or new <= 1e-15 * s0:
            trace.converged = monotone
            return trace
        s2 = new
    return trace


def se_fixed_point_mse(prior, delta, noise, **kwargs):
    """Fixed-point MSE, or NaN when state evolution diverges or fails to settle."""
    try:
        trace = se_run(prior, delta, noise, **kwargs)
    except Diverged:
        return math.nan
    return trace.states[-1].err if trace.converged else math.nan


def gaussian_fixed_point(sigma_x2, delta, noise):
    """Closed-form fixed point ``(sigma_e_inf2, err_inf)`` for a Gaussian signal."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    sw2 = noise.sigma_w2(delta)
    c = (1.0 - delta) / delta
    a = c * sigma_x2 + sw2
    b = 4.0 * sigma_x2 * sw2
    root = math.sqrt(a * a + b)
    # (a + root) / 2 without cancellation when a < 0
    s2 = 0.5 * (a + root) if a >= 0 else 0.5 * b / (root - a) if b > 0 else 0.0
    return s2, delta * (s2 - sw2)


def rmt_gaussian_mse(sigma_x2, sigma_w2, delta):
    """Asymptotic MMSE of linear estimation with an i.i.d. Gaussian matrix."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    c = (1.0 - delta) / delta
    return 0.5 * delta * ((-sigma_w2 + c * sigma_x2)
                          + math.sqrt((sigma_w2 + c * sigma_x2) ** 2 + 4.0 * sigma_w2 * sigma_x2))
