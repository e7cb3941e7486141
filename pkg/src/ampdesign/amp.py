"""AMP / complex AMP reconstruction and a Monte Carlo harness against state evolution."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import enum
import math
import os

import numpy as np

from . import denoisers, risk
from .priors import Domain, PriorKind, bernoulli_gaussian, make_rng, sample, second_moment
from .state_evolution import Diverged, se_fixed_point_mse, se_run

THREADS_ENV = "AMPDESIGN_THREADS"
BLOWUP_FACTOR = 1e6


class NumericalBlowup(ArithmeticError):
    pass


class SigmaEstimator(enum.Enum):
    RESIDUAL_NORM = "residual"
    THEORETICAL_SE = "se"


@dataclass(frozen=True)
class AMPConfig:
    """Reconstruction settings.

    ``threshold_alpha=None`` uses the minimax multiplier for the prior's
    sparsity. ``denoiser`` is ``"auto"`` (soft threshold for least-favorable
    priors, posterior mean otherwise), ``"soft"`` or ``"bayes"``.
    """

    max_iter: int = 100
    rel_tol: float = 1e-6
    sigma_e_estimator: SigmaEstimator = SigmaEstimator.RESIDUAL_NORM
    threshold_alpha: float = None
    denoiser: str = "auto"
    onsager: bool = True

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.denoiser not in ("auto", "soft", "bayes"):
            raise ValueError(f"unknown denoiser {self.denoiser!r}")


@dataclass
class Instance:
    A: np.ndarray
    x_true: np.ndarray
    y: np.ndarray
    w: np.ndarray
    delta: float
    noise: object
    seed: int

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]


@dataclass(frozen=True)
class TrialRecord:
    delta: float
    n: int
    seed: int
    iters_used: int
    empirical_mse: float
    se_predicted_mse: float
    failed: bool = False


def _gaussian(rng, shape, var, complex_):
    if complex_:
        scale = math.sqrt(var / 2.0)
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return math.sqrt(var) * rng.standard_normal(shape)


def make_instance(prior, n, delta, noise, seed):
    """Draw ``x ~ prior``, an m x n matrix with i.i.d. entries of variance 1/m and the noise."""
    m = max(1, int(round(delta * n)))
    rng = make_rng(seed)
    cplx = prior.is_complex
    x = sample(prior, n, rng=rng)
    A = _gaussian(rng, (m, n), 1.0 / m, cplx)
    w = _gaussian(rng, m, noise.sigma_w2(delta), cplx)
    return Instance(A=A, x_true=x, y=A @ x + w, w=w, delta=delta, noise=noise, seed=seed)


def estimate_sigma_e(r, mode=SigmaEstimator.RESIDUAL_NORM, se_value=None):
    """Equivalent-noise variance: ``||r||^2 / m``, or the supplied state-evolution value."""
    r = np.asarray(r)
    if r.size == 0:
        raise ValueError("residual must be non-empty")
    if SigmaEstimator(mode) is SigmaEstimator.THEORETICAL_SE:
        if se_value is None:
            raise ValueError("state-evolution mode needs se_value")
        return float(se_value)
    return float(np.vdot(r, r).real) / r.size


def _make_denoiser(prior, cfg):
    """Return ``f(beta, sigma_e2) -> (estimate, mean Onsager slope)``."""
    kind = cfg.denoiser
    if kind == "auto":
        kind = "soft" if prior.kind is PriorKind.LEAST_FAVORABLE else "bayes"
    cplx = prior.is_complex

    if kind == "soft":
        alpha = cfg.threshold_alpha
        if alpha is None:
            alpha, _ = risk.optimal_alpha(prior.epsilon, prior.domain)

        def soft(beta, s2):
            lam = alpha * math.sqrt(s2)
            if cplx:
                drr, _, _, dii = denoisers.soft_threshold_complex_partials(beta, lam)
                return denoisers.soft_threshold_complex(beta, lam), 0.5 * float(np.mean(drr + dii))
            return (denoisers.soft_threshold_real(beta, lam),
                    float(np.mean(denoisers.soft_threshold_real_deriv(beta, lam))))

        return soft

    if prior.kind is PriorKind.LEAST_FAVORABLE:
        raise ValueError("posterior-mean denoiser needs a Gaussian or Bernoulli-Gaussian prior")

    def bayes(beta, s2):
        st = denoisers.DenoiserState(prior, s2)
        if cplx:
            drr, _, _, dii = denoisers.bg_eta_complex_partials(beta, st)
            return denoisers.bg_eta_complex(beta, st), 0.5 * float(np.mean(drr + dii))
        return denoisers.bg_eta_real(beta, st), float(np.mean(denoisers.bg_eta_real_deriv(beta, st)))

    return bayes


def amp_run(inst, prior, cfg=AMPConfig()):
    """Run AMP on ``inst`` with the denoiser matched to ``prior``.

    Starts from ``x = 0``, ``r = y``. Returns ``(x_hat, mse_trace)`` where
    ``mse_trace[t]`` is ``||x_true - x^{t+1}||^2 / n``.
    """
    A, y, x_true = inst.A, inst.y, inst.x_true
    m, n = A.shape
    ratio = m / n
    denoise = _make_denoiser(prior, cfg)
    AH = A.conj().T

    se_sigma = None
    if cfg.sigma_e_estimator is SigmaEstimator.THEORETICAL_SE:
        try:
            se_sigma = se_run(prior, inst.delta, inst.noise, max_iter=cfg.max_iter).sigma_e2
        except Diverged as exc:
            se_sigma = exc.trace.sigma_e2

    scale = max(float(np.linalg.norm(x_true)), math.sqrt(n * second_moment(prior)))
    x = np.zeros(n, dtype=A.dtype)
    r = y.copy()
    trace = []
    for t in range(cfg.max_iter):
        beta = AH @ r + x
        se_value = se_sigma[min(t, len(se_sigma) - 1)] if se_sigma is not None else None
        s2 = estimate_sigma_e(r, cfg.sigma_e_estimator, se_value)
        s2 = max(s2, 1e-300)
        x_new, slope = denoise(beta, s2)
        r_new = y - A @ x_new
        if cfg.onsager:
            r_new = r_new + (slope / ratio) * r
        r = r_new
        trace.append(float(np.vdot(x_new - x_true, x_new - x_true).real) / n)
        norm_new = float(np.linalg.norm(x_new))
        if not math.isfinite(norm_new) or norm_new > BLOWUP_FACTOR * scale:
            raise NumericalBlowup(f"iterate norm {norm_new:g} exceeds {BLOWUP_FACTOR:g} x signal scale")
        step = float(np.linalg.norm(x_new - x))
        x = x_new
        if step <= cfg.rel_tol * max(norm_new, 1e-300):
            break
    return x, trace


def default_workers():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def monte_carlo(prior, n, delta_grid, noise, trials, base_seed=0, cfg=AMPConfig(),
                signal_prior=None, workers=None):
    """Independent AMP trials at each delta, paired with state-evolution predictions.

    ``prior`` selects the denoiser and the prediction; ``signal_prior``
    (default ``prior``) generates the signal, e.g. a large-variance
    Bernoulli-Gaussian stand-in for the least-favorable law. Trial ``k``
    uses seed ``base_seed + k`` at every delta. Records are ordered by
    (delta index, trial index) regardless of ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    signal_prior = prior if signal_prior is None else signal_prior
    workers = default_workers() if workers is None else workers
    deltas = [float(d) for d in delta_grid]
    predictions = {d: se_fixed_point_mse(prior, d, noise) for d in deltas}

    def one(job):
        d, k = job
        seed = base_seed + k
        inst = make_instance(signal_prior, n, d, noise, seed)
        try:
            _, trace = amp_run(inst, prior, cfg)
        except NumericalBlowup:
            return TrialRecord(d, n, seed, 0, math.nan, predictions[d], failed=True)
        return TrialRecord(d, n, seed, len(trace), trace[-1], predictions[d])

    jobs = [(d, k) for d in deltas for k in range(trials)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, jobs))
    return [one(j) for j in jobs]


@dataclass(frozen=True)
class DeltaSummary:
    delta: float
    err_se: float
    err_empirical: float
    stderr: float
    fail_count: int
    trials: int


def summarize(records):
    """Per-delta mean and standard error of the empirical MSE, in first-seen delta order."""
    groups = {}
    for rec in records:
        groups.setdefault(rec.delta, []).append(rec)
    out = []
    for d, recs in groups.items():
        ok = np.array([r.empirical_mse for r in recs if not r.failed])
        fails = len(recs) - ok.size
        if ok.size:
            mean = float(ok.mean())
            se = float(ok.std(ddof=1) / math.sqrt(ok.size)) if ok.size > 1 else 0.0
        else:
            mean = se = math.nan
        out.append(DeltaSummary(d, recs[0].se_predicted_mse, mean, se, fails, len(recs)))
    return out


def lf_surrogate(epsilon, sigma_x2=100.0, domain=Domain.REAL):
    """Large-variance Bernoulli-Gaussian signal standing in for the least-favorable law."""
    return bernoulli_gaussian(epsilon, sigma_x2, domain)
