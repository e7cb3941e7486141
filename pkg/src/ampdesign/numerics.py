"""Scalar special functions and 1-D numerical routines.

Everything here is a pure function of its arguments. The Gaussian density
and distribution functions accept scalars or arrays.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy import special

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NumericsError(ValueError):
    pass


class NonFinite(NumericsError):
    """Integrand returned NaN or inf inside the integration window."""


class BadBracket(NumericsError):
    pass


class NoSignChange(NumericsError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre settings.

    ``truncation_radius`` is only used by callers that integrate over the
    whole real line (in units of one standard deviation of the weight).
    """

    truncation_radius: float = 12.0
    panels: int = 2048
    abs_tol: float = 1e-10
    order: int = 10

    def __post_init__(self):
        if not self.truncation_radius > 0:
            raise ValueError("truncation_radius must be positive")
        if self.panels < 16:
            raise ValueError("panels must be >= 16")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")


DEFAULT_QUADRATURE = QuadratureSpec()


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    out = INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return float(out) if out.ndim == 0 else out


def std_normal_cdf(x):
    # ndtr goes through erfc for negative arguments, so the lower tail
    # keeps full relative precision.
    out = special.ndtr(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def _gauss_legendre(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _composite_gl(f, lo, hi, panels, order):
    nodes, weights = _gauss_legendre(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    try:
        y = np.asarray(f(x), dtype=float)
    except TypeError:
        y = None
    if y is None or y.shape != x.shape:
        y = np.vectorize(f, otypes=[float])(x)
    if not np.all(np.isfinite(y)):
        raise NonFinite(f"integrand is not finite on [{lo}, {hi}]")
    return float(np.sum(y.reshape(panels, order) * weights[None, :] * half[:, None]))


def integrate_1d(f, lo, hi, spec=DEFAULT_QUADRATURE, max_refine=4):
    """Integrate ``f`` over ``[lo, hi]`` with composite Gauss-Legendre.

    ``f`` should be vectorised (it receives a 1-D array of nodes); scalar
    callables are wrapped with ``np.vectorize``. The error is estimated by
    comparing against the rule with half as many panels, and the panel
    count is doubled (at most ``max_refine`` times) until the estimate is
    below ``spec.abs_tol``.
    """
    if lo == hi:
        return 0.0
    if lo > hi:
        return -integrate_1d(f, hi, lo, spec, max_refine)
    panels = spec.panels
    coarse = _composite_gl(f, lo, hi, panels // 2, spec.order)
    fine = _composite_gl(f, lo, hi, panels, spec.order)
    for _ in range(max_refine):
        if abs(fine - coarse) <= spec.abs_tol:
            break
        panels *= 2
        coarse, fine = fine, _composite_gl(f, lo, hi, panels, spec.order)
    return fine


def golden_minimize(f, lo, hi, tol=1e-10, max_iter=500):
    """Golden-section search for the minimum of a unimodal ``f`` on ``[lo, hi]``.

    The bracket endpoints are compared against the interior estimate at the
    end, so a minimum sitting exactly on an endpoint is returned exactly.

    Returns ``(argmin, fmin)``.
    """
    if not lo < hi:
        raise BadBracket(f"need lo < hi, got [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        it += 1
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    for x in (float(lo), float(hi)):
        fx = f(x)
        if fx <= best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def bisect_root(f, lo, hi, tol=1e-12, max_iter=200):
    """Root of ``f`` in ``[lo, hi]`` by bisection; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(f"f({lo})={flo:g} and f({hi})={fhi:g} have the same sign")
    a, b = float(lo), float(hi)
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        if b - a <= tol or mid in (a, b):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if np.sign(fm) == np.sign(flo):
            a, flo = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)
