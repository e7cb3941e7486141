"""Optimal measurement ratio for each signal model.

For a fixed point of state evolution with ``sigma_w2 = delta * sigma0_2``
the ratio solves ``sigma0_2 * delta**2 - s * delta + err(s) = 0`` with
``s = sigma_e_inf2``. The smallest MSE that is reachable at all is the one
where this quadratic has a double root, ``s**2 = 4 * sigma0_2 * err(s)``;
the optimal ratio is then ``s / (2 * sigma0_2)``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import enum
import math

import numpy as np

from . import risk
from .numerics import bisect_root
from .priors import Domain


class DesignMethod(enum.Enum):
    CLOSED_FORM_GAUSSIAN = "closed_form_gaussian"
    CLOSED_FORM_LF = "closed_form_lf"
    BISECTION_BG = "bisection_bg"


class NoBracket(RuntimeError):
    pass


@dataclass(frozen=True)
class DesignResult:
    delta_dagger: float
    sigma_e_inf2: float
    err_min: float
    method: DesignMethod
    under_one: bool
    under_two: bool
    # every sign change of the critical function seen on the scan grid (BG only)
    brackets: tuple = field(default=(), compare=False)


def design_gaussian(sigma_x2, sigma0_2):
    if not (sigma_x2 > 0 and sigma0_2 > 0):
        raise ValueError("variances must be positive")
    c1 = sigma_x2 / sigma0_2
    delta = (math.sqrt(c1 * c1 + 16.0 * c1) - c1) / 4.0
    s2 = 2.0 * sigma0_2 * delta
    err = s2 * s2 / (4.0 * sigma0_2)
    return DesignResult(delta, s2, err, DesignMethod.CLOSED_FORM_GAUSSIAN,
                        under_one=c1 < 2.0, under_two=delta < 2.0)


def design_lf(epsilon, domain=Domain.REAL, sigma0_2=1.0):
    """Least-favorable design. The ratio depends on ``epsilon`` only; ``sigma0_2``
    just scales the reported error and noise level."""
    _, m = risk.optimal_alpha(epsilon, domain)
    delta = 2.0 * m
    err = m * delta * delta * sigma0_2 / (delta - m)
    return DesignResult(delta, 2.0 * delta * sigma0_2, err, DesignMethod.CLOSED_FORM_LF,
                        under_one=m < 0.5, under_two=delta < 2.0)


def critical_function(s, epsilon, sigma_x2, sigma0_2, domain=Domain.REAL):
    """``s**2 - 4 sigma0_2 err(s)``: negative while ``err(s)`` is unreachable."""
    return s * s - 4.0 * sigma0_2 * risk.err_bg(epsilon, sigma_x2, s, domain)


def design_bg(epsilon, sigma_x2, sigma0_2, domain=Domain.REAL, scan_points=200, tol=1e-14):
    """Bernoulli-Gaussian design by a log-grid scan for sign changes of the
    critical function followed by bisection on the first one."""
    if not (sigma_x2 > 0 and sigma0_2 > 0):
        raise ValueError("variances must be positive")
    domain = Domain.parse(domain)
    h = lambda s: critical_function(s, epsilon, sigma_x2, sigma0_2, domain)
    grid = np.logspace(-6, 3, scan_points) * sigma_x2
    values = np.array([h(s) for s in grid])
    flips = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
    if flips.size == 0:
        raise NoBracket(
            f"no sign change of the critical function on [{grid[0]:g}, {grid[-1]:g}] "
            f"(eps={epsilon}, sigma_x2={sigma_x2}, sigma0_2={sigma0_2}); "
            f"h ranges over [{values.min():g}, {values.max():g}]"
        )
    brackets = tuple((float(grid[i]), float(grid[i + 1])) for i in flips)
    lo, hi = brackets[0]
    s = bisect_root(h, lo, hi, tol=tol * hi)
    err = risk.err_bg(epsilon, sigma_x2, s, domain)
    R = sigma_x2 / (s + sigma_x2)
    I = risk.i_integral_complex(R, epsilon) if domain is Domain.COMPLEX else risk.i_integral(R, epsilon)
    delta = s / (2.0 * sigma0_2)
    return DesignResult(
        delta, s, err, DesignMethod.BISECTION_BG,
        under_one=sigma_x2 < sigma0_2 / (epsilon * (1.0 - R * I)),
        under_two=delta < 2.0,
        brackets=brackets,
    )


@dataclass(frozen=True)
class RegionCell:
    sigma0_2: float
    epsilon: float
    result: DesignResult = None
    error: str = ""

    @property
    def delta_dagger(self):
        return self.result.delta_dagger if self.result is not None else math.nan

    @property
    def under_one(self):
        return self.result is not None and self.result.under_one


def region_sweep_bg(sigma_x2, sigma0_grid, epsilon_grid, domain=Domain.REAL, workers=1):
    """``design_bg`` over the (sigma0_2, epsilon) grid, row-major in ``sigma0_grid``.

    A cell whose design fails keeps its error message instead of aborting
    the sweep.
    """
    cells = [(float(s0), float(e)) for s0 in sigma0_grid for e in epsilon_grid]
    if not cells:
        raise ValueError("grids must be non-empty")

    def run(cell):
        s0, e = cell
        try:
            return RegionCell(s0, e, design_bg(e, sigma_x2, s0, domain))
        except NoBracket as exc:
            return RegionCell(s0, e, None, str(exc))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, cells))
    return [run(c) for c in cells]
