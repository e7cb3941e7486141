"""Signal priors: Gaussian, Bernoulli-Gaussian and least-favorable.

Random streams come from numpy's Philox4x64-10 counter-based bit generator,
seeded directly with the integer seed, so a ``(prior, n, seed)`` triple
always yields the same vector.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np


class Domain(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class PriorKind(enum.Enum):
    GAUSSIAN = "gaussian"
    BERNOULLI_GAUSSIAN = "bg"
    LEAST_FAVORABLE = "lf"


@dataclass(frozen=True)
class Prior:
    """Signal distribution descriptor.

    ``sigma_x2`` is the variance of the non-zero part (total variance for
    complex values, split evenly between real and imaginary parts) and
    ``mu`` is the finite amplitude used to sample the least-favorable law.
    """

    kind: PriorKind
    domain: Domain = Domain.REAL
    epsilon: float = 1.0
    sigma_x2: float = 1.0
    mu: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.kind is PriorKind.LEAST_FAVORABLE:
            if not self.mu > 0:
                raise ValueError(f"mu must be positive, got {self.mu}")
        elif not self.sigma_x2 > 0:
            raise ValueError(f"sigma_x2 must be positive, got {self.sigma_x2}")
        if self.kind is PriorKind.GAUSSIAN and self.epsilon != 1.0:
            raise ValueError("a Gaussian prior has epsilon = 1")

    @property
    def is_complex(self):
        return self.domain is Domain.COMPLEX


def gaussian(sigma_x2=1.0, domain=Domain.REAL):
    return Prior(PriorKind.GAUSSIAN, Domain.parse(domain), 1.0, sigma_x2)


def bernoulli_gaussian(epsilon, sigma_x2=1.0, domain=Domain.REAL):
    return Prior(PriorKind.BERNOULLI_GAUSSIAN, Domain.parse(domain), epsilon, sigma_x2)


def least_favorable(epsilon, mu=10.0, domain=Domain.REAL):
    return Prior(PriorKind.LEAST_FAVORABLE, Domain.parse(domain), epsilon, mu=mu)


def second_moment(p):
    """E|X|^2 of the prior."""
    if p.kind is PriorKind.GAUSSIAN:
        return p.sigma_x2
    if p.kind is PriorKind.BERNOULLI_GAUSSIAN:
        return p.epsilon * p.sigma_x2
    return p.epsilon * p.mu ** 2


def make_rng(seed):
    return np.random.Generator(np.random.Philox(int(seed)))


def sample(p, n, seed=None, rng=None):
    """Draw ``n`` i.i.d. entries from ``p``.

    Pass either an integer ``seed`` or an existing generator ``rng``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if rng is None:
        rng = make_rng(0 if seed is None else seed)

    if p.kind is PriorKind.LEAST_FAVORABLE:
        active = rng.random(n) < p.epsilon
        if p.is_complex:
            phase = rng.uniform(0.0, 2.0 * math.pi, n)
            return np.where(active, p.mu * np.exp(1j * phase), 0.0 + 0.0j)
        sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        return np.where(active, p.mu * sign, 0.0)

    if p.is_complex:
        scale = math.sqrt(p.sigma_x2 / 2.0)
        values = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    else:
        values = math.sqrt(p.sigma_x2) * rng.standard_normal(n)
    if p.kind is PriorKind.GAUSSIAN:
        return values
    active = rng.random(n) < p.epsilon
    return np.where(active, values, 0.0)
