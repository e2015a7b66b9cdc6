"""Rician-faded power gains of a single wireless link."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import ncx2


@dataclass(frozen=True)
class RicianLink:
    """One fading link with Rician factor ``k_factor`` and mean power gain ``mean_power``.

    ``mean_power`` is E[|h|^2]. Figure captions quote the amplitude, so a caption
    value of 3 corresponds to ``mean_power=9``.
    """

    k_factor: float
    mean_power: float

    def __post_init__(self):
        if not (self.k_factor >= 0 and math.isfinite(self.k_factor)):
            raise ValueError(f"k_factor must be finite and >= 0, got {self.k_factor}")
        if not (self.mean_power > 0 and math.isfinite(self.mean_power)):
            raise ValueError(f"mean_power must be finite and > 0, got {self.mean_power}")

    @classmethod
    def from_amplitude(cls, k_factor: float, omega: float) -> "RicianLink":
        return cls(k_factor, omega * omega)

    @property
    def rate(self) -> float:
        """Exponential rate constant (1 + K) / mean power."""
        return (1.0 + self.k_factor) / self.mean_power

    @property
    def prefactor(self) -> float:
        """``rate * exp(-K)``, the leading constant of the series density."""
        return self.rate * math.exp(-self.k_factor)

    @property
    def los_amplitude(self) -> float:
        return math.sqrt(self.k_factor * self.mean_power / (1.0 + self.k_factor))

    @property
    def scatter_std(self) -> float:
        """Per-component standard deviation of the diffuse Gaussian part."""
        return math.sqrt(self.mean_power / (2.0 * (1.0 + self.k_factor)))


def survival(link: RicianLink, x):
    """P(|h|^2 > x), i.e. Q1(sqrt(2K), sqrt(2 a x)).

    Evaluated as the tail of a noncentral chi-square with two degrees of
    freedom (2 a |h|^2 has that law with noncentrality 2K). Accepts arrays.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("survival is defined for x >= 0 only")
    out = ncx2.sf(2.0 * link.rate * x, 2, 2.0 * link.k_factor)
    return out if out.ndim else float(out)


def cdf(link: RicianLink, x):
    s = survival(link, x)
    return 1.0 - s


def sample_power_gain(link: RicianLink, rng: np.random.Generator, size=None):
    """Draw |mu + g|^2 with a real line-of-sight mean and complex Gaussian scatter."""
    sigma = link.scatter_std
    re = link.los_amplitude + sigma * rng.standard_normal(size)
    im = sigma * rng.standard_normal(size)
    return re * re + im * im


def mean_power_check(link: RicianLink) -> float:
    """Closed-form E[|h|^2] = mu^2 + 2 sigma^2 (equals ``mean_power``)."""
    return link.los_amplitude**2 + 2.0 * link.scatter_std**2
