"""Instantaneous SNRs and achievable rates for conventional and opportunistic NOMA relaying.

All functions broadcast over numpy arrays, so a ``ChannelRealization`` whose
fields are arrays of draws is evaluated in one call.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class PowerConvention(enum.Enum):
    FULL = "full"
    SCALED = "scaled"


class Branch(enum.Enum):
    COOPERATIVE = "cooperative"
    DIRECT = "direct"


@dataclass(frozen=True)
class SystemParams:
    """NOMA power split, linear transmit SNR (noise variance 1) and power conventions.

    ``relay_power`` selects whether the relay re-transmits s2 with the full
    power P (default) or with a2 * P. ``direct_power`` does the same for the
    direct-only slot, full P or a1 * P.
    """

    a1: float
    a2: float
    rho: float
    direct_power: PowerConvention = PowerConvention.FULL
    relay_power: PowerConvention = PowerConvention.FULL

    def __post_init__(self):
        if abs(self.a1 + self.a2 - 1.0) > 1e-12:
            raise ValueError(f"a1 + a2 must equal 1, got {self.a1} + {self.a2}")
        if not (0.0 < self.a2 < self.a1):
            raise ValueError(f"need 0 < a2 < a1, got a1={self.a1}, a2={self.a2}")
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise ValueError(f"rho must be finite and > 0, got {self.rho}")

    @classmethod
    def from_a2(cls, a2: float, rho: float, **kw) -> "SystemParams":
        return cls(1.0 - a2, a2, rho, **kw)

    @classmethod
    def from_db(cls, a2: float, snr_db: float, **kw) -> "SystemParams":
        return cls.from_a2(a2, db_to_linear(snr_db), **kw)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.rho)


def db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class ChannelRealization:
    """Power gains |h_SD|^2, |h_SR|^2, |h_RD|^2 (scalars or equal-shape arrays)."""

    lam_sd: float | np.ndarray
    lam_sr: float | np.ndarray
    lam_rd: float | np.ndarray

    def __post_init__(self):
        for name in ("lam_sd", "lam_sr", "lam_rd"):
            if np.any(np.asarray(getattr(self, name)) < 0):
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class RateBreakdown:
    """Per-symbol rates in bit/s/Hz. ``cooperative`` is a bool or a bool array."""

    rate_s1: float | np.ndarray
    rate_s2: float | np.ndarray
    cooperative: bool | np.ndarray

    @property
    def sum(self):
        return self.rate_s1 + self.rate_s2

    @property
    def branch(self) -> Branch:
        if np.ndim(self.cooperative):
            raise TypeError("branch is only defined for a single realization; use .cooperative")
        return Branch.COOPERATIVE if self.cooperative else Branch.DIRECT


class SNRSet(NamedTuple):
    sr_s1: float | np.ndarray
    sr_s2: float | np.ndarray
    sd_s1: float | np.ndarray
    rd_s2: float | np.ndarray
    direct_sd_s1: float | np.ndarray


def _c(x):
    return np.log2(1.0 + x)


def _scalarize(x):
    return float(x) if np.ndim(x) == 0 else x


def snr_set(re: ChannelRealization, sys: SystemParams) -> SNRSet:
    a1, a2, rho = sys.a1, sys.a2, sys.rho
    lsd = np.asarray(re.lam_sd, dtype=float)
    lsr = np.asarray(re.lam_sr, dtype=float)
    lrd = np.asarray(re.lam_rd, dtype=float)
    sr_s1 = a1 * rho * lsr / (a2 * rho * lsr + 1.0)
    sr_s2 = a2 * rho * lsr
    sd_s1 = a1 * rho * lsd / (a2 * rho * lsd + 1.0)
    relay_scale = 1.0 if sys.relay_power is PowerConvention.FULL else a2
    direct_scale = 1.0 if sys.direct_power is PowerConvention.FULL else a1
    rd_s2 = relay_scale * rho * lrd
    direct = direct_scale * rho * lsd
    return SNRSet(*(_scalarize(v) for v in (sr_s1, sr_s2, sd_s1, rd_s2, direct)))


def cnoma_rate(re: ChannelRealization, sys: SystemParams) -> RateBreakdown:
    """Always-relayed NOMA: each symbol is limited by its weakest hop, half-slot penalty."""
    g = snr_set(re, sys)
    s1 = 0.5 * np.minimum(_c(g.sd_s1), _c(g.sr_s1))
    s2 = 0.5 * np.minimum(_c(g.sr_s2), _c(g.rd_s2))
    coop = True if np.ndim(s1) == 0 else np.ones(np.shape(s1), dtype=bool)
    return RateBreakdown(_scalarize(s1), _scalarize(s2), coop)


def onoma_rate(re: ChannelRealization, sys: SystemParams) -> RateBreakdown:
    """Opportunistic NOMA: relay only when the S-R gain strictly beats the S-D gain.

    A tie goes to the cooperative branch.
    """
    g = snr_set(re, sys)
    lsd = np.asarray(re.lam_sd, dtype=float)
    lsr = np.asarray(re.lam_sr, dtype=float)
    coop = lsd <= lsr
    # under coop, the S-D SNR is the binding one for s1
    coop_s1 = 0.5 * _c(g.sd_s1)
    coop_s2 = 0.5 * np.minimum(_c(g.sr_s2), _c(g.rd_s2))
    s1 = np.where(coop, coop_s1, _c(g.direct_sd_s1))
    s2 = np.where(coop, coop_s2, 0.0)
    if np.ndim(coop) == 0:
        return RateBreakdown(float(s1), float(s2), bool(coop))
    return RateBreakdown(s1, s2, coop)


class PaperTerms(NamedTuple):
    c_s1: float | np.ndarray
    c_s2: float | np.ndarray
    d_s1: float | np.ndarray


def paper_terms(re: ChannelRealization, sys: SystemParams) -> PaperTerms:
    """Per-realization integrands of the three averaged rate terms.

    All three use min-of-links gains: m1 = min(lam_sd, lam_sr) for both s1
    terms and m2 = min(a2 * lam_sr, lam_rd) for s2. Their expectations are
    what ``analytic.avg_rate_c_s1``, ``avg_rate_c_s2`` and ``avg_rate_d_s1``
    compute in closed form.
    """
    rho, a2 = sys.rho, sys.a2
    m1 = np.minimum(re.lam_sd, re.lam_sr)
    m2 = np.minimum(a2 * np.asarray(re.lam_sr, dtype=float), re.lam_rd)
    c_s1 = 0.5 * (np.log2(1.0 + rho * m1) - np.log2(1.0 + a2 * rho * m1))
    c_s2 = 0.5 * _c(rho * m2)
    d_s1 = _c(rho * m1)
    return PaperTerms(_scalarize(c_s1), _scalarize(c_s2), _scalarize(d_s1))
