"""Series evaluation of min-of-links CDFs and average-rate approximations.

Notation: for a link with Rician factor K and mean power P, ``a = (1 + K) / P``
and ``A = a * exp(-K)``. The power-gain density expands as
``A * sum_n B(n) x**n exp(-a x)`` with ``B(n) = (K a)**n / (n!)**2``, so the
products ``A * Bt(n) * n!`` (with ``Bt(n) = B(n) / a**(n + 1)``) are Poisson
weights ``exp(-K) K**n / n!``. Everything below is accumulated in log-space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp
from scipy.stats import poisson

from .channel import RicianLink
from .rates import PowerConvention, SystemParams

LN2 = math.log(2.0)


class SeriesTruncationError(ArithmeticError):
    """The truncated series did not reach ``term_tol`` within (n_max, k_max)."""


@dataclass(frozen=True)
class SeriesConfig:
    n_max: int = 60
    k_max: int = 60
    term_tol: float = 1e-12
    # node count of the Gauss-Chebyshev sum; 100 nodes leave ~1e-4 relative
    # error in the mid-order terms, which is visible at 1e7-sample MC precision
    quad_order: int = 1000

    def __post_init__(self):
        if self.n_max < 1 or self.k_max < 1:
            raise ValueError("n_max and k_max must be >= 1")
        if not (0.0 < self.term_tol < 1.0):
            raise ValueError("term_tol must lie in (0, 1)")
        if self.quad_order < 2:
            raise ValueError("quad_order must be >= 2")


@dataclass(frozen=True)
class LinkPairSpec:
    """The pair (X, c * Y) whose minimum is studied; ``scale_y`` is c."""

    link_x: RicianLink
    link_y: RicianLink
    scale_y: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.scale_y <= 1.0):
            raise ValueError(f"scale_y must lie in (0, 1], got {self.scale_y}")


def log_series_weights(link: RicianLink, n_max: int) -> np.ndarray:
    """log(A * Bt(n) * n!) for n = 0..n_max, built from the series constants."""
    n = np.arange(n_max + 1, dtype=float)
    K, P, a = link.k_factor, link.mean_power, link.rate
    if K == 0.0:
        out = np.full(n_max + 1, -np.inf)
        out[0] = 0.0  # a * 1 / a
        return out
    log_b = n * (math.log(K) + math.log1p(K) - math.log(P)) - 2.0 * gammaln(n + 1)
    log_bt = log_b - (n + 1) * math.log(a)
    return math.log(link.prefactor) + log_bt + gammaln(n + 1)


def _poisson_order(k_factor: float, cfg_max: int, tol: float) -> int:
    """Smallest order whose Poisson(K) tail mass is below ``tol``."""
    if k_factor == 0.0:
        return 0
    n = np.arange(cfg_max + 1)
    tail = poisson.sf(n, k_factor)
    ok = np.nonzero(tail <= tol)[0]
    if ok.size == 0:
        raise SeriesTruncationError(
            f"Poisson tail {tail[-1]:.3e} > term_tol={tol:g} at order {cfg_max} (K={k_factor})"
        )
    return int(ok[0])


def _log_partial_exp(rate: float, gamma: np.ndarray, n_max: int) -> np.ndarray:
    """log(exp(-r g) * sum_{i<=n} (r g)**i / i!) for n = 0..n_max; shape (n_max+1, len(g))."""
    i = np.arange(n_max + 1, dtype=float)[:, None]
    rg = rate * gamma[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        log_rg = np.log(rg)
        i_log_rg = np.where(i == 0, 0.0, i * log_rg)
    log_terms = i_log_rg - gammaln(i + 1) - rg
    return np.logaddexp.accumulate(log_terms, axis=0)


def min_gain_cdf(spec: LinkPairSpec, gamma, cfg: SeriesConfig = SeriesConfig()):
    """P(min(X, c Y) <= gamma) from the truncated double series.

    The double sum over (n, k) factorises into one single sum per link, and
    truncation is driven by the Poisson tail of each weight sequence; since
    every partial exponential sum is at most 1, that tail bounds the error.
    """
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise ValueError("gamma must be >= 0")
    tol = cfg.term_tol / 2.0
    nx = _poisson_order(spec.link_x.k_factor, cfg.n_max, tol)
    ny = _poisson_order(spec.link_y.k_factor, cfg.k_max, tol)
    ax = spec.link_x.rate
    ay = spec.link_y.rate / spec.scale_y

    wx = log_series_weights(spec.link_x, nx)[:, None]
    wy = log_series_weights(spec.link_y, ny)[:, None]
    sx = logsumexp(wx + _log_partial_exp(ax, g, nx), axis=0)
    sy = logsumexp(wy + _log_partial_exp(ay, g, ny), axis=0)
    out = -np.expm1(sx + sy)
    out = np.clip(out, 0.0, 1.0)
    return out if np.ndim(gamma) else float(out[0])


def _log_chebyshev_integrals(beta: float, m_max: int, nodes: int) -> np.ndarray:
    """log of (1/(2 beta))**m e**beta (pi/N) sum_t (c_t+1)**(m-1) e**(-2 beta/(c_t+1)) |sin theta_t|.

    The e**beta prefactor is merged into each node's exponent so that no
    factor is ever formed on its own.
    """
    t = np.arange(1, nodes + 1, dtype=float)
    theta = (2.0 * t - 1.0) * math.pi / (2.0 * nodes)
    c1 = np.cos(theta) + 1.0
    base = beta - 2.0 * beta / c1 + np.log(np.abs(np.sin(theta)))
    m = np.arange(m_max + 1, dtype=float)[:, None]
    log_nodes = (m - 1.0) * np.log(c1)[None, :] + base[None, :]
    return logsumexp(log_nodes, axis=1) + math.log(math.pi / nodes) - m[:, 0] * math.log(2.0 * beta)


def _log_rate_series(link_x: RicianLink, link_y: RicianLink, scale_y: float, rho: float,
                     cfg: SeriesConfig) -> float:
    """Shared evaluator: approximates E[ln(1 + rho * min(X, scale_y * Y))] in nats."""
    if not (rho > 0 and math.isfinite(rho)):
        raise ValueError(f"rho must be finite and > 0, got {rho}")
    ax = link_x.rate
    ay = link_y.rate / scale_y
    beta = (ax + ay) / rho
    nx, ny = cfg.n_max, cfg.k_max
    # the diagonal stopping rule below cannot see a weight sequence still
    # rising at the cap, so both Poisson tails must vanish there first
    _poisson_order(link_x.k_factor, nx, cfg.term_tol)
    _poisson_order(link_y.k_factor, ny, cfg.term_tol)

    q =_log_chebyshev_integrals(beta, nx + ny, cfg.quad_order)
    i = np.arange(nx + 1, dtype=float)[:, None]
    j = np.arange(ny + 1, dtype=float)[None, :]
    m = (i + j).astype(int)
    log_coef = (gammaln(i + j + 1) - gammaln(i + 1) - gammaln(j + 1)
                + i * math.log(ax) + j * math.log(ay) - (i + j) * math.log(rho))
    cell = np.exp(log_coef + q[m])
    # inner[n, k] = sum over i <= n, j <= k
    inner = np.cumsum(np.cumsum(cell, axis=0), axis=1)

    wx = log_series_weights(link_x, nx)
    wy = log_series_weights(link_y, ny)
    terms = np.exp(wx[:, None] + wy[None, :]) * inner

    total = 0.0
    n_idx = np.arange(nx + 1)[:, None]
    k_idx = np.arange(ny + 1)[None, :]
    diag = n_idx + k_idx
    for d in range(nx + ny + 1):
        band = terms[diag == d]
        total += math.fsum(band)
        if total > 0 and band.max() < cfg.term_tol * total:
            return total
    if total == 0.0:
        return 0.0
    raise SeriesTruncationError(
        f"series not converged at n_max={nx}, k_max={ny} (last diagonal {band.max():.3e}, sum {total:.3e})"
    )


def h_function(link_x: RicianLink, link_y: RicianLink, rho: float,
               cfg: SeriesConfig = SeriesConfig()) -> float:
    """H(rho) in nats: approximates E[ln(1 + rho * min(X, Y))]."""
    return _log_rate_series(link_x, link_y, 1.0, rho, cfg)


def g_function(link_z: RicianLink, link_y: RicianLink, a2: float, rho: float,
               cfg: SeriesConfig = SeriesConfig()) -> float:
    """G(rho) in nats: approximates E[ln(1 + rho * min(a2 * Y, Z))]."""
    if not (0.0 < a2 <= 1.0):
        raise ValueError(f"a2 must lie in (0, 1], got {a2}")
    return _log_rate_series(link_z, link_y, a2, rho, cfg)


def avg_rate_c_s1(sd: RicianLink, sr: RicianLink, a2: float, rho: float,
                  cfg: SeriesConfig = SeriesConfig()) -> float:
    """Average s1 rate of the relayed transmission, bit/s/Hz."""
    return (h_function(sd, sr, rho, cfg) - h_function(sd, sr, rho * a2, cfg)) / (2.0 * LN2)


def avg_rate_d_s1(sd: RicianLink, sr: RicianLink, rho: float,
                  cfg: SeriesConfig = SeriesConfig()) -> float:
    return h_function(sd, sr, rho, cfg) / LN2


def avg_rate_c_s2(rd: RicianLink, sr: RicianLink, a2: float, rho: float,
                  cfg: SeriesConfig = SeriesConfig()) -> float:
    return g_function(rd, sr, a2, rho, cfg) / (2.0 * LN2)


@dataclass(frozen=True)
class SchemeRates:
    s1: float
    s2: float

    @property
    def sum(self) -> float:
        return self.s1 + self.s2


@dataclass(frozen=True)
class SchemeTotals:
    onoma: SchemeRates
    cnoma: SchemeRates


def scheme_totals(sd: RicianLink, sr: RicianLink, rd: RicianLink, sys: SystemParams,
                  cfg: SeriesConfig = SeriesConfig()) -> SchemeTotals:
    """Analytic O-NOMA and C-NOMA averages.

    O-NOMA s1 adds the direct-link term to the relayed s1 term unconditionally;
    s2 is shared by both schemes. Only the full-power conventions are modelled.
    """
    if sys.relay_power is not PowerConvention.FULL or sys.direct_power is not PowerConvention.FULL:
        raise ValueError("analytic totals are only defined for full-power relay and direct slots")
    h_full = h_function(sd, sr, sys.rho, cfg)
    h_scaled = h_function(sd, sr, sys.rho * sys.a2, cfg)
    c_s1 = (h_full - h_scaled) / (2.0 * LN2)
    d_s1 = h_full / LN2
    c_s2 = avg_rate_c_s2(rd, sr, sys.a2, sys.rho, cfg)
    return SchemeTotals(onoma=SchemeRates(c_s1 + d_s1, c_s2), cnoma=SchemeRates(c_s1, c_s2))
