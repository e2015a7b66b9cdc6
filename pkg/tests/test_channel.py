import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special, stats

from onoma_relay.channel import RicianLink, mean_power_check, sample_power_gain, survival


def density_tail(link, x):
    """Tail of the Rician power density by adaptive quadrature (exp-scaled Bessel)."""
    K, a = link.k_factor, link.rate

    def pdf(t):
        z = 2.0 * math.sqrt(K * a * t)
        return a * math.exp(-K - a * t + z) * special.i0e(z)

    val, _ = integrate.quad(pdf, x, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


links = st.builds(
    RicianLink,
    k_factor=st.sampled_from([0.0, 0.5, 2.0, 5.0, 10.0]),
    mean_power=st.floats(0.1, 200.0),
)


class TestRicianLink:
    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            RicianLink(-1.0, 1.0)
        with pytest.raises(ValueError):
            RicianLink(1.0, 0.0)

    @given(links)
    def test_derived_constants(self, link):
        assert 0 < link.rate < np.inf
        assert 0 < link.prefactor <= link.rate

    def test_from_amplitude_squares(self):
        assert RicianLink.from_amplitude(2.0, 3.0).mean_power == 9.0


class TestSurvival:
    def test_rayleigh_reduction(self):
        assert survival(RicianLink(0.0, 1.0), 1.0) == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_zero(self):
        assert survival(RicianLink(2.0, 9.0), 0.0) == 1.0

    def test_against_density_quadrature(self):
        # mpmath quadrature at 30 digits gives 0.441007917099656...
        link = RicianLink(5.0, 6.0)
        assert survival(link, 6.0) == pytest.approx(density_tail(link, 6.0), abs=1e-9)
        assert survival(link, 6.0) == pytest.approx(0.441007917099656, abs=1e-12)

    @pytest.mark.parametrize("k", [0.3, 2.0, 5.0, 10.0])
    @pytest.mark.parametrize("x_over_p", [0.05, 0.5, 1.0, 3.0, 8.0])
    def test_grid_against_quadrature(self, k, x_over_p):
        link = RicianLink(k, 36.0)
        x = x_over_p * link.mean_power
        assert survival(link, x) == pytest.approx(density_tail(link, x), abs=1e-10)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            survival(RicianLink(1.0, 1.0), -0.1)

    @settings(max_examples=30, deadline=None)
    @given(links)
    def test_bounded_monotone(self, link):
        x = np.linspace(0.0, 30.0 * link.mean_power, 1000)
        s = survival(link, x)
        assert np.all((s >= 0) & (s <= 1))
        assert np.all(np.diff(s) <= 0)
        assert s[0] == 1.0 and s[-1] < 1e-6

    @pytest.mark.parametrize("p", [0.5, 3.0, 144.0])
    def test_k0_is_exponential(self, p):
        link = RicianLink(0.0, p)
        x = np.linspace(0.0, 20.0 * p, 500)
        assert np.max(np.abs(survival(link, x) - np.exp(-x / p))) <= 1e-10


class TestSampling:
    def test_mean(self):
        link = RicianLink(2.0, 9.0)
        x = sample_power_gain(link, np.random.default_rng(11), 1_000_000)
        assert abs(x.mean() - 9.0) < 0.05
        assert abs(x.mean() - 9.0) < 4 * x.std(ddof=1) / math.sqrt(x.size)

    def test_rayleigh_cdf_at_one(self):
        x = sample_power_gain(RicianLink(0.0, 1.0), np.random.default_rng(12), 1_000_000)
        assert np.mean(x <= 1.0) == pytest.approx(1 - math.exp(-1), abs=0.003)

    def test_survival_at_mean_power(self):
        link = RicianLink(5.0, 6.0)
        n = 1_000_000
        x = sample_power_gain(link, np.random.default_rng(13), n)
        p = survival(link, 6.0)
        se = math.sqrt(p * (1 - p) / n)
        assert abs(np.mean(x > 6.0) - p) < 3 * se

    @pytest.mark.parametrize("link", [RicianLink(0.0, 1.0), RicianLink(2.0, 9.0), RicianLink(5.0, 36.0)])
    def test_ks_against_survival(self, link):
        x = sample_power_gain(link, np.random.default_rng(14), 100_000)
        res = stats.kstest(x, lambda t: 1.0 - survival(link, np.maximum(t, 0.0)))
        assert res.pvalue > 0.01


@pytest.mark.parametrize("k, p", [(0.0, 3.0), (5.0, 36.0), (2.0, 9.0)])
def test_mean_power_check(k, p):
    assert mean_power_check(RicianLink(k, p)) == pytest.approx(p, rel=1e-15)
