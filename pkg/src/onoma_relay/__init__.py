"""Average achievable rates of opportunistic and conventional NOMA relaying over Rician fading."""
from .analytic import (LinkPairSpec, SchemeTotals, SeriesConfig, SeriesTruncationError, avg_rate_c_s1,
                       avg_rate_c_s2, avg_rate_d_s1, g_function, h_function, min_gain_cdf, scheme_totals)
from .channel import RicianLink, mean_power_check, sample_power_gain, survival
from .montecarlo import Estimate, EstimatorKind, empirical_cdf, estimate, estimate_many, estimate_terms
from .presets import FigurePreset, preset_table
from .rates import (Branch, ChannelRealization, PowerConvention, RateBreakdown, SystemParams,
                    cnoma_rate, onoma_rate, paper_terms, snr_set)

__all__ = [name for name in dir() if not name.startswith("_")]
