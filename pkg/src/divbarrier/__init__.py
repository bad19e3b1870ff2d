"""Analytic and Monte Carlo pricing of up-and-out calls on stocks with cash dividends."""

from .adjust import (AdjustedParams, Method, WeightMode, adjust_params, avg_vol_spot,
                     avg_vol_strike, hybrid_vol, pv_dividends)
from .barrier import BarrierTerms, price_barrier, uo_call_price, uo_call_terms
from .errors import (KnockedOutError, NeedsAssumptionError, PricingError, SingularityError,
                     UnsupportedError, ValidationError)
from .instruments import (BarrierContract, BarrierStyle, Dividend, DividendSchedule, MarketState,
                          Side, VanillaContract, normalize_schedule)
from .mathkernel import norm_cdf
from .montecarlo import McConfig, PriceEstimate, bridge_crossing_prob, simulate_uo_call
from .report import error_metrics, load_fixture, reproduce_table
from .vanilla import BsInputs, bs_price, price_vanilla

__version__ = "0.1.0"
