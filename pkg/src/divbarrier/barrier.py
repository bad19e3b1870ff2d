"""Closed-form up-and-out call and its dividend-adjusted variants.

Reiner-Rubinstein style decomposition with the binary flags fixed for an
up-and-out call (phi = +1, eta = -1). The five building blocks are stored
as ``T_A`` ... ``T_F`` so that ``B`` stays free for the barrier level.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .adjust import Method, adjust_params
from .errors import KnockedOutError, UnsupportedError, ValidationError
from .instruments import BarrierContract, BarrierStyle, DividendSchedule, MarketState, Side
from .mathkernel import norm_cdf

log = logging.getLogger(__name__)

PHI = 1.0   # call
ETA = -1.0  # up barrier


@dataclass(frozen=True)
class BarrierTerms:
    T_A: float
    T_B: float
    T_C: float
    T_D: float
    T_F: float
    x1: float
    x2: float
    y1: float
    y2: float
    z: float
    mu: float
    lam: float


def _power_times(log_ratio: float, power: float, prob: float) -> float:
    """(B/S)**power * prob, skipping the power when the probability is zero."""
    if prob == 0.0:
        return 0.0
    return math.exp(power * log_ratio) * prob


def uo_call_terms(spot, strike, barrier_level, rebate, rate, carry, vol, maturity) -> BarrierTerms:
    S, K, H, R = float(spot), float(strike), float(barrier_level), float(rebate)
    r, b, sigma, T = float(rate), float(carry), float(vol), float(maturity)
    for name, value in (("spot", S), ("strike", K), ("barrier level", H), ("vol", sigma),
                        ("maturity", T)):
        if not (math.isfinite(value) and value > 0.0):
            raise ValidationError(f"{name} must be positive and finite, got {value!r}")
    if S >= H:
        raise KnockedOutError(f"spot {S!r} is at or above the barrier {H!r}")

    vsqrt = sigma * math.sqrt(T)
    mu = (b - 0.5 * sigma * sigma) / (sigma * sigma)
    lam = math.sqrt(mu * mu + 2.0 * r / (sigma * sigma))
    log_hs = math.log(H / S)

    x1 = math.log(S / K) / vsqrt + (1.0 + mu) * vsqrt
    x2 = math.log(S / H) / vsqrt + (1.0 + mu) * vsqrt
    y1 = math.log(H * H / (S * K)) / vsqrt + (1.0 + mu) * vsqrt
    y2 = log_hs / vsqrt + (1.0 + mu) * vsqrt
    z = log_hs / vsqrt + lam * vsqrt

    fwd = S * math.exp((b - r) * T)
    disc_k = K * math.exp(-r * T)

    def vanilla_like(x):
        return PHI * fwd * norm_cdf(PHI * x) - PHI * disc_k * norm_cdf(PHI * x - PHI * vsqrt)

    def reflected(y):
        return (PHI * fwd * _power_times(log_hs, 2.0 * (mu + 1.0), norm_cdf(ETA * y))
                - PHI * disc_k * _power_times(log_hs, 2.0 * mu, norm_cdf(ETA * y - ETA * vsqrt)))

    if R == 0.0:
        term_f = 0.0
    else:
        term_f = R * (_power_times(log_hs, mu + lam, norm_cdf(ETA * z))
                      + _power_times(log_hs, mu - lam, norm_cdf(ETA * z - 2.0 * ETA * lam * vsqrt)))

    return BarrierTerms(vanilla_like(x1), vanilla_like(x2), reflected(y1), reflected(y2), term_f,
                        x1, x2, y1, y2, z, mu, lam)


def uo_call_price(spot, strike, barrier_level, rebate, rate, carry, vol, maturity) -> float:
    """Continuously monitored up-and-out call paying ``rebate`` on knockout.

    A spot already at or above the barrier returns the rebate immediately.
    """
    if spot >= barrier_level:
        log.warning("spot %g >= barrier %g: option is knocked out at inception, returning rebate",
                    spot, barrier_level)
        return float(rebate)
    t = uo_call_terms(spot, strike, barrier_level, rebate, rate, carry, vol, maturity)
    if strike >= barrier_level:
        price = t.T_F
    else:
        price = t.T_A - t.T_B + t.T_C - t.T_D + t.T_F
    return max(price, 0.0)


def price_barrier(method: Method, market: MarketState, contract: BarrierContract,
                  schedule: DividendSchedule) -> float:
    """Up-and-out call with spot, strike and vol moved by a dividend method.

    The barrier level and rebate are used as given; carry equals the rate.
    """
    if contract.style is not BarrierStyle.UP_AND_OUT:
        raise UnsupportedError(f"barrier style {contract.style.value!r} is not supported")
    if contract.vanilla.side is not Side.CALL:
        raise UnsupportedError("only up-and-out calls are supported")
    if market.spot >= contract.barrier_level:
        log.warning("spot %g >= barrier %g: knocked out at inception, returning rebate",
                    market.spot, contract.barrier_level)
        return contract.rebate
    adj = adjust_params(method, market, contract.vanilla, schedule)
    return uo_call_price(adj.spot_adj, adj.strike_adj, contract.barrier_level, contract.rebate,
                         market.rate, market.rate, adj.vol_adj, contract.maturity)
