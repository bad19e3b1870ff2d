"""Dividend present values and interval-averaged adjusted volatilities.

Every method maps (spot, strike, vol) plus a cash dividend schedule to an
adjusted triple that is then fed into an ordinary Black-Scholes style
formula:

=========== ================ ===================== ==============
method      spot             strike                vol
=========== ================ ===================== ==============
none        S                K                     sigma
model1      S - D            K                     sigma
spot-va     S - D            K                     avg spot vol
strike-va   S                K + sum d e^{r(T-t)}  avg strike vol
hybrid      S - D_S          K + D_K e^{rT}        sigma
hybrid-va   S - D_S          K + D_K e^{rT}        hybrid vol
=========== ================ ===================== ==============

``D`` is the discounted dividend stream; ``D_S`` and ``D_K`` split it with
weights ``(T - t)/T`` and ``t/T`` so that ``D = D_S + D_K``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import SingularityError, ValidationError
from .instruments import DividendSchedule, MarketState, VanillaContract, normalize_schedule


class WeightMode(str, enum.Enum):
    UNIFORM = "uniform"
    HYBRID_SPOT = "hybrid-spot"
    HYBRID_STRIKE = "hybrid-strike"

    def weight(self, time: float, maturity: float) -> float:
        if self is WeightMode.UNIFORM:
            return 1.0
        if self is WeightMode.HYBRID_SPOT:
            return (maturity - time) / maturity
        return time / maturity


class Method(str, enum.Enum):
    NONE = "none"
    MODEL1 = "model1"
    SPOT_VA = "spot-va"
    STRIKE_VA = "strike-va"
    HYBRID = "hybrid"
    HYBRID_VA = "hybrid-va"


@dataclass(frozen=True)
class AdjustedParams:
    spot_adj: float
    strike_adj: float
    vol_adj: float


def _discounted(schedule, rate, maturity, mode):
    """Per-dividend weighted present values, in schedule order."""
    return [mode.weight(e.time, maturity) * e.amount * math.exp(-rate * e.time) for e in schedule]


def pv_dividends(schedule: DividendSchedule, rate: float, maturity: float,
                 mode: WeightMode = WeightMode.UNIFORM) -> float:
    """Weighted present value of the dividends paid in (0, maturity]."""
    schedule = normalize_schedule(schedule, maturity)
    return math.fsum(_discounted(schedule, rate, maturity, WeightMode(mode)))


def avg_vol_spot(market: MarketState, schedule: DividendSchedule, maturity: float,
                 mode: WeightMode = WeightMode.UNIFORM) -> float:
    """Root-mean-square of the spot-side local volatility over (0, T).

    On the interval ending at dividend ``j`` the local vol is scaled by
    ``S / (S - D_j)`` where ``D_j`` is the discounted value of dividends
    ``j..N`` still to be paid. After the last dividend the scale is 1.
    """
    mode = WeightMode(mode)
    if mode is WeightMode.HYBRID_STRIKE:
        raise ValidationError("avg_vol_spot accepts uniform or hybrid-spot weights")
    schedule = normalize_schedule(schedule, maturity)
    if not schedule:
        return market.vol
    spot, T = market.spot, maturity
    pv = _discounted(schedule, market.rate, T, mode)
    remaining = math.fsum(pv)
    if spot <= remaining:
        raise SingularityError(
            f"spot does not cover discounted dividends ({spot!r} <= {remaining!r})")
    total = 0.0
    prev = 0.0
    for j, e in enumerate(schedule):
        remaining = math.fsum(pv[j:])
        total += (spot / (spot - remaining)) ** 2 * (e.time - prev) / T
        prev = e.time
    total += (T - prev) / T
    return market.vol * math.sqrt(total)


def avg_vol_strike(market: MarketState, schedule: DividendSchedule, maturity: float,
                   mode: WeightMode = WeightMode.UNIFORM) -> float:
    """Root-mean-square of the strike-side local volatility over (0, T).

    The vol is unscaled before the first dividend; on the interval after
    dividend ``j`` it is scaled by ``S / (S + D_j)`` with ``D_j`` the
    discounted value of dividends ``1..j`` already paid.
    """
    mode = WeightMode(mode)
    if mode is WeightMode.HYBRID_SPOT:
        raise ValidationError("avg_vol_strike accepts uniform or hybrid-strike weights")
    schedule = normalize_schedule(schedule, maturity)
    if not schedule:
        return market.vol
    spot, T = market.spot, maturity
    times = schedule.times
    pv = _discounted(schedule, market.rate, T, mode)
    total = times[0] / T
    for j in range(len(pv)):
        paid = math.fsum(pv[: j + 1])
        end = times[j + 1] if j + 1 < len(times) else T
        total += (spot / (spot + paid)) ** 2 * (end - times[j]) / T
    return market.vol * math.sqrt(total)


def hybrid_vol(market: MarketState, schedule: DividendSchedule, maturity: float) -> float:
    """sigma * (1 + eps_S) * (1 - eps_K), i.e. avg spot vol * avg strike vol / sigma."""
    if not normalize_schedule(schedule, maturity):
        return market.vol
    s_vol = avg_vol_spot(market, schedule, maturity, WeightMode.HYBRID_SPOT)
    k_vol = avg_vol_strike(market, schedule, maturity, WeightMode.HYBRID_STRIKE)
    return s_vol * k_vol / market.vol


def adjust_params(method: Method, market: MarketState, contract: VanillaContract,
                  schedule: DividendSchedule) -> AdjustedParams:
    method = Method(method)
    T = contract.maturity
    schedule = normalize_schedule(schedule, T)
    S, K, r, sigma = market.spot, contract.strike, market.rate, market.vol

    if method is Method.NONE or not schedule:
        spot, strike, vol = S, K, sigma
    elif method is Method.MODEL1:
        spot, strike, vol = S - pv_dividends(schedule, r, T), K, sigma
    elif method is Method.SPOT_VA:
        spot = S - pv_dividends(schedule, r, T)
        _check_spot(method, spot)
        strike, vol = K, avg_vol_spot(market, schedule, T)
    elif method is Method.STRIKE_VA:
        forward = math.fsum(e.amount * math.exp(r * (T - e.time)) for e in schedule)
        spot, strike, vol = S, K + forward, avg_vol_strike(market, schedule, T)
    else:
        spot = S - pv_dividends(schedule, r, T, WeightMode.HYBRID_SPOT)
        strike = K + pv_dividends(schedule, r, T, WeightMode.HYBRID_STRIKE) * math.exp(r * T)
        if method is Method.HYBRID:
            vol = sigma
        else:
            _check_spot(method, spot)
            vol = hybrid_vol(market, schedule, T)
    _check_spot(method, spot)
    return AdjustedParams(spot, strike, vol)


def _check_spot(method, spot):
    if not spot > 0.0:
        raise SingularityError(
            f"{method.value}: adjusted spot {spot!r} is not positive; "
            "spot does not cover discounted dividends")
