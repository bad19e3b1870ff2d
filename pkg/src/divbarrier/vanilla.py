"""Black-Scholes vanilla prices and their dividend-adjusted variants."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .adjust import Method, adjust_params
from .errors import UnsupportedError, ValidationError
from .instruments import DividendSchedule, MarketState, Side, VanillaContract
from .mathkernel import norm_cdf


@dataclass(frozen=True)
class BsInputs:
    spot: float
    strike: float
    rate: float
    vol: float
    maturity: float

    def __post_init__(self):
        for name in ("spot", "strike", "vol", "maturity"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValidationError(f"{name} must be positive and finite, got {value!r}")
        if not math.isfinite(self.rate):
            raise ValidationError(f"rate must be finite, got {self.rate!r}")

    def d1_d2(self) -> tuple[float, float]:
        vsqrt = self.vol * math.sqrt(self.maturity)
        d1 = (math.log(self.spot / self.strike)
              + (self.rate + 0.5 * self.vol * self.vol) * self.maturity) / vsqrt
        return d1, d1 - vsqrt


def bs_price(inputs: BsInputs, side: Side = Side.CALL) -> float:
    side = Side(side)
    d1, d2 = inputs.d1_d2()
    disc_strike = inputs.strike * math.exp(-inputs.rate * inputs.maturity)
    if side is Side.CALL:
        return inputs.spot * norm_cdf(d1) - disc_strike * norm_cdf(d2)
    # parity-consistent put: N(-d2), not N(d2)
    return disc_strike * norm_cdf(-d2) - inputs.spot * norm_cdf(-d1)


def price_vanilla(method: Method, market: MarketState, contract: VanillaContract,
                  schedule: DividendSchedule) -> float:
    """European price under one of the dividend-adjustment methods."""
    method = Method(method)
    if method is Method.HYBRID_VA and contract.side is Side.PUT:
        raise UnsupportedError("hybrid-va has no put formula; use a call or another method")
    adj = adjust_params(method, market, contract, schedule)
    inputs = BsInputs(adj.spot_adj, adj.strike_adj, market.rate, adj.vol_adj, contract.maturity)
    return bs_price(inputs, contract.side)
