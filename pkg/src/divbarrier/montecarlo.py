"""Monte Carlo benchmark for up-and-out calls on a dividend-paying stock.

Between event dates {0, t_1, ..., t_N, T} the stock follows exact
lognormal GBM steps; at each dividend date it drops by the cash amount
(floored at zero, where it stays). Continuous monitoring of the barrier is
recovered with the Brownian-bridge crossing probability on every sub-step.

Randomness is addressed by path block: block ``k`` (paths
``k*BLOCK_SIZE`` to ``(k+1)*BLOCK_SIZE - 1``) draws from a Philox stream
keyed by ``(seed, k)``. Blocks can therefore be simulated in any order on
any number of workers and the per-path payoffs are unchanged.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import KnockedOutError, ValidationError
from .instruments import BarrierContract, DividendSchedule, MarketState, normalize_schedule

BLOCK_SIZE = 1 << 14
STEPS_PER_YEAR = 250


@dataclass(frozen=True)
class McConfig:
    paths: int = 1_000_000
    steps_per_interval: int | None = None  # None: ceil(STEPS_PER_YEAR * segment length)
    seed: int = 20240601
    antithetic: bool = True
    bridge_correction: bool = True

    def __post_init__(self):
        if int(self.paths) < 1:
            raise ValidationError(f"paths must be >= 1, got {self.paths!r}")
        if self.steps_per_interval is not None and int(self.steps_per_interval) < 1:
            raise ValidationError(
                f"steps_per_interval must be >= 1, got {self.steps_per_interval!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    def steps_for(self, length: float) -> int:
        if self.steps_per_interval is not None:
            return int(self.steps_per_interval)
        return max(1, math.ceil(STEPS_PER_YEAR * length - 1e-9))


@dataclass(frozen=True)
class PriceEstimate:
    mean: float
    std_error: float
    paths_used: int
    knockout_fraction: float


def bridge_crossing_prob(log_start: float, log_end: float, log_barrier: float,
                         vol: float, dt: float) -> float:
    """Probability that a Brownian bridge between two points below the barrier touches it."""
    if not (log_start < log_barrier and log_end < log_barrier):
        raise ValidationError("bridge endpoints must lie strictly below the barrier")
    if dt <= 0.0 or vol <= 0.0:
        raise ValidationError("dt and vol must be positive")
    exponent = -2.0 * (log_barrier - log_start) * (log_barrier - log_end) / (vol * vol * dt)
    return min(1.0, max(0.0, math.exp(exponent)))


def _event_segments(schedule: DividendSchedule, maturity: float):
    """(start, length, dividend paid at segment end) for each segment."""
    segments = []
    prev = 0.0
    for e in schedule:
        segments.append((prev, e.time - prev, e.amount))
        prev = e.time
    segments.append((prev, maturity - prev, 0.0))
    return segments


def _simulate_block(block, n, market, contract, segments, config):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(config.seed),
                                                                      spawn_key=(block,))))
    r, sigma = market.rate, market.vol
    log_barrier = math.log(contract.barrier_level)
    x = np.full(n, math.log(market.spot))
    alive = np.ones(n, dtype=bool)
    hit_time = np.full(n, np.inf)

    for start, length, dividend in segments:
        if length > 0.0:
            m = config.steps_for(length)
            dt = length / m
            if config.antithetic:
                half = rng.standard_normal((n // 2, m))
                z = np.concatenate([half, -half])
            else:
                z = rng.standard_normal((n, m))
            increments = (r - 0.5 * sigma * sigma) * dt + sigma * math.sqrt(dt) * z
            path = x[:, None] + np.cumsum(increments, axis=1)
            dist_end = log_barrier - path
            crossed = dist_end <= 0.0
            if config.bridge_correction:
                u = rng.random((n, m))
                dist_start = np.empty_like(dist_end)
                dist_start[:, 0] = log_barrier - x
                dist_start[:, 1:] = dist_end[:, :-1]
                with np.errstate(invalid="ignore"):
                    prob = np.exp(-2.0 * np.maximum(dist_start, 0.0) * np.maximum(dist_end, 0.0)
                                  / (sigma * sigma * dt))
                crossed |= u < prob
            newly = alive & crossed.any(axis=1)
            if newly.any():
                first = crossed[newly].argmax(axis=1)
                hit_time[newly] = start + (first + 0.5) * dt
                alive &= ~newly
            x = path[:, -1]
        if dividend > 0.0:
            with np.errstate(divide="ignore"):
                x = np.log(np.maximum(np.exp(x) - dividend, 0.0))

    T = contract.maturity
    payoff = np.where(alive, np.maximum(np.exp(x) - contract.strike, 0.0) * math.exp(-r * T), 0.0)
    if contract.rebate > 0.0:
        dead = ~alive
        payoff[dead] = contract.rebate * np.exp(-r * hit_time[dead])
    return payoff, int(np.count_nonzero(~alive))


def simulate_uo_call(market: MarketState, contract: BarrierContract, schedule: DividendSchedule,
                     config: McConfig = McConfig(), workers: int = 1) -> PriceEstimate:
    """Monte Carlo price of an up-and-out call under discrete cash dividends.

    With antithetic sampling the path count is rounded up to an even number
    and the standard error is taken over antithetic pair averages.
    """
    if market.spot >= contract.barrier_level:
        raise KnockedOutError("spot is at or above the barrier; nothing to simulate")
    schedule = normalize_schedule(schedule, contract.maturity)
    segments = _event_segments(schedule, contract.maturity)

    paths = int(config.paths)
    if config.antithetic:
        paths += paths % 2
    sizes = [BLOCK_SIZE] * (paths // BLOCK_SIZE)
    if paths % BLOCK_SIZE:
        sizes.append(paths % BLOCK_SIZE)

    def run(block):
        return _simulate_block(block, sizes[block], market, contract, segments, config)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(len(sizes))))
    else:
        results = [run(k) for k in range(len(sizes))]

    if config.antithetic:
        samples = np.concatenate(
            [0.5 * (p[: len(p) // 2] + p[len(p) // 2:]) for p, _ in results])
    else:
        samples = np.concatenate([p for p, _ in results])
    knocked = sum(k for _, k in results)

    # fsum is exactly rounded, so the totals do not depend on how blocks were scheduled
    count = samples.size
    mean = math.fsum(samples) / count
    if count > 1:
        var = math.fsum((samples - mean) ** 2) / (count - 1)
        std_error = math.sqrt(var / count)
    else:
        std_error = 0.0
    return PriceEstimate(mean, std_error, paths, knocked / paths)
