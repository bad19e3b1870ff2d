"""Market state, dividend schedules and option contracts."""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ValidationError

log = logging.getLogger(__name__)


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def _positive(name: str, value: float) -> float:
    value = _finite(name, value)
    if value <= 0.0:
        raise ValidationError(f"{name} must be > 0, got {value!r}")
    return value


class Side(str, enum.Enum):
    CALL = "call"
    PUT = "put"


class BarrierStyle(str, enum.Enum):
    UP_AND_OUT = "up-and-out"


@dataclass(frozen=True)
class MarketState:
    spot: float
    rate: float
    vol: float

    def __post_init__(self):
        object.__setattr__(self, "spot", _positive("spot", self.spot))
        object.__setattr__(self, "rate", _finite("rate", self.rate))
        object.__setattr__(self, "vol", _positive("vol", self.vol))


@dataclass(frozen=True)
class Dividend:
    time: float
    amount: float

    def __post_init__(self):
        t = _finite("dividend time", self.time)
        d = _finite("dividend amount", self.amount)
        if t <= 0.0:
            raise ValidationError(f"dividend time must be > 0, got {t!r}")
        if d < 0.0:
            raise ValidationError(f"dividend amount must be >= 0, got {d!r}")
        object.__setattr__(self, "time", t)
        object.__setattr__(self, "amount", d)


@dataclass(frozen=True)
class DividendSchedule:
    """Cash dividends as an ordered, immutable sequence."""

    entries: tuple[Dividend, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "DividendSchedule":
        return cls(tuple(Dividend(t, d) for t, d in pairs))

    def __iter__(self) -> Iterator[Dividend]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def times(self) -> list[float]:
        return [e.time for e in self.entries]

    @property
    def amounts(self) -> list[float]:
        return [e.amount for e in self.entries]

    def pairs(self) -> list[tuple[float, float]]:
        return [(e.time, e.amount) for e in self.entries]


EMPTY_SCHEDULE = DividendSchedule()


@dataclass(frozen=True)
class VanillaContract:
    strike: float
    maturity: float
    side: Side = Side.CALL

    def __post_init__(self):
        object.__setattr__(self, "strike", _positive("strike", self.strike))
        object.__setattr__(self, "maturity", _positive("maturity", self.maturity))
        object.__setattr__(self, "side", Side(self.side))


@dataclass(frozen=True)
class BarrierContract:
    vanilla: VanillaContract
    barrier_level: float
    rebate: float = 0.0
    style: BarrierStyle = field(default=BarrierStyle.UP_AND_OUT)

    def __post_init__(self):
        object.__setattr__(self, "barrier_level", _positive("barrier level", self.barrier_level))
        rebate = _finite("rebate", self.rebate)
        if rebate < 0.0:
            raise ValidationError(f"rebate must be >= 0, got {rebate!r}")
        object.__setattr__(self, "rebate", rebate)
        object.__setattr__(self, "style", BarrierStyle(self.style))

    @property
    def strike(self) -> float:
        return self.vanilla.strike

    @property
    def maturity(self) -> float:
        return self.vanilla.maturity


def dropped_after(schedule: DividendSchedule, maturity: float) -> int:
    """Number of entries paid strictly after ``maturity``."""
    return sum(1 for e in schedule if e.time > maturity)


def normalize_schedule(schedule: DividendSchedule, maturity: float) -> DividendSchedule:
    """Sort, merge same-time payments, and keep only 0 < t <= maturity.

    Zero-amount entries are removed. A dividend exactly at maturity is kept.
    Idempotent.
    """
    maturity = _positive("maturity", maturity)
    merged: dict[float, float] = {}
    dropped = 0
    for e in schedule:
        # Dividend.__post_init__ already enforced t > 0 and d >= 0
        if e.time > maturity:
            dropped += 1
            continue
        merged[e.time] = merged.get(e.time, 0.0) + e.amount
    if dropped:
        log.info("dropped %d dividend(s) after maturity %g", dropped, maturity)
    return DividendSchedule(
        tuple(Dividend(t, d) for t, d in sorted(merged.items()) if d > 0.0)
    )


def parse_dividend_token(token: str) -> Dividend:
    """Parse an inline ``time:amount`` pair."""
    parts = token.split(":")
    if len(parts) != 2:
        raise ValidationError(f"malformed dividend {token!r}, expected time:amount")
    try:
        t, d = float(parts[0]), float(parts[1])
    except ValueError:
        raise ValidationError(f"malformed dividend {token!r}, expected time:amount") from None
    return Dividend(t, d)


def parse_schedule_text(text: str) -> DividendSchedule:
    """Parse ``time,amount`` CSV lines; a non-numeric first line is a header."""
    entries = []
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    for lineno, row in enumerate(rows, 1):
        if len(row) != 2:
            raise ValidationError(f"schedule line {lineno}: expected 'time,amount', got {row!r}")
        try:
            t, d = float(row[0]), float(row[1])
        except ValueError:
            if lineno == 1:
                continue
            raise ValidationError(f"schedule line {lineno}: non-numeric value in {row!r}") from None
        entries.append(Dividend(t, d))
    return DividendSchedule(tuple(entries))


def read_schedule(path) -> DividendSchedule:
    return parse_schedule_text(Path(path).read_text(encoding="utf-8"))


def format_schedule(schedule: DividendSchedule) -> str:
    lines = ["time,amount"]
    lines += [f"{e.time!r},{e.amount!r}" for e in schedule]
    return "\n".join(lines) + "\n"
