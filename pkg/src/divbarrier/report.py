"""Error metrics and regeneration of the published comparison tables."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .adjust import Method
from .barrier import price_barrier
from .errors import NeedsAssumptionError, ValidationError
from .instruments import BarrierContract, DividendSchedule, MarketState, VanillaContract
from .montecarlo import McConfig, simulate_uo_call

FIXTURE_ENV = "DIVBARRIER_FIXTURES"
FIXTURE_COLUMNS = ("param", "mc", "dai_chiu", "model1", "hybrid_va")
TABLE_IDS = ("T1", "T2", "T3", "T4", "T5", "T6")
PRICED_METHODS = {"model1": Method.MODEL1, "hybrid_va": Method.HYBRID_VA}

STRICT_TOL = 1e-4
ACCEPTED_TOL = 1e-3
# printed metrics are rounded to 4 decimals
PRINTED_METRIC_SLACK = 5e-5 + 1e-12


@dataclass(frozen=True)
class FixtureRow:
    param: float
    mc: float
    dai_chiu: float
    model1: float
    hybrid_va: float


@dataclass(frozen=True)
class TableFixture:
    table_id: str
    caption: str
    parameter: str
    unit: str
    dividend_count: int
    rows: tuple[FixtureRow, ...]
    defaults: dict
    printed_metrics: dict

    def column(self, name: str) -> list[float]:
        return [getattr(row, name) for row in self.rows]


@dataclass(frozen=True)
class ErrorReport:
    per_row_abs_error: tuple[float, ...]
    mae: float
    rmse: float

    def to_dict(self) -> dict:
        return {"mae": self.mae, "rmse": self.rmse}


def error_metrics(computed: Sequence[float], benchmark: Sequence[float]) -> ErrorReport:
    """Per-row absolute errors, their maximum (MAE) and root mean square (RMSE)."""
    computed, benchmark = list(computed), list(benchmark)
    if len(computed) != len(benchmark):
        raise ValidationError(
            f"length mismatch: {len(computed)} computed vs {len(benchmark)} benchmark values")
    if not computed:
        raise ValidationError("error_metrics needs at least one row")
    errs = tuple(abs(float(c) - float(b)) for c, b in zip(computed, benchmark))
    rmse = math.sqrt(math.fsum(e * e for e in errs) / len(errs))
    return ErrorReport(errs, max(errs), rmse)


def fixture_dir(directory=None) -> Path:
    if directory is not None:
        return Path(directory)
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "fixtures"


def load_fixture(table_id: str, directory=None) -> TableFixture:
    table_id = table_id.upper()
    base = fixture_dir(directory)
    index_path = base / "tables.json"
    try:
        index = json.loads(index_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ValidationError(f"fixture index not found: {index_path}") from None
    meta = index["tables"].get(table_id)
    if meta is None:
        raise ValidationError(f"unknown table id {table_id!r}; known: {', '.join(index['tables'])}")
    path = base / meta["file"]
    try:
        raw = path.read_bytes()
    except FileNotFoundError:
        raise ValidationError(f"fixture file not found: {path}") from None
    digest = hashlib.sha256(raw).hexdigest()
    if digest != meta["sha256"]:
        raise ValidationError(f"checksum mismatch for {path}: {digest} != {meta['sha256']}")

    reader = csv.DictReader(io.StringIO(raw.decode("utf-8")))
    if tuple(reader.fieldnames or ()) != FIXTURE_COLUMNS:
        raise ValidationError(f"{path}: header must be {','.join(FIXTURE_COLUMNS)}")
    rows = tuple(FixtureRow(**{k: float(v) for k, v in rec.items()}) for rec in reader)
    params = [r.param for r in rows]
    if params != sorted(params):
        raise ValidationError(f"{path}: rows are not sorted by parameter")
    if any(getattr(r, c) < 0.0 for r in rows for c in FIXTURE_COLUMNS[1:]):
        raise ValidationError(f"{path}: negative price in fixture")
    return TableFixture(table_id, meta["caption"], meta["parameter"], meta["unit"],
                        int(meta["dividend_count"]), rows, index["defaults"],
                        meta["printed_metrics"])


@dataclass(frozen=True)
class Scenario:
    market: MarketState
    contract: BarrierContract
    schedule: DividendSchedule


def _scenario(fixture: TableFixture, param: float, div_times, div_amounts) -> Scenario:
    d = fixture.defaults
    spot, vol = d["spot"], d["vol"]
    pairs = [tuple(p) for p in d["dividends"]]
    kind = fixture.parameter
    if fixture.dividend_count == 2:
        amounts = list(div_amounts) if div_amounts else [pairs[0][1]] * len(div_times)
        pairs = list(zip(div_times, amounts))
    if kind == "spot":
        spot = param
    elif kind == "vol":
        vol = param
    elif kind == "dividend_amount":
        pairs = [(t, param) for t, _ in pairs]
    elif kind == "dividend_time":
        pairs = [(param, a) for _, a in pairs]
    else:
        raise ValidationError(f"unknown varying parameter {kind!r}")
    market = MarketState(spot, d["rate"], vol)
    contract = BarrierContract(VanillaContract(d["strike"], d["maturity"]), d["barrier"], d["rebate"])
    return Scenario(market, contract, DividendSchedule.from_pairs(pairs))


def table_scenarios(fixture: TableFixture, div_times=None, div_amounts=None) -> list[Scenario]:
    """One pricing scenario per fixture row.

    The two-dividend tables need ``div_times``; the source gives none.
    ``div_amounts`` (two-dividend spot table only) defaults to the
    single-dividend default amount for each payment.
    """
    if fixture.dividend_count == 2:
        if not div_times:
            raise NeedsAssumptionError(
                f"{fixture.table_id} uses two dividends whose payment times are not published; "
                "supply them (e.g. --div-times 0.25,0.75)", missing=("div_times",))
        if len(div_times) != 2:
            raise ValidationError(f"{fixture.table_id} needs exactly two dividend times")
        if div_amounts and len(div_amounts) != 2:
            raise ValidationError(f"{fixture.table_id} needs exactly two dividend amounts")
    elif div_times or div_amounts:
        raise ValidationError(f"{fixture.table_id} is a single-dividend table; "
                              "dividend overrides apply to T5/T6 only")
    return [_scenario(fixture, row.param, div_times, div_amounts) for row in fixture.rows]


@dataclass
class RowResult:
    param: float
    fixture: FixtureRow
    computed: dict
    abs_delta: dict
    mc_std_error: float | None = None

    def to_dict(self) -> dict:
        out = {
            "param": self.param,
            "fixture": {c: getattr(self.fixture, c) for c in FIXTURE_COLUMNS[1:]},
            "computed": dict(self.computed),
            "abs_delta": dict(self.abs_delta),
        }
        if self.mc_std_error is not None:
            out["mc_std_error"] = self.mc_std_error
        return out


@dataclass
class TableReport:
    table_id: str
    caption: str
    parameter: str
    rows: list[RowResult]
    metrics: dict[str, ErrorReport]
    printed_metrics: dict
    flags: list[str] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)
    metrics_vs_run_mc: dict[str, ErrorReport] = field(default_factory=dict)

    def tolerance_summary(self) -> dict:
        out = {}
        for name in PRICED_METHODS:
            deltas = [r.abs_delta[name] for r in self.rows]
            out[name] = {
                "rows": len(deltas),
                "within_strict": sum(d <= STRICT_TOL for d in deltas),
                "within_accepted": sum(d <= ACCEPTED_TOL for d in deltas),
                "max_abs_delta": max(deltas),
            }
        return out

    def to_dict(self) -> dict:
        out = {
            "table_id": self.table_id,
            "caption": self.caption,
            "parameter": self.parameter,
            "rows": [r.to_dict() for r in self.rows],
            "metrics": {k: v.to_dict() for k, v in self.metrics.items()},
            "printed_metrics": self.printed_metrics,
            "tolerances": {"strict": STRICT_TOL, "accepted": ACCEPTED_TOL,
                           **self.tolerance_summary()},
            "flags": list(self.flags),
            "assumptions": list(self.assumptions),
        }
        if self.metrics_vs_run_mc:
            out["metrics_vs_run_mc"] = {k: v.to_dict() for k, v in self.metrics_vs_run_mc.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        computed_cols = list(self.rows[0].computed) if self.rows else []
        header = ["param"] + [f"fixture_{c}" for c in FIXTURE_COLUMNS[1:]]
        header += [f"computed_{c}" for c in computed_cols] + [f"abs_delta_{c}" for c in computed_cols]
        writer.writerow(header)
        for r in self.rows:
            writer.writerow([repr(r.param)]
                            + [repr(getattr(r.fixture, c)) for c in FIXTURE_COLUMNS[1:]]
                            + [repr(r.computed[c]) for c in computed_cols]
                            + [repr(r.abs_delta[c]) for c in computed_cols])
        return buf.getvalue()


def printed_metric_flags(fixture: TableFixture) -> list[str]:
    """Compare the printed MAE/RMSE rows with those implied by the fixture prices."""
    flags = []
    bench = fixture.column("mc")
    for col in ("dai_chiu", "model1", "hybrid_va"):
        implied = error_metrics(fixture.column(col), bench)
        printed = fixture.printed_metrics[col]
        for stat in ("mae", "rmse"):
            value = getattr(implied, stat)
            if abs(value - printed[stat]) > PRINTED_METRIC_SLACK:
                flags.append(f"{fixture.table_id} {col} {stat.upper()}: printed {printed[stat]:.4f}, "
                             f"fixture prices imply {value:.4f}")
    return flags


def reproduce_table(table_id: str, div_times=None, div_amounts=None,
                    mc_config: McConfig | None = None, fixture_directory=None,
                    workers: int = 1) -> TableReport:
    """Recompute the Model1 and Hybrid VA columns of a table.

    Pass ``mc_config`` to also rerun the Monte Carlo benchmark per row.
    """
    fixture = load_fixture(table_id, fixture_directory)
    scenarios = table_scenarios(fixture, div_times, div_amounts)
    assumptions = ["rebate 0", "barrier not shifted by dividends", "cost of carry equals rate"]
    if fixture.dividend_count == 2:
        amounts = div_amounts or "default amount for each"
        assumptions.append(f"dividend times {list(div_times)} (user supplied), amounts {amounts}")

    rows = []
    for row, sc in zip(fixture.rows, scenarios):
        computed, delta = {}, {}
        for name, method in PRICED_METHODS.items():
            computed[name] = price_barrier(method, sc.market, sc.contract, sc.schedule)
            delta[name] = abs(computed[name] - getattr(row, name))
        se = None
        if mc_config is not None:
            est = simulate_uo_call(sc.market, sc.contract, sc.schedule, mc_config, workers=workers)
            computed["mc"], se = est.mean, est.std_error
            delta["mc"] = abs(est.mean - row.mc)
        rows.append(RowResult(row.param, row, computed, delta, se))

    bench = fixture.column("mc")
    metrics = {name: error_metrics([r.computed[name] for r in rows], bench)
               for name in PRICED_METHODS}
    vs_run = {}
    if mc_config is not None:
        run_mc = [r.computed["mc"] for r in rows]
        vs_run = {name: error_metrics([r.computed[name] for r in rows], run_mc)
                  for name in PRICED_METHODS}
    return TableReport(fixture.table_id, fixture.caption, fixture.parameter, rows, metrics,
                       fixture.printed_metrics, printed_metric_flags(fixture), assumptions, vs_run)
