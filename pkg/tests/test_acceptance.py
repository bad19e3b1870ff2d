"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy import integrate

from conftest import ACCEPTANCE_LINES
from divbarrier import (BarrierContract, BsInputs, DividendSchedule, MarketState, McConfig, Method,
                        Side, VanillaContract, WeightMode, adjust_params, avg_vol_spot,
                        avg_vol_strike, bs_price, hybrid_vol, price_vanilla, pv_dividends,
                        reproduce_table, simulate_uo_call, uo_call_price)
from divbarrier.cli import run

TABLE_TOL = 1e-3
METRIC_TOL = 2e-3


def record(number, title, checks):
    """checks: list of (ok, detail)."""
    failed = [d for ok, d in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    summary = "; ".join(failed[:3]) if failed else checks[-1][1] if checks else ""
    ACCEPTANCE_LINES.append(f"[{number}] {status} {title}: {summary}")
    assert not failed, "\n".join(failed)


def _table_checks(tid):
    start = time.perf_counter()
    rep = reproduce_table(tid)
    elapsed = time.perf_counter() - start
    checks = []
    for row in rep.rows:
        for name in ("model1", "hybrid_va"):
            d = row.abs_delta[name]
            checks.append((d <= TABLE_TOL, f"{tid} {name} param={row.param:g} delta={d:.2e}"))
    checks.append((elapsed < 1.0, f"{tid} runtime {elapsed:.3f}s"))
    worst = max(max(r.abs_delta.values()) for r in rep.rows)
    checks.append((True, f"{tid} {len(rep.rows)} rows, worst delta {worst:.1e}, {elapsed:.3f}s"))
    return checks


def test_01_table1_reproduction():
    rep = reproduce_table("T1")
    spot50 = next(r for r in rep.rows if r.param == 50.0)
    spot64 = next(r for r in rep.rows if r.param == 64.0)
    checks = _table_checks("T1")
    checks.insert(0, (abs(spot50.computed["hybrid_va"] - 1.4219) <= TABLE_TOL, "HVA S=50"))
    checks.insert(0, (abs(spot64.computed["hybrid_va"] - 0.2529) <= TABLE_TOL, "HVA S=64"))
    checks.insert(0, (abs(spot50.computed["model1"] - 1.5417) <= TABLE_TOL, "M1 S=50"))
    record(1, "Table 1 Model1/Hybrid VA within 1e-3, <1 s", checks)


def test_02_tables_2_to_4_reproduction():
    checks = []
    for tid in ("T2", "T3", "T4"):
        checks += _table_checks(tid)
    checks.append((True, "T2-T4 all rows within 1e-3, each < 1 s"))
    record(2, "Tables 2-4 Model1/Hybrid VA within 1e-3, <1 s each", checks)


def test_03_table1_error_statistics():
    rep = reproduce_table("T1")
    hva, m1 = rep.metrics["hybrid_va"], rep.metrics["model1"]
    checks = [
        (abs(hva.mae - 0.0903) <= METRIC_TOL, f"HVA MAE {hva.mae:.4f}"),
        (abs(hva.rmse - 0.0654) <= METRIC_TOL, f"HVA RMSE {hva.rmse:.4f}"),
        (abs(m1.mae - 0.1765) <= METRIC_TOL, f"M1 MAE {m1.mae:.4f}"),
        (abs(m1.rmse - 0.1109) <= METRIC_TOL, f"M1 RMSE {m1.rmse:.4f}"),
    ]
    checks.append((True, f"HVA {hva.mae:.4f}/{hva.rmse:.4f}, M1 {m1.mae:.4f}/{m1.rmse:.4f}"))
    record(3, "Table 1 MAE/RMSE within 2e-3", checks)


@pytest.mark.slow
def test_04_monte_carlo_benchmark(market, uo_call, one_div):
    start = time.perf_counter()
    est = simulate_uo_call(market, uo_call, one_div,
                           McConfig(paths=1_000_000, antithetic=True, bridge_correction=True))
    elapsed = time.perf_counter() - start
    checks = [
        (abs(est.mean - 1.5054) <= 0.01, f"mean {est.mean:.4f} vs 1.5054"),
        (est.std_error < 0.003, f"std_error {est.std_error:.4f}"),
        (elapsed < 60.0, f"runtime {elapsed:.1f}s"),
        (True, f"{est.mean:.4f} +/- {est.std_error:.4f} in {elapsed:.1f}s"),
    ]
    record(4, "MC at defaults within 0.01 of 1.5054, se<0.003, <60 s", checks)


@pytest.mark.slow
def test_05_closed_form_vs_monte_carlo():
    checks = []
    contract = BarrierContract(VanillaContract(50.0, 1.0), 65.0)
    for i, spot in enumerate((46.0, 50.0, 54.0)):
        for j, vol in enumerate((0.15, 0.2, 0.25)):
            m = MarketState(spot, 0.03, vol)
            # bridge monitoring is exact between grid points, so a coarse grid is unbiased
            est = simulate_uo_call(m, contract, DividendSchedule(),
                                   McConfig(paths=1_000_000, steps_per_interval=25, seed=100 + 3 * i + j))
            cf = uo_call_price(spot, 50.0, 65.0, 0.0, 0.03, 0.03, vol, 1.0)
            z = abs(cf - est.mean) / est.std_error
            checks.append((z <= 3.0, f"S={spot:g} vol={vol:g}: |cf-mc|={abs(cf - est.mean):.4f} ({z:.2f} se)"))
    worst = max(float(d.split("(")[1].split()[0]) for _, d in checks)
    checks.append((True, f"9 points, worst {worst:.2f} se"))
    record(5, "closed form within 3 se of MC on 3x3 (S, vol) grid", checks)


def _quad_call(spot, strike, rate, vol, maturity):
    drift = (rate - 0.5 * vol * vol) * maturity
    sd = vol * math.sqrt(maturity)
    z0 = (math.log(strike / spot) - drift) / sd
    f = lambda z: (spot * math.exp(drift + sd * z) - strike) * math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    value, _ = integrate.quad(f, z0, z0 + 40.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    return math.exp(-rate * maturity) * value


def test_06_vanilla_properties():
    checks = []
    schedules = [DividendSchedule.from_pairs([(0.5, 1.0)]),
                 DividendSchedule.from_pairs([(0.25, 0.6), (0.75, 1.4)])]
    for method in Method:
        if method is Method.HYBRID_VA:
            continue
        for spot in (40.0, 50.0, 60.0):
            for sched in schedules:
                m = MarketState(spot, 0.03, 0.2)
                c, p = VanillaContract(50.0, 1.0, Side.CALL), VanillaContract(50.0, 1.0, Side.PUT)
                adj = adjust_params(method, m, c, sched)
                lhs = price_vanilla(method, m, c, sched) - price_vanilla(method, m, p, sched)
                rhs = adj.spot_adj - adj.strike_adj * math.exp(-0.03)
                checks.append((abs(lhs - rhs) <= 1e-10 * abs(rhs),
                               f"parity {method.value} S={spot:g}: {abs(lhs - rhs):.1e}"))
    market = MarketState(50.0, 0.03, 0.2)
    for method in Method:
        for side in Side:
            if method is Method.HYBRID_VA and side is Side.PUT:
                continue
            got = price_vanilla(method, market, VanillaContract(50.0, 1.0, side), DividendSchedule())
            want = bs_price(BsInputs(50.0, 50.0, 0.03, 0.2, 1.0), side)
            checks.append((got == want, f"empty schedule {method.value} {side.value}"))
    for args in [(50.0, 50.0, 0.03, 0.2, 1.0), (46.0, 50.0, 0.03, 0.2, 1.0),
                 (60.0, 50.0, 0.05, 0.35, 0.5), (40.0, 55.0, 0.0, 0.6, 2.0),
                 (100.0, 80.0, -0.01, 0.15, 0.25)]:
        d = abs(bs_price(BsInputs(*args)) - _quad_call(*args))
        checks.append((d <= 1e-8, f"quadrature {args}: {d:.1e}"))
    checks.append((True, "parity 1e-10 rel, empty-schedule exact, quadrature 1e-8"))
    record(6, "vanilla property suite", checks)


def test_07_barrier_properties():
    checks = []
    for spot in np.linspace(30.0, 64.0, 18):
        for strike in (35.0, 50.0, 64.9):
            for vol in (0.1, 0.2, 0.5):
                p = uo_call_price(spot, strike, 65.0, 0.0, 0.03, 0.03, vol, 1.0)
                v = bs_price(BsInputs(spot, strike, 0.03, vol, 1.0))
                checks.append((0.0 <= p <= v + 1e-12, f"bounds S={spot:g} K={strike:g} vol={vol:g}"))
    for strike in (65.0, 70.0, 100.0):
        p = uo_call_price(50.0, strike, 65.0, 0.0, 0.03, 0.03, 0.2, 1.0)
        checks.append((p == 0.0, f"K={strike:g}>=B price {p}"))
    far = uo_call_price(50.0, 50.0, 1e8, 0.0, 0.03, 0.03, 0.2, 1.0)
    van = bs_price(BsInputs(50.0, 50.0, 0.03, 0.2, 1.0))
    checks.append((abs(far - van) <= 1e-9, f"B=1e8 vs vanilla {abs(far - van):.1e}"))
    below = uo_call_price(50.0, 65.0 - 1e-6, 65.0, 0.0, 0.03, 0.03, 0.2, 1.0)
    at = uo_call_price(50.0, 65.0, 65.0, 0.0, 0.03, 0.03, 0.2, 1.0)
    checks.append((abs(below - at) <= 1e-4, f"continuity at K=B {abs(below - at):.1e}"))
    checks.append((True, "bounds, K>=B zero, far barrier, continuity"))
    record(7, "barrier property suite", checks)


def test_08_adjustment_identities():
    rng = np.random.default_rng(8)
    checks = []
    for _ in range(200):
        n = int(rng.integers(1, 5))
        pairs = list(zip(rng.uniform(0.01, 1.0, n), rng.uniform(0.0, 3.0, n)))
        sched = DividendSchedule.from_pairs(pairs)
        rate = float(rng.uniform(-0.02, 0.1))
        m = MarketState(float(rng.uniform(30.0, 100.0)), rate, float(rng.uniform(0.05, 0.8)))
        total = pv_dividends(sched, rate, 1.0)
        split = (pv_dividends(sched, rate, 1.0, WeightMode.HYBRID_SPOT)
                 + pv_dividends(sched, rate, 1.0, WeightMode.HYBRID_STRIKE))
        checks.append((abs(split - total) <= 1e-14 * total, f"D split {abs(split - total):.1e}"))
        lhs = hybrid_vol(m, sched, 1.0) * m.vol
        rhs = (avg_vol_spot(m, sched, 1.0, WeightMode.HYBRID_SPOT)
               * avg_vol_strike(m, sched, 1.0, WeightMode.HYBRID_STRIKE))
        checks.append((abs(lhs - rhs) <= 4 * np.finfo(float).eps * rhs, f"vol identity {abs(lhs - rhs):.1e}"))
    for spot, t, d in [(50.0, 0.5, 1.0), (46.0, 0.1, 2.4), (64.0, 0.9, 0.3), (20.0, 0.5, 5.0)]:
        m = MarketState(spot, 0.03, 0.2)
        sched = DividendSchedule.from_pairs([(t, d)])
        s_vol, k_vol = avg_vol_spot(m, sched, 1.0), avg_vol_strike(m, sched, 1.0)
        checks.append((s_vol >= 0.2 >= k_vol, f"ordering S={spot:g}: {s_vol:.6f} >= 0.2 >= {k_vol:.6f}"))
    checks.append((True, "D=D_S+D_K, sigma_H*sigma=sigma_S*sigma_K, spot vol >= sigma >= strike vol"))
    record(8, "adjustment identities", checks)


def test_09_determinism(capsys):
    base = ["mc", "--div", "0.5:1", "--paths", "100000", "--seed", "2024", "--format", "json"]
    outputs = []
    for workers in ("1", "1", "2", "4"):
        assert run(base + ["--workers", workers]) == 0
        outputs.append(capsys.readouterr().out)
    identical = len(set(outputs)) == 1
    mean = json.loads(outputs[0])["mean"]
    record(9, "mc bit-identical across repeats and worker counts",
           [(identical, f"{len(set(outputs))} distinct outputs"), (True, f"mean {mean!r} for 1/1/2/4 workers")])
