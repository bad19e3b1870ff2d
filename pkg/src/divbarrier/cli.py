"""Command-line frontend: ``divbarrier {price,barrier,mc,table,compare}``.

Exit status: 0 success, 2 invalid input, 3 numerical/singularity failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from .adjust import Method
from .barrier import price_barrier
from .errors import (KnockedOutError, NeedsAssumptionError, PricingError, SingularityError,
                     UnsupportedError, ValidationError)
from .instruments import (BarrierContract, DividendSchedule, MarketState, Side, VanillaContract,
                          dropped_after, parse_dividend_token, read_schedule)
from .montecarlo import McConfig, simulate_uo_call
from .report import (TABLE_IDS, Scenario, error_metrics, load_fixture, reproduce_table,
                     table_scenarios)
from .vanilla import price_vanilla

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("divbarrier")


class CliError(Exception):
    def __init__(self, message, status=EXIT_INVALID):
        super().__init__(message)
        self.status = status


def _div_token(text):
    try:
        return parse_dividend_token(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_market(p, barrier=False):
    g = p.add_argument_group("market and contract")
    g.add_argument("--spot", type=float, default=50.0)
    g.add_argument("--strike", type=float, default=50.0)
    g.add_argument("--rate", type=float, default=0.03)
    g.add_argument("--vol", type=float, default=0.2)
    g.add_argument("--maturity", type=float, default=1.0)
    if barrier:
        g.add_argument("--barrier", type=float, default=65.0)
        g.add_argument("--rebate", type=float, default=0.0)
    g.add_argument("--div", action="append", type=_div_token, default=[], metavar="T:AMOUNT",
                   help="cash dividend, repeatable")
    g.add_argument("--div-file", metavar="PATH", help="CSV file of time,amount rows")


def _add_mc(p, paths=1_000_000):
    g = p.add_argument_group("Monte Carlo")
    g.add_argument("--paths", type=int, default=paths)
    g.add_argument("--steps", type=int, default=None,
                   help="steps per inter-dividend interval (default: daily)")
    g.add_argument("--seed", type=int, default=McConfig.seed)
    g.add_argument("--no-antithetic", action="store_true")
    g.add_argument("--no-bridge", action="store_true")
    g.add_argument("--workers", type=int, default=1)


def _add_format(p):
    p.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")


METHOD_CHOICES = [m.value for m in Method]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divbarrier",
        description="Price vanilla and up-and-out options on stocks paying cash dividends.")
    parser.add_argument("-v", "--verbose", action="store_true", help="diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="European vanilla price under a dividend method")
    p.add_argument("--method", choices=METHOD_CHOICES, default="none")
    p.add_argument("--side", choices=[s.value for s in Side], default="call")
    _add_market(p)
    _add_format(p)

    p = sub.add_parser("barrier", help="closed-form up-and-out call under a dividend method")
    p.add_argument("--method", choices=METHOD_CHOICES, default="none")
    _add_market(p, barrier=True)
    _add_format(p)

    p = sub.add_parser("mc", help="Monte Carlo up-and-out call")
    _add_market(p, barrier=True)
    _add_mc(p)
    _add_format(p)

    p = sub.add_parser("table", help="recompute a published comparison table")
    p.add_argument("--id", required=True, choices=TABLE_IDS, type=str.upper)
    p.add_argument("--div-times", type=_float_list, help="two dividend times (T5/T6 only)")
    p.add_argument("--div-amounts", type=_float_list, help="two dividend amounts (T5 only)")
    p.add_argument("--mc", action="store_true", help="also rerun the Monte Carlo column")
    p.add_argument("--fixtures", metavar="DIR", help="fixture directory override")
    _add_mc(p, paths=200_000)
    _add_format(p)

    p = sub.add_parser("compare", help="all methods side by side with error metrics")
    p.add_argument("--table", choices=TABLE_IDS, type=str.upper,
                   help="use the rows of a published table as scenarios")
    p.add_argument("--benchmark", choices=("mc", "dai-chiu", "run-mc"), default=None,
                   help="fixture column (table mode) or a fresh MC run (default)")
    p.add_argument("--div-times", type=_float_list)
    p.add_argument("--div-amounts", type=_float_list)
    p.add_argument("--fixtures", metavar="DIR")
    _add_market(p, barrier=True)
    _add_mc(p, paths=200_000)
    _add_format(p)
    return parser


def _schedule(args) -> DividendSchedule:
    if args.div and args.div_file:
        raise CliError("--div and --div-file cannot be combined")
    if args.div_file:
        try:
            return read_schedule(args.div_file)
        except OSError as exc:
            raise CliError(f"--div-file: cannot read {args.div_file}: {exc.strerror}") from None
        except ValidationError as exc:
            raise CliError(f"--div-file: {exc}") from None
    return DividendSchedule(tuple(args.div))


def _market(args):
    return MarketState(args.spot, args.rate, args.vol)


def _barrier_contract(args):
    return BarrierContract(VanillaContract(args.strike, args.maturity), args.barrier, args.rebate)


def _mc_config(args) -> McConfig:
    return McConfig(paths=args.paths, steps_per_interval=args.steps, seed=args.seed,
                    antithetic=not args.no_antithetic, bridge_correction=not args.no_bridge)


def _note_drops(schedule, maturity):
    n = dropped_after(schedule, maturity)
    if n:
        print(f"note: {n} dividend(s) after maturity ignored", file=sys.stderr)


def _emit_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(record.keys())
        w.writerow([repr(v) if isinstance(v, float) else v for v in record.values()])
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{k}: {v:.4f}" if isinstance(v, float) else f"{k}: {v}"
                     for k, v in record.items())


def cmd_price(args) -> str:
    schedule = _schedule(args)
    _note_drops(schedule, args.maturity)
    contract = VanillaContract(args.strike, args.maturity, Side(args.side))
    value = price_vanilla(Method(args.method), _market(args), contract, schedule)
    if args.format == "pretty":
        return f"{value:.4f}"
    return _emit_record({"method": args.method, "side": args.side, "price": value}, args.format)


def cmd_barrier(args) -> str:
    schedule = _schedule(args)
    _note_drops(schedule, args.maturity)
    value = price_barrier(Method(args.method), _market(args), _barrier_contract(args), schedule)
    if args.format == "pretty":
        return f"{value:.4f}"
    return _emit_record({"method": args.method, "price": value}, args.format)


def cmd_mc(args) -> str:
    schedule = _schedule(args)
    _note_drops(schedule, args.maturity)
    est = simulate_uo_call(_market(args), _barrier_contract(args), schedule, _mc_config(args),
                           workers=args.workers)
    record = {"mean": est.mean, "std_error": est.std_error, "paths_used": est.paths_used,
              "knockout_fraction": est.knockout_fraction}
    if args.format == "pretty":
        return (f"{est.mean:.4f} +/- {est.std_error:.4f} (paths {est.paths_used}, "
                f"knocked out {est.knockout_fraction:.2%})")
    return _emit_record(record, args.format)


def _render_table(report) -> str:
    lines = [f"{report.table_id}: {report.caption}"]
    has_mc = "mc" in report.rows[0].computed
    head = f"{report.parameter:>16} {'MC':>8} {'Model1':>8} {'HybridVA':>8} {'M1 calc':>8} {'HVA calc':>8}"
    if has_mc:
        head += f" {'MC calc':>8} {'MC se':>8}"
    lines.append(head)
    for r in report.rows:
        line = (f"{r.param:>16g} {r.fixture.mc:8.4f} {r.fixture.model1:8.4f} "
                f"{r.fixture.hybrid_va:8.4f} {r.computed['model1']:8.4f} {r.computed['hybrid_va']:8.4f}")
        if has_mc:
            line += f" {r.computed['mc']:8.4f} {r.mc_std_error:8.4f}"
        lines.append(line)
    for name, m in report.metrics.items():
        printed = report.printed_metrics[name]
        lines.append(f"{name}: MAE {m.mae:.4f} (printed {printed['mae']:.4f})  "
                     f"RMSE {m.rmse:.4f} (printed {printed['rmse']:.4f})")
    for name, tol in report.tolerance_summary().items():
        lines.append(f"{name}: {tol['within_strict']}/{tol['rows']} rows within 1e-4, "
                     f"{tol['within_accepted']}/{tol['rows']} within 1e-3")
    for flag in report.flags:
        lines.append(f"flag: {flag}")
    for note in report.assumptions:
        lines.append(f"assumption: {note}")
    return "\n".join(lines)


def cmd_table(args) -> str:
    config = _mc_config(args) if args.mc else None
    report = reproduce_table(args.id, args.div_times, args.div_amounts, config,
                             args.fixtures, workers=args.workers)
    if args.format == "json":
        return report.to_json()
    if args.format == "csv":
        return report.to_csv().rstrip("\n")
    return _render_table(report)


def cmd_compare(args) -> str:
    methods = list(Method)
    if args.table:
        if args.div or args.div_file:
            raise CliError("--div/--div-file cannot be combined with --table")
        fixture = load_fixture(args.table, args.fixtures)
        scenarios = table_scenarios(fixture, args.div_times, args.div_amounts)
        params = fixture.column("param")
        benchmark = args.benchmark or "mc"
    else:
        if args.benchmark in ("mc", "dai-chiu"):
            raise CliError("--benchmark mc/dai-chiu needs --table; use run-mc for a single point")
        schedule = _schedule(args)
        _note_drops(schedule, args.maturity)
        scenarios = [Scenario(_market(args), _barrier_contract(args), schedule)]
        params = [args.spot]
        fixture, benchmark = None, "run-mc"

    prices = {m.value: [price_barrier(m, sc.market, sc.contract, sc.schedule) for sc in scenarios]
              for m in methods}
    if benchmark == "run-mc":
        config = _mc_config(args)
        bench = [simulate_uo_call(sc.market, sc.contract, sc.schedule, config,
                                  workers=args.workers).mean for sc in scenarios]
    else:
        bench = fixture.column("mc" if benchmark == "mc" else "dai_chiu")
    metrics = {name: error_metrics(col, bench) for name, col in prices.items()}

    if args.format == "json":
        return json.dumps({
            "benchmark": benchmark,
            "rows": [{"param": p, "benchmark": b, "computed": {k: v[i] for k, v in prices.items()}}
                     for i, (p, b) in enumerate(zip(params, bench))],
            "metrics": {k: m.to_dict() for k, m in metrics.items()},
        }, indent=2)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param", "benchmark"] + list(prices))
        for i, (p, b) in enumerate(zip(params, bench)):
            w.writerow([repr(p), repr(b)] + [repr(prices[k][i]) for k in prices])
        return buf.getvalue().rstrip("\n")
    lines = [f"{'param':>10} {'bench':>8} " + " ".join(f"{k:>9}" for k in prices)]
    for i, (p, b) in enumerate(zip(params, bench)):
        lines.append(f"{p:>10g} {b:8.4f} " + " ".join(f"{prices[k][i]:9.4f}" for k in prices))
    lines.append(f"{'MAE':>10} {'':8} " + " ".join(f"{metrics[k].mae:9.4f}" for k in prices))
    lines.append(f"{'RMSE':>10} {'':8} " + " ".join(f"{metrics[k].rmse:9.4f}" for k in prices))
    lines.append(f"benchmark: {benchmark}")
    return "\n".join(lines)


COMMANDS = {"price": cmd_price, "barrier": cmd_barrier, "mc": cmd_mc, "table": cmd_table,
            "compare": cmd_compare}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        output = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"divbarrier: error: {exc}", file=sys.stderr)
        return exc.status
    except SingularityError as exc:
        print(f"divbarrier: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, UnsupportedError, NeedsAssumptionError, KnockedOutError) as exc:
        print(f"divbarrier: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PricingError as exc:
        print(f"divbarrier: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(output)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
