"""Command-line front end.

Subcommands: ``run`` (simulate and write the result tables), ``sensitivity``
(tornado data), ``breakeven`` (base-value break-even biochar price), and
``carbon`` (sequestration and offset figures). Output files are byte-stable:
the same scenario and seed always produce identical bytes, whatever the
worker count.

Exit codes: 0 success, 1 scenario parse error, 2 model error, 3 unknown
sector, 4 no break-even bracket.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import carbon, chain, montecarlo, sensitivity
from .finance import NoBracket
from .montecarlo import McSummary, SampleMatrix, SECTORS, Stats
from .scenario import (
    McConfig,
    ScenarioFile,
    ScenarioFormatError,
    load_scenario_file,
    resolve_scenario_path,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_MODEL = 2
EXIT_UNKNOWN_SECTOR = 3
EXIT_NO_BRACKET = 4


def _currency(value: float) -> str:
    return f"{value:.2f}"


def _ratio(value: float) -> str:
    return f"{value:.4f}"


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _write_json(path: Path, payload: dict) -> None:
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _stats_mapping(stats: Stats) -> dict:
    return {
        "mean": stats.mean,
        "min": stats.min,
        "max": stats.max,
        "std": stats.std,
        "p5": stats.p5,
        "p50": stats.p50,
        "p95": stats.p95,
        "histogram": {
            "edges": list(stats.histogram.edges),
            "counts": list(stats.histogram.counts),
        },
    }


def summary_mapping(summary: McSummary) -> dict:
    sectors = {}
    for name, sect in summary.sectors.items():
        sectors[name] = {
            "bc_ratio": _stats_mapping(sect.bc_ratio),
            "npv": _stats_mapping(sect.npv),
            "annual_net_income": _stats_mapping(sect.annual_net_income),
            "annual_net_income_per_ha": _stats_mapping(sect.annual_net_income_per_ha),
            "npv_per_ha": _stats_mapping(sect.npv_per_ha),
            "p_viable": sect.p_viable,
        }
    return {
        "scenario_kind": summary.scenario_kind,
        "iterations": summary.iterations,
        "master_seed": summary.master_seed,
        "sectors": sectors,
        "chain": {
            "annual_net_income": _stats_mapping(summary.chain_annual_net_income),
            "npv": _stats_mapping(summary.chain_npv),
            "annual_net_income_per_ha": _stats_mapping(summary.chain_annual_net_income_per_ha),
            "npv_per_ha": _stats_mapping(summary.chain_npv_per_ha),
        },
        "quantities": {
            name: _stats_mapping(stats) for name, stats in summary.quantities.items()
        },
    }


def write_sectors_csv(path: Path, summary: McSummary) -> None:
    header = ["metric", *SECTORS, "chain_total"]
    money_rows = [
        ("annual_net_income", "annual_net_income", summary.chain_annual_net_income),
        ("npv", "npv", summary.chain_npv),
        (
            "annual_net_income_per_ha",
            "annual_net_income_per_ha",
            summary.chain_annual_net_income_per_ha,
        ),
        ("npv_per_ha", "npv_per_ha", summary.chain_npv_per_ha),
    ]
    rows = []
    for label, attr, chain_stats in money_rows:
        rows.append(
            [label]
            + [_currency(getattr(summary.sectors[s], attr).mean) for s in SECTORS]
            + [_currency(chain_stats.mean)]
        )
    rows.append(
        ["bc_ratio"] + [_ratio(summary.sectors[s].bc_ratio.mean) for s in SECTORS] + [""]
    )
    rows.append(
        ["p_bc_gt_1"] + [_ratio(summary.sectors[s].p_viable) for s in SECTORS] + [""]
    )
    _write_csv(path, header, rows)


def write_npv_range_csv(path: Path, summary: McSummary) -> None:
    rows = []
    for name in SECTORS:
        stats = summary.sectors[name].npv
        rows.append([name, _currency(stats.min), _currency(stats.mean), _currency(stats.max)])
    total = summary.chain_npv
    rows.append(
        ["chain_total", _currency(total.min), _currency(total.mean), _currency(total.max)]
    )
    _write_csv(path, ["sector", "minimum", "mean", "maximum"], rows)


def write_histogram_csv(path: Path, stats: Stats) -> None:
    h = stats.histogram
    rows = [
        [_ratio(h.edges[i]), _ratio(h.edges[i + 1] if len(h.edges) > 1 else h.edges[i]), str(c)]
        for i, c in enumerate(h.counts)
    ]
    _write_csv(path, ["bin_start", "bin_end", "count"], rows)


def write_samples_csv(path: Path, matrix: SampleMatrix) -> None:
    header = ["iteration", *montecarlo.COLUMNS]
    rows = [
        [str(i)] + [repr(matrix.columns[col][i]) for col in montecarlo.COLUMNS]
        for i in range(matrix.iterations)
    ]
    _write_csv(path, header, rows)


def write_tornado_csv(path: Path, report: sensitivity.SensitivityReport) -> None:
    rows = [
        [entry.variable_id, _ratio(entry.r_squared), str(entry.rank)]
        for entry in report.entries
    ]
    _write_csv(path, ["variable_id", "r_squared", "rank"], rows)


def _load(args: argparse.Namespace) -> ScenarioFile:
    scenario = load_scenario_file(resolve_scenario_path(args.scenario))
    mc = scenario.mc
    if getattr(args, "iterations", None) is not None:
        mc = replace(mc, iterations=args.iterations)
    if getattr(args, "seed", None) is not None:
        mc = replace(mc, master_seed=args.seed)
    return ScenarioFile(spec=scenario.spec, mc=mc)


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = Path(args.out)
    summary, matrix = montecarlo.run(scenario.spec, scenario.mc, workers=args.workers)
    _write_json(out / "summary.json", summary_mapping(summary))
    write_sectors_csv(out / "sectors.csv", summary)
    write_npv_range_csv(out / "npv_range.csv", summary)
    for sector in SECTORS:
        write_histogram_csv(
            out / f"histogram_{sector}.csv", summary.sectors[sector].bc_ratio
        )
    write_samples_csv(out / "samples.csv", matrix)
    print(
        f"{summary.scenario_kind}: {summary.iterations} iterations, "
        f"seed {summary.master_seed} -> {out}"
    )
    for sector in SECTORS:
        sect = summary.sectors[sector]
        print(
            f"  {sector}: mean B/C {sect.bc_ratio.mean:.2f}, "
            f"P(B/C>1) {sect.p_viable:.1%}, mean NPV ${sect.npv.mean:,.0f}"
        )
    return EXIT_OK


def cmd_sensitivity(args: argparse.Namespace) -> int:
    scenario = _load(args)
    sectors = [args.sector] if args.sector else list(SECTORS)
    for sector in sectors:
        if sector not in sensitivity.SECTOR_SENSITIVITY_SETS:
            print(f"unknown sector: {sector}", file=sys.stderr)
            return EXIT_UNKNOWN_SECTOR
    _, matrix = montecarlo.run(scenario.spec, scenario.mc, workers=args.workers)
    out = Path(args.out)
    for sector in sectors:
        report = sensitivity.sensitivity_report(matrix, sector)
        write_tornado_csv(out / f"tornado_{sector}.csv", report)
        top = report.entries[0]
        print(f"{sector}: rank 1 = {top.variable_id} (R^2 = {top.r_squared:.4f})")
    return EXIT_OK


def cmd_breakeven(args: argparse.Namespace) -> int:
    scenario = _load(args)
    if args.sector != "biochar":
        print(f"break-even is defined for the biochar sector, not {args.sector!r}",
              file=sys.stderr)
        return EXIT_UNKNOWN_SECTOR
    spec = scenario.spec
    price_dist = spec.biochar.biochar_price
    degenerate = False
    try:
        price = chain.breakeven_price(spec)
    except NoBracket:
        if chain.biochar_bc_at_price(spec, price_dist.low) >= 1.0:
            # Viable across the whole price range; the break-even sits at or
            # below the lowest credible price.
            price = price_dist.low
            degenerate = True
        else:
            print(
                f"no break-even price in [{price_dist.low}, {price_dist.high}]",
                file=sys.stderr,
            )
            return EXIT_NO_BRACKET
    payload = {
        "scenario_kind": spec.kind.value,
        "sector": "biochar",
        "breakeven_price_per_t": round(price, 2),
        "bc_ratio_at_price": round(chain.biochar_bc_at_price(spec, price), 12),
        "bracket_low": price_dist.low,
        "bracket_high": price_dist.high,
        "objective_tolerance": 1e-9,
        "degenerate": degenerate,
    }
    _write_json(Path(args.out) / "breakeven.json", payload)
    suffix = " (degenerate: viable at every credible price)" if degenerate else ""
    print(f"break-even biochar price: ${price:,.2f}/t{suffix}")
    return EXIT_OK


def cmd_carbon(args: argparse.Namespace) -> int:
    scenario = _load(args)
    spec = scenario.spec
    offset_price = args.offset_price if args.offset_price is not None else spec.carbon.offset_price
    if offset_price < 0:
        print("offset price must be >= 0", file=sys.stderr)
        return EXIT_MODEL
    summary, _ = montecarlo.run(spec, scenario.mc, workers=args.workers)
    co2 = summary.quantities["co2_tonnes"]
    area = summary.quantities["treated_hectares"]
    cost = summary.quantities["sequestration_cost_per_t"]
    benefit = carbon.offset_benefit(co2.mean, offset_price)
    payload = {
        "scenario_kind": spec.kind.value,
        "iterations": summary.iterations,
        "master_seed": summary.master_seed,
        "co2_tonnes": {"mean": co2.mean, "min": co2.min, "max": co2.max},
        "co2_tonnes_per_treated_ha": co2.mean / area.mean if area.mean > 0 else 0.0,
        "sequestration_cost_per_t": {
            "mean": cost.mean,
            "max": cost.max,
            "min_clamped": max(0.0, cost.min),
        },
        "offset_price_per_t": offset_price,
        "offset_benefit_total": benefit,
        "offset_benefit_per_treated_ha": benefit / area.mean if area.mean > 0 else 0.0,
        "co2_per_car_t": spec.carbon.co2_per_car,
        "cars_equivalent": carbon.cars_equivalent(co2.mean, spec.carbon.co2_per_car),
    }
    _write_json(Path(args.out) / "carbon.json", payload)
    print(
        f"mean CO2 sequestered: {co2.mean:,.0f} t/yr "
        f"(~{payload['cars_equivalent']:,} cars); "
        f"mean sequestration cost ${cost.mean:,.2f}/t"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vinechar",
        description="Monte Carlo benefit-cost model of a wine industry biochar value chain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, simulated: bool = True) -> None:
        p.add_argument(
            "scenario",
            help="scenario JSON path, or a bundled name ('independent', 'integrated')",
        )
        p.add_argument("--out", default=".", help="output directory (default: current)")
        if simulated:
            p.add_argument("--iterations", type=int, default=None,
                           help="override the scenario's iteration count")
            p.add_argument("--seed", type=int, default=None,
                           help="override the scenario's master seed")
            p.add_argument("--workers", type=int, default=1,
                           help="worker processes (does not affect results)")

    p_run = sub.add_parser("run", help="simulate and write summary/sector/sample tables")
    add_common(p_run)
    p_run.set_defaults(handler=cmd_run)

    p_sens = sub.add_parser("sensitivity", help="write tornado (R-squared) tables")
    add_common(p_sens)
    p_sens.add_argument("--sector", default=None,
                        help="one of biochar, vineyard, winery (default: all)")
    p_sens.set_defaults(handler=cmd_sensitivity)

    p_be = sub.add_parser("breakeven", help="solve the base-value break-even biochar price")
    add_common(p_be, simulated=False)
    p_be.add_argument("--sector", default="biochar")
    p_be.set_defaults(handler=cmd_breakeven)

    p_carbon = sub.add_parser("carbon", help="write sequestration and offset figures")
    add_common(p_carbon)
    p_carbon.add_argument("--offset-price", type=float, default=None,
                          help="offset price in $/t CO2 (default: scenario value)")
    p_carbon.set_defaults(handler=cmd_carbon)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ScenarioFormatError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (sensitivity.UnknownSector, sensitivity.UnknownVariable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_SECTOR
    except NoBracket as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_BRACKET
    except (ValueError, ArithmeticError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
