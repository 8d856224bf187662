"""Monte Carlo engine: drives iterations and aggregates result distributions.

Each iteration samples a full draw, evaluates the value chain, and records
every input, derived quantity, and outcome as one row of a sample matrix.
Rows are keyed by iteration index and folded in index order, so a run's
output is bit-identical for a given (scenario, config) regardless of how
many workers evaluate it or in what order rows complete.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import chain
from .carbon import SequestrationCostInputs, sequestration_cost
from .finance import crf
from .scenario import VARIABLES, McConfig, ScenarioSpec
from .triangular import SampleStream

McConfig = McConfig  # re-export; the config type is part of this module's API

SECTORS = ("biochar", "vineyard", "winery")

#: Per-draw derived quantities recorded alongside the raw inputs. These are
#: the composite quantities the sensitivity analysis regresses on.
DERIVED_COLUMNS = (
    "biochar.production_tonnes",
    "biochar.operating_cost_per_t",
    "vineyard.treated_hectares",
    "vineyard.extra_grapes_t",
    "vineyard.revenue_increase_per_ha",
    "vineyard.cost_increase_per_ha",
    "vineyard.planting_capital",
    "winery.extra_wine_litres",
    "winery.wine_price_per_l",
    "winery.wine_cost_per_l",
    "carbon.co2_tonnes",
    "carbon.sequestration_cost_per_t",
)

OUTCOME_COLUMNS = tuple(
    f"{sector}.{metric}"
    for sector in SECTORS
    for metric in (
        "bc_ratio",
        "npv",
        "annual_net_income",
        "annual_net_income_per_ha",
        "npv_per_ha",
    )
) + (
    "chain.annual_net_income",
    "chain.npv",
    "chain.annual_net_income_per_ha",
    "chain.npv_per_ha",
)

COLUMNS = tuple(v.var_id for v in VARIABLES) + DERIVED_COLUMNS + OUTCOME_COLUMNS


class EmptyInput(ValueError):
    """Summary statistics need at least one value."""


@dataclass(frozen=True)
class Histogram:
    """Equal-width histogram over [min, max]; counts sum to the sample size."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class Stats:
    mean: float
    min: float
    max: float
    std: float
    p5: float
    p50: float
    p95: float
    histogram: Histogram


@dataclass(frozen=True)
class SectorSummary:
    bc_ratio: Stats
    npv: Stats
    annual_net_income: Stats
    annual_net_income_per_ha: Stats
    npv_per_ha: Stats
    p_viable: float


@dataclass(frozen=True)
class McSummary:
    """Aggregated statistics over all iterations of one run."""

    scenario_kind: str
    iterations: int
    master_seed: int
    sectors: dict[str, SectorSummary]
    chain_annual_net_income: Stats
    chain_npv: Stats
    chain_annual_net_income_per_ha: Stats
    chain_npv_per_ha: Stats
    quantities: dict[str, Stats]


@dataclass(frozen=True)
class SampleMatrix:
    """Columnar record of every iteration: inputs, derived values, outcomes."""

    columns: dict[str, tuple[float, ...]]

    @property
    def iterations(self) -> int:
        return len(next(iter(self.columns.values())))

    def column(self, column_id: str) -> tuple[float, ...]:
        return self.columns[column_id]


def summarize(values, bins: int) -> Stats:
    """Exact mean/min/max, unbiased std, nearest-rank percentiles, histogram."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptyInput("cannot summarize an empty list")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins!r}")
    n = arr.size
    vmin = float(arr.min())
    vmax = float(arr.max())
    if vmax == vmin:
        # Constant sample: exact statistics, a single occupied bin.
        return Stats(
            mean=vmin, min=vmin, max=vmax, std=0.0, p5=vmin, p50=vmin, p95=vmin,
            histogram=Histogram(edges=(vmin, vmax), counts=(int(n),)),
        )
    ordered = np.sort(arr)

    def nearest_rank(p: float) -> float:
        rank = max(1, math.ceil(p / 100.0 * n))
        return float(ordered[rank - 1])

    counts, edges = np.histogram(arr, bins=bins, range=(vmin, vmax))
    return Stats(
        mean=float(arr.mean()),
        min=vmin,
        max=vmax,
        std=float(arr.std(ddof=1)) if n > 1 else 0.0,
        p5=nearest_rank(5),
        p50=nearest_rank(50),
        p95=nearest_rank(95),
        histogram=Histogram(
            edges=tuple(float(e) for e in edges),
            counts=tuple(int(c) for c in counts),
        ),
    )


def evaluate_iteration(
    spec: ScenarioSpec,
    master_seed: int,
    iteration: int,
    vineyard_biochar_price: float | str | None = None,
) -> dict[str, float]:
    """Sample and evaluate one iteration; returns one sample-matrix row."""
    stream = SampleStream(master_seed)
    d = chain.make_draw(spec, stream, iteration)
    result = chain.evaluate_chain(spec, d, vineyard_biochar_price=vineyard_biochar_price)

    alpha = crf(spec.finance.discount_rate, spec.finance.equipment_life_years)
    seq_cost = sequestration_cost(
        SequestrationCostInputs(
            capital=d.capital_equipment,
            alpha=alpha,
            operating_cost=result.biochar_operating_cost,
            co2_tonnes=result.co2_tonnes,
            agricultural_benefit=spec.carbon.agricultural_benefit_per_t,
            coproduct_benefit=spec.carbon.coproduct_benefit_per_t,
        )
    )

    row = {var.var_id: getattr(d, var.field) for var in VARIABLES}
    production = result.biochar_tonnes
    area = result.treated_hectares
    row["biochar.production_tonnes"] = production
    row["biochar.operating_cost_per_t"] = (
        result.biochar_operating_cost / production if production > 0 else 0.0
    )
    row["vineyard.treated_hectares"] = area
    row["vineyard.extra_grapes_t"] = result.extra_grapes_t
    row["vineyard.revenue_increase_per_ha"] = (
        d.yield_t_per_ha * d.yield_increase * d.grape_price
    )
    row["vineyard.cost_increase_per_ha"] = chain.per_hectare(
        chain.vineyard_sector_schedule(
            d, area, chain.resolve_vineyard_price(spec, d, vineyard_biochar_price),
            spec.finance.horizon_years,
        ).costs[0],
        area,
    )
    row["vineyard.planting_capital"] = d.capital_cost_per_t * result.extra_grapes_t
    row["winery.extra_wine_litres"] = result.extra_wine_litres
    row["winery.wine_price_per_l"] = chain.blended_wine_price(d)
    row["winery.wine_cost_per_l"] = chain.blended_wine_cost(d)
    row["carbon.co2_tonnes"] = result.co2_tonnes
    row["carbon.sequestration_cost_per_t"] = seq_cost

    for sector in SECTORS:
        res: chain.SectorResult = getattr(result, sector)
        row[f"{sector}.bc_ratio"] = res.bc_ratio
        row[f"{sector}.npv"] = res.npv
        row[f"{sector}.annual_net_income"] = res.annual_net_income
        row[f"{sector}.annual_net_income_per_ha"] = chain.per_hectare(
            res.annual_net_income, area
        )
        row[f"{sector}.npv_per_ha"] = chain.per_hectare(res.npv, area)
    row["chain.annual_net_income"] = result.total_annual_net_income
    row["chain.npv"] = result.total_npv
    row["chain.annual_net_income_per_ha"] = result.annual_net_income_per_ha
    row["chain.npv_per_ha"] = result.npv_per_ha
    return row


def run(
    spec: ScenarioSpec,
    cfg: McConfig,
    workers: int = 1,
    vineyard_biochar_price: float | str | None = None,
) -> tuple[McSummary, SampleMatrix]:
    """Run the simulation and summarize it.

    ``workers`` only distributes the evaluation; results are folded in
    iteration order, so output is identical for any worker count.
    """
    eval_one = partial(
        evaluate_iteration,
        spec,
        cfg.master_seed,
        vineyard_biochar_price=vineyard_biochar_price,
    )
    indices = range(cfg.iterations)
    if workers <= 1:
        rows = [eval_one(i) for i in indices]
    else:
        chunksize = max(1, cfg.iterations // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(eval_one, indices, chunksize=chunksize))

    matrix = SampleMatrix(
        columns={col: tuple(row[col] for row in rows) for col in COLUMNS}
    )
    return _summarize_matrix(spec, cfg, matrix), matrix


def _summarize_matrix(spec: ScenarioSpec, cfg: McConfig, matrix: SampleMatrix) -> McSummary:
    bins = cfg.histogram_bins

    def stats(column_id: str) -> Stats:
        return summarize(matrix.column(column_id), bins)

    sectors = {}
    for sector in SECTORS:
        bc = matrix.column(f"{sector}.bc_ratio")
        sectors[sector] = SectorSummary(
            bc_ratio=stats(f"{sector}.bc_ratio"),
            npv=stats(f"{sector}.npv"),
            annual_net_income=stats(f"{sector}.annual_net_income"),
            annual_net_income_per_ha=stats(f"{sector}.annual_net_income_per_ha"),
            npv_per_ha=stats(f"{sector}.npv_per_ha"),
            p_viable=sum(1 for v in bc if v > 1.0) / len(bc),
        )

    quantities = {
        name: stats(column)
        for name, column in (
            ("biochar_tonnes", "biochar.production_tonnes"),
            ("treated_hectares", "vineyard.treated_hectares"),
            ("extra_grapes_t", "vineyard.extra_grapes_t"),
            ("extra_wine_litres", "winery.extra_wine_litres"),
            ("co2_tonnes", "carbon.co2_tonnes"),
            ("sequestration_cost_per_t", "carbon.sequestration_cost_per_t"),
        )
    }
    return McSummary(
        scenario_kind=spec.kind.value,
        iterations=cfg.iterations,
        master_seed=cfg.master_seed,
        sectors=sectors,
        chain_annual_net_income=stats("chain.annual_net_income"),
        chain_npv=stats("chain.npv"),
        chain_annual_net_income_per_ha=stats("chain.annual_net_income_per_ha"),
        chain_npv_per_ha=stats("chain.npv_per_ha"),
        quantities=quantities,
    )
