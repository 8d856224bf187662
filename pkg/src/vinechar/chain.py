"""The value-chain model: one sampled draw in, per-sector results out.

The chain is a closed system. Feedstock (grape pomace and vine prunings)
caps biochar output; biochar output caps the vineyard area that can be
treated (subject to a maximum treatable share of total hectares); the grape
yield uplift on treated hectares drives the extra wine volume. All three
sector cash-flow schedules share the quantities of a single draw, so the
tonnage balance holds within every iteration.

Sector accounting conventions (see RECONCILIATION.md for the full
derivation and the checks against the reference figures):

* Biochar plant: revenue = production x price; annual cost = feedstock
  purchases + production x (variable + fixed cost per tonne); equipment
  capital at t = 0.
* Vineyard: benefits and costs are increments on treated hectares only.
  Revenue uplift = yield x yield_increase x grape price per hectare; cost
  uplift = direct cost per hectare x yield_increase; planting capital =
  capital cost per extra tonne x extra tonnes, at t = 0. By default the
  vineyard books no biochar purchase cost -- that is the convention the
  reference summary tables follow; pass a transfer price to
  :func:`evaluate_chain` to charge the vineyard for biochar (amortized
  straight-line over the application life).
* Winery: extra litres = extra grapes x extraction rate, split white/red by
  crop shares; no capital.

Benefits start in year 1; all capital is spent at t = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from . import carbon, finance
from .finance import CashFlowSchedule, FinanceParams, level_schedule
from .scenario import VARIABLES, ScenarioKind, ScenarioSpec, iter_distributions
from .triangular import SampleStream

#: Sentinel for "charge the vineyard the draw's market biochar price".
MARKET_PRICE = "market"


@dataclass(frozen=True)
class Draw:
    """One concrete realization of every uncertain input for one iteration."""

    iteration: int
    # biochar plant
    pomace_supply: float
    prunings_supply: float
    pomace_cost: float
    prunings_cost: float
    conversion_rate: float
    biochar_price: float
    fixed_cost_per_t: float
    variable_cost_per_t: float
    capital_equipment: float
    # vineyard
    total_grape_production: float
    yield_t_per_ha: float
    yield_increase: float
    grape_price: float
    direct_cost_per_ha: float
    capital_cost_per_t: float
    application_rate: float
    application_amortization_years: float
    max_fraction_treated: float
    total_hectares: float
    # winery
    white_price: float
    red_price: float
    white_cost: float
    red_cost: float
    white_share: float
    red_share: float
    extraction_rate: float
    # carbon
    carbon_content: float


@dataclass(frozen=True)
class SectorResult:
    bc_ratio: float
    npv: float
    annual_net_income: float


@dataclass(frozen=True)
class ChainResult:
    """Per-sector outcomes plus the shared physical quantities for one draw."""

    biochar: SectorResult
    vineyard: SectorResult
    winery: SectorResult
    biochar_tonnes: float
    treated_hectares: float
    extra_grapes_t: float
    extra_wine_litres: float
    co2_tonnes: float
    biochar_operating_cost: float
    total_annual_net_income: float
    total_npv: float
    annual_net_income_per_ha: float
    npv_per_ha: float


def make_draw(spec: ScenarioSpec, stream: SampleStream, iteration: int) -> Draw:
    """Sample every variable of ``spec`` for one iteration.

    Each variable is sampled from its own stream cell, so draws are
    reproducible independent of evaluation order or parallelism.
    """
    values = {
        var.field: dist.sample(stream.uniform(iteration, var.var_id))
        for var, dist in iter_distributions(spec)
    }
    return Draw(iteration=iteration, **values)


def make_base_draw(spec: ScenarioSpec) -> Draw:
    """Draw with every variable at its base (most likely) value."""
    values = {var.field: dist.mode for var, dist in iter_distributions(spec)}
    return Draw(iteration=-1, **values)


def draw_within_bounds(spec: ScenarioSpec, draw: Draw) -> bool:
    """True when every sampled value lies inside its distribution's range."""
    return all(
        dist.low <= getattr(draw, var.field) <= dist.high
        for var, dist in iter_distributions(spec)
    )


def biochar_production(d: Draw) -> float:
    """Annual biochar output: (pomace + prunings) x conversion rate."""
    return (d.pomace_supply + d.prunings_supply) * d.conversion_rate


def treated_area(d: Draw, biochar_tonnes: float) -> float:
    """Hectares treated: production / application rate, capped at the treatable share."""
    if d.application_rate <= 0:
        raise ValueError(f"application_rate must be > 0, got {d.application_rate!r}")
    cap = d.max_fraction_treated * d.total_hectares
    return min(biochar_tonnes / d.application_rate, cap)


def extra_grapes(d: Draw, area: float) -> float:
    """Additional grape tonnage from treated hectares."""
    return area * d.yield_t_per_ha * d.yield_increase


def biochar_sector_schedule(d: Draw, horizon: int) -> CashFlowSchedule:
    production = biochar_production(d)
    benefit = production * d.biochar_price
    cost = biochar_annual_operating_cost(d)
    return level_schedule(d.capital_equipment, benefit, cost, horizon)


def biochar_annual_operating_cost(d: Draw) -> float:
    """Feedstock purchases plus per-tonne variable and fixed costs."""
    production = biochar_production(d)
    feedstock = d.pomace_supply * d.pomace_cost + d.prunings_supply * d.prunings_cost
    return feedstock + production * (d.variable_cost_per_t + d.fixed_cost_per_t)


def vineyard_sector_schedule(
    d: Draw, area: float, biochar_price_paid: float, horizon: int
) -> CashFlowSchedule:
    """Incremental vineyard schedule for ``area`` treated hectares.

    ``biochar_price_paid`` is the $/t the grower is charged for biochar; the
    application cost (rate x price) is amortized straight-line over the
    application life. Pass 0.0 to book no biochar purchase.
    """
    if area < 0:
        raise ValueError(f"area must be >= 0, got {area!r}")
    grapes = extra_grapes(d, area)
    capital = d.capital_cost_per_t * grapes
    benefit = grapes * d.grape_price
    cost_per_ha = d.direct_cost_per_ha * d.yield_increase
    if biochar_price_paid:
        cost_per_ha += finance.amortize_straight_line(
            d.application_rate * biochar_price_paid, d.application_amortization_years
        )
    return level_schedule(capital, benefit, area * cost_per_ha, horizon)


def winery_sector_schedule(d: Draw, extra_grapes_t: float, horizon: int) -> CashFlowSchedule:
    """Winery schedule for the extra wine pressed from ``extra_grapes_t``.

    The litres are split white/red by the crop shares. Shares are sampled
    independently, so they are renormalized to sum to 1 before the split:
    the white and red litres must add up to exactly the wine produced.
    """
    if extra_grapes_t < 0:
        raise ValueError(f"extra_grapes_t must be >= 0, got {extra_grapes_t!r}")
    litres = extra_grapes_t * d.extraction_rate
    white_weight, red_weight = _share_weights(d)
    white_litres = litres * white_weight
    red_litres = litres * red_weight
    benefit = white_litres * d.white_price + red_litres * d.red_price
    cost = white_litres * d.white_cost + red_litres * d.red_cost
    return level_schedule(0.0, benefit, cost, horizon)


def _share_weights(d: Draw) -> tuple[float, float]:
    total = d.white_share + d.red_share
    if total <= 0:
        return 0.0, 0.0
    return d.white_share / total, d.red_share / total


def blended_wine_price(d: Draw) -> float:
    """Share-weighted wine price per litre."""
    white_weight, red_weight = _share_weights(d)
    return white_weight * d.white_price + red_weight * d.red_price


def blended_wine_cost(d: Draw) -> float:
    """Share-weighted wine cost per litre."""
    white_weight, red_weight = _share_weights(d)
    return white_weight * d.white_cost + red_weight * d.red_cost


def _sector_result(params: FinanceParams, schedule: CashFlowSchedule) -> SectorResult:
    return SectorResult(
        bc_ratio=finance.bc_ratio(params, schedule),
        npv=finance.npv(params, schedule),
        annual_net_income=schedule.benefits[0] - schedule.costs[0],
    )


def resolve_vineyard_price(
    spec: ScenarioSpec, d: Draw, vineyard_biochar_price: float | str | None
) -> float:
    """Turn the biochar-charging convention into a concrete $/t price.

    ``None`` books no purchase (default convention). ``MARKET_PRICE`` charges
    the draw's market price, as an independent producer would. A float is an
    explicit (e.g. internal transfer) price.
    """
    if vineyard_biochar_price is None:
        return 0.0
    if vineyard_biochar_price == MARKET_PRICE:
        return d.biochar_price
    return float(vineyard_biochar_price)


def evaluate_chain(
    spec: ScenarioSpec,
    d: Draw,
    vineyard_biochar_price: float | str | None = None,
) -> ChainResult:
    """Build all three sector schedules for a draw and score them."""
    params = spec.finance
    horizon = params.horizon_years

    production = biochar_production(d)
    area = treated_area(d, production)
    grapes = extra_grapes(d, area)
    price_paid = resolve_vineyard_price(spec, d, vineyard_biochar_price)

    biochar_sched = biochar_sector_schedule(d, horizon)
    vineyard_sched = vineyard_sector_schedule(d, area, price_paid, horizon)
    winery_sched = winery_sector_schedule(d, grapes, horizon)

    biochar_res = _sector_result(params, biochar_sched)
    vineyard_res = _sector_result(params, vineyard_sched)
    winery_res = _sector_result(params, winery_sched)

    total_income = (
        biochar_res.annual_net_income
        + vineyard_res.annual_net_income
        + winery_res.annual_net_income
    )
    total_npv = biochar_res.npv + vineyard_res.npv + winery_res.npv

    return ChainResult(
        biochar=biochar_res,
        vineyard=vineyard_res,
        winery=winery_res,
        biochar_tonnes=production,
        treated_hectares=area,
        extra_grapes_t=grapes,
        extra_wine_litres=grapes * d.extraction_rate,
        co2_tonnes=carbon.co2_sequestered(production, d.carbon_content),
        biochar_operating_cost=biochar_sched.costs[0],
        total_annual_net_income=total_income,
        total_npv=total_npv,
        annual_net_income_per_ha=per_hectare(total_income, area),
        npv_per_ha=per_hectare(total_npv, area),
    )


def per_hectare(value: float, area: float) -> float:
    """Per-hectare figure; zero when no hectares are treated."""
    return value / area if area > 0 else 0.0


def biochar_bc_at_price(spec: ScenarioSpec, price: float) -> float:
    """Biochar-sector benefit-cost ratio at a given price, all else at base."""
    d = replace(make_base_draw(spec), biochar_price=price)
    schedule = biochar_sector_schedule(d, spec.finance.horizon_years)
    return finance.bc_ratio(spec.finance, schedule)


def breakeven_price(spec: ScenarioSpec, tol: float = 1e-9) -> float:
    """Biochar price at which the sector breaks even (B/C = 1).

    Every other variable is held at its base value; the root is bracketed by
    the price distribution's [low, high]. Raises :class:`finance.NoBracket`
    when the sector cannot break even inside that range.
    """
    price_dist = spec.biochar.biochar_price
    return finance.breakeven(
        lambda price: biochar_bc_at_price(spec, price) - 1.0,
        price_dist.low,
        price_dist.high,
        tol=tol,
    )


def internal_transfer_price(spec: ScenarioSpec, tol: float = 1e-9) -> float:
    """Price an integrated operation charges itself for biochar.

    The integrated division transfers at its break-even price (its cost
    base); an independent producer sells at market.
    """
    if spec.kind is ScenarioKind.INTEGRATED:
        return breakeven_price(spec, tol=tol)
    return spec.biochar.biochar_price.mode


# Draw field order must mirror the variable registry; guard against drift.
_DRAW_FIELDS = {f.name for f in fields(Draw)} - {"iteration"}
assert _DRAW_FIELDS == {v.field for v in VARIABLES}, "Draw fields out of sync with registry"
