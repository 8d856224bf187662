"""Carbon sequestration quantities, costs, offset revenue, and equivalences.

Biochar locks elemental carbon into soil; tonnes of CO2 removed from the
atmosphere are biochar tonnes x carbon content x 44/12 (the CO2-to-C molar
mass ratio). The per-tonne sequestration cost nets plant capital (annualized
by the capital recovery factor) and operating cost against the agricultural
and coproduct value of the biochar:

    cost per tonne CO2 = (K * alpha + C) / dCO2 - B_a - B_c

The benefit credits B_a and B_c are explicit inputs, not hard-coded; see
RECONCILIATION.md for how the bundled values were calibrated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .finance import crf
from .scenario import ScenarioSpec

#: Molar mass ratio of CO2 to elemental carbon. Exact by definition.
CO2_PER_TONNE_CARBON = 44.0 / 12.0


class ZeroSequestration(ValueError):
    """Sequestration cost is undefined when no CO2 is sequestered."""


@dataclass(frozen=True)
class SequestrationCostInputs:
    """Inputs to the per-tonne sequestration cost.

    capital: plant capital cost ($); alpha: capital recovery factor (1/yr);
    operating_cost: annual plant operating cost ($/yr); co2_tonnes: annual CO2
    sequestered (t/yr); agricultural_benefit / coproduct_benefit: value
    credits ($/t CO2).
    """

    capital: float
    alpha: float
    operating_cost: float
    co2_tonnes: float
    agricultural_benefit: float
    coproduct_benefit: float

    def __post_init__(self) -> None:
        for name in ("capital", "alpha", "operating_cost", "agricultural_benefit",
                     "coproduct_benefit"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.co2_tonnes < 0:
            raise ValueError("co2_tonnes must be >= 0")


def co2_sequestered(biochar_tonnes: float, carbon_content: float) -> float:
    """Tonnes of CO2 locked up by ``biochar_tonnes`` of biochar."""
    if not 0.0 <= carbon_content <= 1.0:
        raise ValueError(f"carbon_content must lie in [0, 1], got {carbon_content!r}")
    return biochar_tonnes * carbon_content * CO2_PER_TONNE_CARBON


def sequestration_cost(inputs: SequestrationCostInputs) -> float:
    """Net cost per tonne of CO2 sequestered.

    May be negative when the benefit credits exceed the gross cost; clamping
    to zero is a reporting concern, not done here.
    """
    if inputs.co2_tonnes == 0.0:
        raise ZeroSequestration("co2_tonnes is zero")
    gross = (inputs.capital * inputs.alpha + inputs.operating_cost) / inputs.co2_tonnes
    return gross - inputs.agricultural_benefit - inputs.coproduct_benefit


def offset_benefit(co2_tonnes: float, offset_price: float) -> float:
    """Revenue from selling offsets on ``co2_tonnes`` at ``offset_price`` $/t CO2."""
    if co2_tonnes < 0 or offset_price < 0:
        raise ValueError("co2_tonnes and offset_price must be >= 0")
    return co2_tonnes * offset_price


def cars_equivalent(co2_tonnes: float, per_car: float) -> int:
    """Whole vehicles whose annual emissions match ``co2_tonnes``."""
    if per_car <= 0:
        raise ValueError(f"per_car must be > 0, got {per_car!r}")
    return math.floor(co2_tonnes / per_car)


def implied_agricultural_benefit(
    capital: float,
    alpha: float,
    operating_cost: float,
    co2_tonnes: float,
    target_cost: float,
    coproduct_benefit: float = 0.0,
) -> float:
    """Solve the cost formula for B_a given a target net cost per tonne."""
    if co2_tonnes == 0.0:
        raise ZeroSequestration("co2_tonnes is zero")
    return (capital * alpha + operating_cost) / co2_tonnes - coproduct_benefit - target_cost


def calibrate_agricultural_benefit(spec: ScenarioSpec, target_cost: float) -> float:
    """B_a that makes the scenario's mean-value sequestration cost hit ``target_cost``.

    Uses the analytic means of the scenario distributions (independent
    sampling makes the mean operating cost and mean CO2 exact products of
    means).
    """
    b = spec.biochar
    feedstock = b.pomace_supply.mean() + b.prunings_supply.mean()
    production = feedstock * b.conversion_rate.mean()
    operating = (
        b.pomace_supply.mean() * b.pomace_cost.mean()
        + b.prunings_supply.mean() * b.prunings_cost.mean()
        + production * (b.variable_cost_per_t.mean() + b.fixed_cost_per_t.mean())
    )
    co2 = co2_sequestered(production, spec.carbon.carbon_content.mean())
    alpha = crf(spec.finance.discount_rate, spec.finance.equipment_life_years)
    return implied_agricultural_benefit(
        capital=b.capital_equipment.mean(),
        alpha=alpha,
        operating_cost=operating,
        co2_tonnes=co2,
        target_cost=target_cost,
        coproduct_benefit=spec.carbon.coproduct_benefit_per_t,
    )
