"""Deterministic financial math: discounting, NPV, benefit-cost ratios,
capital recovery, straight-line amortization, and bisection root finding.

Conventions used throughout the model:

* Annual flows are indexed 1..T and discounted by (1 + r)^-t; capital is
  spent at t = 0 and not discounted.
* The benefit-cost ratio is PV(benefits) / (capital + PV(costs)). It crosses
  1.0 exactly where NPV crosses 0 for the same schedule.
* The capital recovery factor r(1+r)^T / ((1+r)^T - 1) converts a capital sum
  into an equivalent level annual cost; it is the reciprocal of the annuity
  factor. Note that the recovery factor uses the equipment life while
  NPV / benefit-cost use the simulation horizon -- two different T's.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence


class ZeroCostBase(ValueError):
    """Benefit-cost denominator (capital plus discounted costs) is zero."""


class NoBracket(ValueError):
    """Root finder was given endpoints whose objective values do not bracket zero."""


@dataclass(frozen=True)
class FinanceParams:
    """Discount rate and the two planning horizons.

    ``horizon_years`` is the cash-flow horizon for NPV and benefit-cost;
    ``equipment_life_years`` is the (usually longer) life used by the capital
    recovery factor in carbon cost accounting.
    """

    discount_rate: float
    horizon_years: int
    equipment_life_years: int

    def __post_init__(self) -> None:
        if not 0.0 < self.discount_rate < 1.0:
            raise ValueError(f"discount_rate must be in (0, 1), got {self.discount_rate!r}")
        if self.horizon_years < 1:
            raise ValueError(f"horizon_years must be >= 1, got {self.horizon_years!r}")
        if self.equipment_life_years < 1:
            raise ValueError(
                f"equipment_life_years must be >= 1, got {self.equipment_life_years!r}"
            )


@dataclass(frozen=True)
class CashFlowSchedule:
    """Year-0 capital outlay plus non-negative annual benefit/cost flows for years 1..T."""

    capital_at_t0: float
    benefits: tuple[float, ...]
    costs: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.benefits) != len(self.costs):
            raise ValueError(
                f"benefits ({len(self.benefits)}) and costs ({len(self.costs)}) "
                "must cover the same number of years"
            )
        if self.capital_at_t0 < 0:
            raise ValueError(f"capital_at_t0 must be >= 0, got {self.capital_at_t0!r}")
        for label, flows in (("benefits", self.benefits), ("costs", self.costs)):
            for year, value in enumerate(flows, start=1):
                if value < 0:
                    raise ValueError(f"{label}[{year}] must be >= 0, got {value!r}")

    @property
    def years(self) -> int:
        return len(self.benefits)


def level_schedule(
    capital_at_t0: float, annual_benefit: float, annual_cost: float, years: int
) -> CashFlowSchedule:
    """Schedule with the same benefit and cost repeated every year."""
    return CashFlowSchedule(
        capital_at_t0=capital_at_t0,
        benefits=(annual_benefit,) * years,
        costs=(annual_cost,) * years,
    )


def present_value(rate: float, flows: Sequence[float]) -> float:
    """Discounted sum of flows occurring at years 1..len(flows)."""
    return sum(flow / (1.0 + rate) ** year for year, flow in enumerate(flows, start=1))


def annuity_factor(rate: float, years: int) -> float:
    """Present value of 1 per year for ``years`` years: (1 - (1+r)^-T) / r."""
    return (1.0 - (1.0 + rate) ** -years) / rate


def npv(params: FinanceParams, schedule: CashFlowSchedule) -> float:
    """Net present value: -capital + sum of discounted (benefit - cost) flows."""
    _check_horizon(params, schedule)
    rate = params.discount_rate
    total = -schedule.capital_at_t0
    for year, (benefit, cost) in enumerate(zip(schedule.benefits, schedule.costs), start=1):
        total += (benefit - cost) / (1.0 + rate) ** year
    return total


def bc_ratio(params: FinanceParams, schedule: CashFlowSchedule) -> float:
    """Benefit-cost ratio: PV(benefits) / (capital + PV(costs)).

    A ratio above 1.0 marks the venture as viable. Raises
    :class:`ZeroCostBase` when the denominator is zero (nothing is spent).
    """
    _check_horizon(params, schedule)
    rate = params.discount_rate
    pv_benefits = present_value(rate, schedule.benefits)
    denominator = schedule.capital_at_t0 + present_value(rate, schedule.costs)
    if denominator == 0.0:
        raise ZeroCostBase("capital and discounted costs are both zero")
    return pv_benefits / denominator


def crf(rate: float, years: int) -> float:
    """Capital recovery factor r(1+r)^T / ((1+r)^T - 1)."""
    if rate <= 0.0:
        raise ValueError(f"rate must be > 0, got {rate!r}")
    if years < 1:
        raise ValueError(f"years must be >= 1, got {years!r}")
    growth = (1.0 + rate) ** years
    return rate * growth / (growth - 1.0)


def amortize_straight_line(total: float, years: float) -> float:
    """Spread ``total`` evenly over ``years`` with no interest: total / years."""
    if years < 1:
        raise ValueError(f"years must be >= 1, got {years!r}")
    return total / years


def breakeven(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-9,
    max_iterations: int = 200,
) -> float:
    """Bisection root of a monotone ``objective`` bracketed by [lo, hi].

    Returns x with \\|objective(x)\\| <= tol. Raises :class:`NoBracket` when
    objective(lo) and objective(hi) have the same sign. The result does not
    depend on the bracket width as long as the root stays bracketed.
    """
    if not lo < hi:
        raise ValueError(f"bracket must satisfy lo < hi, got [{lo!r}, {hi!r}]")
    f_lo = objective(lo)
    f_hi = objective(hi)
    if abs(f_lo) <= tol:
        return lo
    if abs(f_hi) <= tol:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NoBracket(
            f"objective({lo}) = {f_lo} and objective({hi}) = {f_hi} do not bracket zero"
        )
    a, f_a = lo, f_lo
    b = hi
    for _ in range(max_iterations):
        mid = 0.5 * (a + b)
        f_mid = objective(mid)
        if abs(f_mid) <= tol:
            return mid
        if (f_mid > 0.0) == (f_a > 0.0):
            a, f_a = mid, f_mid
        else:
            b = mid
    raise ValueError(
        f"bisection did not reach |objective| <= {tol} within {max_iterations} iterations"
    )


def _check_horizon(params: FinanceParams, schedule: CashFlowSchedule) -> None:
    if schedule.years != params.horizon_years:
        raise ValueError(
            f"schedule covers {schedule.years} years but the horizon is "
            f"{params.horizon_years}"
        )
