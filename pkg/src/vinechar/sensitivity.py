"""Sensitivity analysis: per-variable R-squared against an outcome, ranked.

Each variable in a sector's sensitivity set is regressed on the outcome
(simple univariate linear regression); the coefficient of determination is
the squared Pearson correlation. Variables are ranked tornado-style by
descending R-squared, with ties broken lexicographically so reports are
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .montecarlo import SampleMatrix


class LengthMismatch(ValueError):
    """Regressor and outcome series differ in length."""


class TooFew(ValueError):
    """Regression needs at least two observations."""


class UnknownSector(ValueError):
    """No sensitivity set is defined for the requested sector."""


class UnknownVariable(ValueError):
    """Requested variable is not a column of the sample matrix."""


#: Default regressor set per sector: the variables the reference analysis
#: ranks in its tornado panels. Mixes raw inputs with per-draw composites.
SECTOR_SENSITIVITY_SETS: dict[str, tuple[str, ...]] = {
    "biochar": (
        "biochar.biochar_price",
        "biochar.variable_cost_per_t",
        "biochar.capital_equipment",
        "biochar.production_tonnes",
    ),
    "vineyard": (
        "vineyard.treated_hectares",
        "vineyard.grape_price",
        "vineyard.revenue_increase_per_ha",
        "vineyard.cost_increase_per_ha",
        "vineyard.planting_capital",
    ),
    "winery": (
        "winery.wine_price_per_l",
        "winery.extra_wine_litres",
        "winery.wine_cost_per_l",
    ),
}


@dataclass(frozen=True)
class SensitivityEntry:
    variable_id: str
    r_squared: float
    rank: int


@dataclass(frozen=True)
class SensitivityReport:
    sector: str
    outcome: str
    entries: tuple[SensitivityEntry, ...]


def r_squared(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Coefficient of determination of a univariate linear fit of ys on xs.

    Equal to the squared Pearson correlation. A zero-variance regressor (or
    outcome) yields 0.0 rather than an error, so constant inputs appear in
    reports harmlessly.
    """
    if len(xs) != len(ys):
        raise LengthMismatch(f"xs has {len(xs)} values, ys has {len(ys)}")
    if len(xs) < 2:
        raise TooFew(f"need at least 2 observations, got {len(xs)}")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    dx = x - x.mean()
    dy = y - y.mean()
    var_x = float(dx @ dx)
    var_y = float(dy @ dy)
    if var_x == 0.0 or var_y == 0.0:
        return 0.0
    cov = float(dx @ dy)
    r2 = cov * cov / (var_x * var_y)
    return min(r2, 1.0)  # guard fp overshoot on exact fits


def sensitivity_report(
    matrix: SampleMatrix,
    sector: str,
    outcome: str = "bc_ratio",
    variables: Sequence[str] | None = None,
) -> SensitivityReport:
    """Rank a sector's variables by their univariate R-squared on ``outcome``.

    ``variables`` overrides the default per-sector set; every id must be a
    sample-matrix column.
    """
    if sector not in SECTOR_SENSITIVITY_SETS:
        raise UnknownSector(
            f"unknown sector {sector!r}; choose from {sorted(SECTOR_SENSITIVITY_SETS)}"
        )
    variable_ids = tuple(variables) if variables is not None else SECTOR_SENSITIVITY_SETS[sector]
    outcome_column = f"{sector}.{outcome}"
    if outcome_column not in matrix.columns:
        raise UnknownVariable(f"outcome column {outcome_column!r} is not in the sample matrix")
    ys = matrix.column(outcome_column)

    scored = []
    for var_id in variable_ids:
        if var_id not in matrix.columns:
            raise UnknownVariable(f"variable {var_id!r} is not in the sample matrix")
        scored.append((var_id, r_squared(matrix.column(var_id), ys)))
    scored.sort(key=lambda item: (-item[1], item[0]))
    entries = tuple(
        SensitivityEntry(variable_id=var_id, r_squared=r2, rank=rank)
        for rank, (var_id, r2) in enumerate(scored, start=1)
    )
    return SensitivityReport(sector=sector, outcome=outcome, entries=entries)
