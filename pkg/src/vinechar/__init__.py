"""vinechar: seeded Monte Carlo benefit-cost model of a closed-loop wine
industry biochar value chain.

Three sectors (biochar plant, vineyard, winery) are scored with discounted
benefit-cost analysis under triangular input uncertainty, for an independent
or an integrated biochar producer. The package also accounts for carbon
sequestered as biochar, its per-tonne cost, offset revenue, and ranks input
variables by their R-squared influence on each sector's benefit-cost ratio.
"""

from .carbon import (
    CO2_PER_TONNE_CARBON,
    SequestrationCostInputs,
    cars_equivalent,
    co2_sequestered,
    offset_benefit,
    sequestration_cost,
)
from .chain import (
    ChainResult,
    Draw,
    MARKET_PRICE,
    SectorResult,
    breakeven_price,
    evaluate_chain,
    internal_transfer_price,
    make_base_draw,
    make_draw,
)
from .finance import (
    CashFlowSchedule,
    FinanceParams,
    NoBracket,
    ZeroCostBase,
    amortize_straight_line,
    annuity_factor,
    bc_ratio,
    breakeven,
    crf,
    npv,
)
from .montecarlo import McConfig, McSummary, SampleMatrix, run, summarize
from .scenario import (
    ScenarioFile,
    ScenarioFormatError,
    ScenarioKind,
    ScenarioSpec,
    bundled_scenario_path,
    load_scenario_file,
)
from .sensitivity import SensitivityReport, r_squared, sensitivity_report
from .triangular import SampleStream, TriangularDist

__version__ = "0.1.0"

__all__ = [
    "CO2_PER_TONNE_CARBON",
    "CashFlowSchedule",
    "ChainResult",
    "Draw",
    "FinanceParams",
    "MARKET_PRICE",
    "McConfig",
    "McSummary",
    "NoBracket",
    "SampleMatrix",
    "SampleStream",
    "ScenarioFile",
    "ScenarioFormatError",
    "ScenarioKind",
    "ScenarioSpec",
    "SectorResult",
    "SensitivityReport",
    "SequestrationCostInputs",
    "TriangularDist",
    "ZeroCostBase",
    "amortize_straight_line",
    "annuity_factor",
    "bc_ratio",
    "breakeven",
    "breakeven_price",
    "bundled_scenario_path",
    "cars_equivalent",
    "co2_sequestered",
    "crf",
    "evaluate_chain",
    "internal_transfer_price",
    "load_scenario_file",
    "make_base_draw",
    "make_draw",
    "npv",
    "offset_benefit",
    "r_squared",
    "run",
    "sensitivity_report",
    "sequestration_cost",
    "summarize",
]
