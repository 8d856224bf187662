"""Scenario definitions: the declarative parameter set for one simulation.

A scenario bundles the uncertainty distribution of every model input
(biochar plant, vineyard, winery, carbon accounting), the finance
parameters, and the simulation settings. Two scenario kinds exist:

* ``independent`` -- a standalone, profit-seeking biochar producer buys
  feedstock from the industry and sells biochar to growers at market price.
* ``integrated`` -- biochar production runs as a winery-owned division with
  a lower fixed/variable/capital cost structure.

Scenario files are JSON with a strict schema: unknown keys are rejected with
the offending dotted path named, and parse -> serialize -> parse is the
identity. Two files matching the published input tables ship with the
package (``independent.json`` and ``integrated.json``).
"""

from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Any, Iterator

from .finance import FinanceParams
from .triangular import TriangularDist

_SHARE_TOL = 1e-9


class ScenarioFormatError(ValueError):
    """Scenario data does not match the schema; message names file and path."""


class DataConsistencyWarning(UserWarning):
    """Scenario inputs are internally inconsistent but usable."""


class ScenarioKind(enum.Enum):
    INDEPENDENT = "independent"
    INTEGRATED = "integrated"


@dataclass(frozen=True)
class BiocharVars:
    """Biochar plant inputs. Supplies in t/yr, costs in $/t, capital in $."""

    pomace_supply: TriangularDist
    prunings_supply: TriangularDist
    pomace_cost: TriangularDist
    prunings_cost: TriangularDist
    conversion_rate: TriangularDist
    biochar_price: TriangularDist
    fixed_cost_per_t: TriangularDist
    variable_cost_per_t: TriangularDist
    capital_equipment: TriangularDist


@dataclass(frozen=True)
class VineyardVars:
    """Vineyard inputs for the treated-hectare uplift model."""

    total_grape_production: TriangularDist
    yield_t_per_ha: TriangularDist
    yield_increase: TriangularDist
    grape_price: TriangularDist
    direct_cost_per_ha: TriangularDist
    capital_cost_per_t: TriangularDist
    application_rate: TriangularDist
    application_amortization_years: TriangularDist
    max_fraction_treated: TriangularDist
    total_hectares: TriangularDist


@dataclass(frozen=True)
class WineryVars:
    """Winery inputs. Prices and costs in $/L, extraction in L/t of grapes."""

    white_price: TriangularDist
    red_price: TriangularDist
    white_cost: TriangularDist
    red_cost: TriangularDist
    white_share: TriangularDist
    red_share: TriangularDist
    extraction_rate: TriangularDist


@dataclass(frozen=True)
class CarbonVars:
    """Carbon accounting inputs.

    ``agricultural_benefit_per_t`` and ``coproduct_benefit_per_t`` are the
    per-tonne-CO2 benefit credits subtracted in the sequestration cost
    formula; the bundled values are calibrated so the mean sequestration
    cost reproduces the reference figures (see RECONCILIATION.md).
    """

    carbon_content: TriangularDist
    offset_price: float
    co2_per_car: float
    agricultural_benefit_per_t: float
    coproduct_benefit_per_t: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.carbon_content.low and self.carbon_content.high <= 1.0:
            raise ValueError("carbon_content must lie within [0, 1]")
        for name in ("offset_price", "co2_per_car", "coproduct_benefit_per_t"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.co2_per_car == 0:
            raise ValueError("co2_per_car must be > 0")


@dataclass(frozen=True)
class ScenarioSpec:
    """Full parameter set for one scenario run."""

    kind: ScenarioKind
    finance: FinanceParams
    biochar: BiocharVars
    vineyard: VineyardVars
    winery: WineryVars
    carbon: CarbonVars

    def __post_init__(self) -> None:
        share_sum = self.winery.white_share.mode + self.winery.red_share.mode
        if abs(share_sum - 1.0) > _SHARE_TOL:
            raise ValueError(
                f"winery white_share + red_share must sum to 1 at base values, got {share_sum!r}"
            )
        expected = self.vineyard.total_hectares.mode * self.vineyard.yield_t_per_ha.mode
        stated = self.vineyard.total_grape_production.mode
        if stated > 0 and abs(stated - expected) / stated > 0.05:
            # total_hectares x yield is authoritative; the stated production
            # total is carried only for reference.
            warnings.warn(
                f"vineyard total_grape_production ({stated:,.0f} t) disagrees with "
                f"total_hectares x yield_t_per_ha ({expected:,.0f} t); the model uses "
                "the hectares/yield pair",
                DataConsistencyWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class McConfig:
    """Simulation settings: iteration count, master seed, histogram bins."""

    iterations: int = 1000
    master_seed: int = 0
    histogram_bins: int = 30

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations!r}")
        if self.histogram_bins < 1:
            raise ValueError(f"histogram_bins must be >= 1, got {self.histogram_bins!r}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned, got {self.master_seed!r}")


@dataclass(frozen=True)
class ScenarioFile:
    """On-disk scenario: the spec plus its simulation settings."""

    spec: ScenarioSpec
    mc: McConfig


@dataclass(frozen=True)
class Variable:
    """One uncertain input: its stream/matrix id and where it lives in the spec."""

    var_id: str
    group: str
    field: str


def _registry() -> tuple[Variable, ...]:
    out = []
    for group, cls in (
        ("biochar", BiocharVars),
        ("vineyard", VineyardVars),
        ("winery", WineryVars),
    ):
        out.extend(Variable(f"{group}.{f.name}", group, f.name) for f in fields(cls))
    out.append(Variable("carbon.carbon_content", "carbon", "carbon_content"))
    return tuple(out)


#: Every sampled variable, in canonical order. The order fixes the column
#: layout of sample matrices; per-variable stream keying means it does not
#: affect the draws themselves.
VARIABLES: tuple[Variable, ...] = _registry()


def iter_distributions(spec: ScenarioSpec) -> Iterator[tuple[Variable, TriangularDist]]:
    for var in VARIABLES:
        yield var, getattr(getattr(spec, var.group), var.field)


# --------------------------------------------------------------------------
# Strict JSON schema
# --------------------------------------------------------------------------

_DIST_KEYS = ("low", "mode", "high")


def _as_mapping(node: Any, path: str) -> dict:
    if not isinstance(node, dict):
        raise ScenarioFormatError(f"{path}: expected an object, got {type(node).__name__}")
    return dict(node)


def _take(mapping: dict, key: str, path: str) -> Any:
    if key not in mapping:
        raise ScenarioFormatError(f"{path}.{key}: missing required key")
    return mapping.pop(key)


def _reject_unknown(mapping: dict, path: str) -> None:
    if mapping:
        name = next(iter(mapping))
        raise ScenarioFormatError(f"{path}.{name}: unknown key")


def _number(node: Any, path: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ScenarioFormatError(f"{path}: expected a number, got {type(node).__name__}")
    return float(node)


def _integer(node: Any, path: str) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        raise ScenarioFormatError(f"{path}: expected an integer, got {type(node).__name__}")
    return node


def _dist(node: Any, path: str) -> TriangularDist:
    mapping = _as_mapping(node, path)
    values = {key: _number(_take(mapping, key, path), f"{path}.{key}") for key in _DIST_KEYS}
    _reject_unknown(mapping, path)
    try:
        return TriangularDist(**values)
    except ValueError as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from exc


def _group(node: Any, path: str, cls: type, dist_fields: tuple[str, ...]) -> Any:
    mapping = _as_mapping(node, path)
    parsed = {name: _dist(_take(mapping, name, path), f"{path}.{name}") for name in dist_fields}
    return mapping, parsed, cls


def parse_scenario(data: Any, source: str = "<scenario>") -> ScenarioFile:
    """Build a :class:`ScenarioFile` from parsed JSON, validating strictly."""
    root = _as_mapping(data, source)
    path = source

    kind_raw = _take(root, "kind", path)
    try:
        kind = ScenarioKind(kind_raw)
    except ValueError:
        raise ScenarioFormatError(
            f"{path}.kind: expected 'independent' or 'integrated', got {kind_raw!r}"
        ) from None

    fin_map = _as_mapping(_take(root, "finance", path), f"{path}.finance")
    finance_kwargs = {
        "discount_rate": _number(
            _take(fin_map, "discount_rate", f"{path}.finance"), f"{path}.finance.discount_rate"
        ),
        "horizon_years": _integer(
            _take(fin_map, "horizon_years", f"{path}.finance"), f"{path}.finance.horizon_years"
        ),
        "equipment_life_years": _integer(
            _take(fin_map, "equipment_life_years", f"{path}.finance"),
            f"{path}.finance.equipment_life_years",
        ),
    }
    _reject_unknown(fin_map, f"{path}.finance")

    sim_map = _as_mapping(_take(root, "simulation", path), f"{path}.simulation")
    mc_kwargs = {
        "iterations": _integer(
            _take(sim_map, "iterations", f"{path}.simulation"), f"{path}.simulation.iterations"
        ),
        "master_seed": _integer(
            _take(sim_map, "master_seed", f"{path}.simulation"), f"{path}.simulation.master_seed"
        ),
        "histogram_bins": _integer(
            _take(sim_map, "histogram_bins", f"{path}.simulation"),
            f"{path}.simulation.histogram_bins",
        ),
    }
    _reject_unknown(sim_map, f"{path}.simulation")

    groups = {}
    for group_name, cls in (
        ("biochar", BiocharVars),
        ("vineyard", VineyardVars),
        ("winery", WineryVars),
    ):
        gpath = f"{path}.{group_name}"
        mapping = _as_mapping(_take(root, group_name, path), gpath)
        parsed = {
            f.name: _dist(_take(mapping, f.name, gpath), f"{gpath}.{f.name}")
            for f in fields(cls)
        }
        _reject_unknown(mapping, gpath)
        groups[group_name] = cls(**parsed)

    cpath = f"{path}.carbon"
    carbon_map = _as_mapping(_take(root, "carbon", path), cpath)
    carbon_kwargs = {
        "carbon_content": _dist(_take(carbon_map, "carbon_content", cpath), f"{cpath}.carbon_content"),
    }
    for scalar in (
        "offset_price",
        "co2_per_car",
        "agricultural_benefit_per_t",
        "coproduct_benefit_per_t",
    ):
        carbon_kwargs[scalar] = _number(_take(carbon_map, scalar, cpath), f"{cpath}.{scalar}")
    _reject_unknown(carbon_map, cpath)

    _reject_unknown(root, path)

    try:
        finance = FinanceParams(**finance_kwargs)
        carbon = CarbonVars(**carbon_kwargs)
        spec = ScenarioSpec(
            kind=kind,
            finance=finance,
            biochar=groups["biochar"],
            vineyard=groups["vineyard"],
            winery=groups["winery"],
            carbon=carbon,
        )
        mc = McConfig(**mc_kwargs)
    except ValueError as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from exc
    return ScenarioFile(spec=spec, mc=mc)


def _dist_mapping(dist: TriangularDist) -> dict:
    return {"low": dist.low, "mode": dist.mode, "high": dist.high}


def to_mapping(scenario: ScenarioFile) -> dict:
    """Serialize to the plain-JSON form accepted by :func:`parse_scenario`."""
    spec = scenario.spec
    out: dict[str, Any] = {
        "kind": spec.kind.value,
        "finance": {
            "discount_rate": spec.finance.discount_rate,
            "horizon_years": spec.finance.horizon_years,
            "equipment_life_years": spec.finance.equipment_life_years,
        },
        "simulation": {
            "iterations": scenario.mc.iterations,
            "master_seed": scenario.mc.master_seed,
            "histogram_bins": scenario.mc.histogram_bins,
        },
    }
    for group_name, cls in (
        ("biochar", BiocharVars),
        ("vineyard", VineyardVars),
        ("winery", WineryVars),
    ):
        group = getattr(spec, group_name)
        out[group_name] = {f.name: _dist_mapping(getattr(group, f.name)) for f in fields(cls)}
    out["carbon"] = {
        "carbon_content": _dist_mapping(spec.carbon.carbon_content),
        "offset_price": spec.carbon.offset_price,
        "co2_per_car": spec.carbon.co2_per_car,
        "agricultural_benefit_per_t": spec.carbon.agricultural_benefit_per_t,
        "coproduct_benefit_per_t": spec.carbon.coproduct_benefit_per_t,
    }
    return out


def dumps(scenario: ScenarioFile) -> str:
    return json.dumps(to_mapping(scenario), indent=2) + "\n"


def load_scenario_file(path: str | Path) -> ScenarioFile:
    """Load and validate a scenario JSON file.

    Raises :class:`ScenarioFormatError` with the file name and, for syntax
    errors, the line/column, or with the dotted path of a schema violation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioFormatError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_scenario(data, source=str(path))


def bundled_scenario_names() -> tuple[str, ...]:
    return ("independent", "integrated")


def bundled_scenario_path(name: str) -> Path:
    """Path to a bundled scenario ('independent' or 'integrated')."""
    stem = name.removesuffix(".json")
    if stem not in bundled_scenario_names():
        raise ScenarioFormatError(
            f"unknown bundled scenario {name!r}; choose from {bundled_scenario_names()}"
        )
    with resources.as_file(resources.files("vinechar.data").joinpath(f"{stem}.json")) as p:
        return Path(p)


def resolve_scenario_path(name_or_path: str | Path) -> Path:
    """Interpret a CLI argument as a file path, falling back to bundled names."""
    path = Path(name_or_path)
    if path.exists():
        return path
    stem = path.name.removesuffix(".json")
    if path.parent == Path(".") and stem in bundled_scenario_names():
        return bundled_scenario_path(stem)
    raise ScenarioFormatError(f"{name_or_path}: no such file or bundled scenario")
