"""Shared fixtures: bundled scenarios and a fully-degenerate variant."""

from __future__ import annotations

import dataclasses
import json
import warnings

import pytest

from vinechar.scenario import (
    ScenarioFile,
    ScenarioSpec,
    bundled_scenario_path,
    iter_distributions,
    load_scenario_file,
)
from vinechar.triangular import TriangularDist


def load_bundled(name: str) -> ScenarioFile:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return load_scenario_file(bundled_scenario_path(name))


@pytest.fixture(scope="session")
def independent() -> ScenarioFile:
    return load_bundled("independent")


@pytest.fixture(scope="session")
def integrated() -> ScenarioFile:
    return load_bundled("integrated")


def collapse_to_modes(spec: ScenarioSpec) -> ScenarioSpec:
    """Replace every distribution with a point mass at its base value."""
    groups: dict[str, dict[str, TriangularDist]] = {}
    for var, dist in iter_distributions(spec):
        point = TriangularDist(dist.mode, dist.mode, dist.mode)
        groups.setdefault(var.group, {})[var.field] = point
    replaced = {
        group: dataclasses.replace(getattr(spec, group), **fields)
        for group, fields in groups.items()
    }
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return dataclasses.replace(spec, **replaced)


@pytest.fixture(scope="session")
def degenerate_spec(independent: ScenarioFile) -> ScenarioSpec:
    return collapse_to_modes(independent.spec)


@pytest.fixture()
def scenario_dict(independent: ScenarioFile) -> dict:
    """Mutable plain-dict copy of the independent scenario file."""
    path = bundled_scenario_path("independent")
    return json.loads(path.read_text(encoding="utf-8"))
