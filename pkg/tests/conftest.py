"""Shared fixtures and randomized-input builders."""

from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))  # make `oracle` importable

# wall-clock deadlines flake under load; example counts bound the work instead
settings.register_profile("beanledger", deadline=None)
settings.load_profile("beanledger")

from beanledger import (
    AllocationPlan,
    ConversionRates,
    CostBasis,
    CostSchedule,
    FarmParameters,
    MarketOutlet,
    MarketSet,
    default_config,
)


@pytest.fixture
def config():
    return default_config()


@pytest.fixture
def default_inputs(config):
    """(params, markets, schedule, rates) under the embedded dataset."""
    return config.farm, config.markets, config.effective_costs, config.rates


def random_farm(rng: random.Random) -> FarmParameters:
    return FarmParameters(
        yield_per_tree=rng.uniform(0.2, 6.0),
        trees_per_ha=float(rng.randint(50, 3000)),
        bearing_fraction=rng.uniform(0.05, 1.0),
        damage_rate=rng.uniform(0.0, 0.6),
        land_area=rng.uniform(0.25, 4.0),
    )


def random_rates(rng: random.Random) -> ConversionRates:
    mu = rng.uniform(0.1, 1.0)
    return ConversionRates(fc_to_dc=mu, fc_to_gcb=rng.uniform(0.01, mu))


def random_schedule(rng: random.Random) -> CostSchedule:
    return CostSchedule(
        fertilizer=rng.uniform(0, 20),
        fertilizer_application=rng.uniform(0, 20),
        pruning=rng.uniform(0, 20),
        weeding=rng.uniform(0, 20),
        harvesting=rng.uniform(0, 20),
        transportation=rng.uniform(0, 20),
        gap=rng.uniform(0, 30),
        drying=rng.uniform(0, 5),
        dehulling=rng.uniform(0, 5),
        cost_basis=rng.choice((CostBasis.ALL_TREES, CostBasis.BEARING_TREES)),
    )


def random_markets(rng: random.Random, zero_price_chance: float = 0.2) -> MarketSet:
    def price() -> float:
        return 0.0 if rng.random() < zero_price_chance else rng.uniform(1.0, 120.0)

    return MarketSet(
        tuple(
            MarketOutlet(i, f"outlet {i}", price(), price(), price())
            for i in range(1, 6)
        )
    )


def random_stage(rng: random.Random) -> tuple[float, ...]:
    """Five fractions with a random total in [0, 1]."""
    raw = [rng.random() for _ in range(5)]
    total = sum(raw)
    scale = rng.random() / total
    return tuple(v * scale for v in raw)


def random_plan(rng: random.Random) -> AllocationPlan:
    return AllocationPlan(random_stage(rng), random_stage(rng), random_stage(rng))


def random_grid_stage(rng: random.Random, step: float = 0.05) -> tuple[float, ...]:
    """A stage vector whose entries are multiples of ``step``, summing <= 1."""
    units_total = rng.randint(0, round(1 / step))
    vec = [0.0] * 5
    remaining = units_total
    for _ in range(rng.randint(0, 3)):
        if remaining == 0:
            break
        take = rng.randint(1, remaining)
        vec[rng.randrange(5)] += take * step
        remaining -= take
    return tuple(vec)


def random_grid_plan(rng: random.Random, step: float = 0.05) -> AllocationPlan:
    return AllocationPlan(
        random_grid_stage(rng, step),
        random_grid_stage(rng, step),
        random_grid_stage(rng, step),
    )
