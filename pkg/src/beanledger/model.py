"""Single-period farm-gate profit model for a smallholder coffee operation.

The pipeline runs in five pure steps, each exposed as its own function so
callers can inspect intermediate state:

    compute_harvest   annual fresh-cherry harvest (kg) from agronomic inputs
    cascade_allocate  sequential split of the harvest: fresh-cherry sales,
                      then mass set aside for drying, then for dehulling
    apply_conversion  drying / dehulling mass shrinkage to sellable product
    compute_revenue   product masses x outlet prices, per market and total
    compute_cost      per-tree activity costs, with drying and dehulling
                      prorated by process throughput

``evaluate_scenario`` composes the five and returns a :class:`ScenarioResult`
with the complete mass/revenue/cost/profit breakdown plus an echo of the
inputs, so any result is reproducible from the result object alone.

Units: masses in kg, prices in Php/kg, activity costs in Php/tree/year,
profit in Php per annual cycle. All values are plain floats at full
precision; rounding to centavos happens only in the reporting layer.

Everything here is side-effect free and operates on immutable values, so
scenarios can be evaluated concurrently without coordination.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Sequence

from .errors import InfeasiblePlanError, ValidationError, WastedAllocationWarning

N_MARKETS = 5

# Activities always incurred when producing fresh cherries, in ledger order.
FC_ACTIVITIES = (
    "fertilizer",
    "fertilizer_application",
    "pruning",
    "weeding",
    "harvesting",
    "transportation",
    "gap",
)

# Activities incurred only when mass flows through the matching process.
PROCESS_ACTIVITIES = ("drying", "dehulling")

ALL_ACTIVITIES = FC_ACTIVITIES + PROCESS_ACTIVITIES

# Allocation-fraction sums may exceed 1 by at most this much (float roundoff).
_SUM_TOL = 1e-9


class Product(Enum):
    """Sellable coffee product, in processing order."""

    FC = "FC"   # fresh cherries, sold as harvested
    DC = "DC"   # dried cherries, sun-dried whole fruit
    GCB = "GCB"  # green coffee beans, dehulled dried cherries


class CostBasis(Enum):
    """Which tree count per-tree activity costs are charged against."""

    ALL_TREES = "ALL_TREES"
    BEARING_TREES = "BEARING_TREES"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


def _check_nonneg(name: str, value: float) -> None:
    _require(value >= 0, f"{name} must be >= 0 (got {value!r})")


def _check_unit_interval(name: str, value: float) -> None:
    _require(0.0 <= value <= 1.0, f"{name} must be within [0, 1] (got {value!r})")


@dataclass(frozen=True)
class FarmParameters:
    """Agronomic inputs for the annual harvest.

    yield_per_tree   kg of fresh cherries per tree per year
    trees_per_ha     planted trees per hectare (integer-valued)
    bearing_fraction share of planted trees currently bearing fruit
    damage_rate      share of the crop lost to harvest damage
    land_area        hectares; defaults to the 1 ha reference farm
    """

    yield_per_tree: float
    trees_per_ha: float
    bearing_fraction: float
    damage_rate: float
    land_area: float = 1.0

    def __post_init__(self) -> None:
        _check_nonneg("yield_per_tree", self.yield_per_tree)
        _check_nonneg("trees_per_ha", self.trees_per_ha)
        _require(
            float(self.trees_per_ha).is_integer(),
            f"trees_per_ha must be integer-valued (got {self.trees_per_ha!r})",
        )
        # normalize so 1025.0 and 1025 serialize identically
        object.__setattr__(self, "trees_per_ha", int(self.trees_per_ha))
        _check_unit_interval("bearing_fraction", self.bearing_fraction)
        _check_unit_interval("damage_rate", self.damage_rate)
        _require(self.land_area > 0, f"land_area must be > 0 (got {self.land_area!r})")


@dataclass(frozen=True)
class ConversionRates:
    """Mass conversion from fresh cherries to each processed product."""

    fc_to_dc: float   # fresh-cherry kg -> dried-cherry kg
    fc_to_gcb: float  # fresh-cherry kg -> green-bean kg

    def __post_init__(self) -> None:
        # Dehulling only removes husk, so green-bean yield cannot exceed
        # dried-cherry yield, and neither can exceed the input mass.
        _require(self.fc_to_gcb > 0, f"fc_to_gcb must be > 0 (got {self.fc_to_gcb!r})")
        _require(
            self.fc_to_gcb <= self.fc_to_dc,
            f"fc_to_gcb must be <= fc_to_dc (got {self.fc_to_gcb!r} > {self.fc_to_dc!r})",
        )
        _require(self.fc_to_dc <= 1.0, f"fc_to_dc must be <= 1 (got {self.fc_to_dc!r})")


@dataclass(frozen=True)
class CostSchedule:
    """Annual per-tree activity costs (Php/tree/year) and the charging policy.

    The seven fresh-cherry activities are always incurred; drying and
    dehulling only in proportion to the mass routed through each process.
    ``sd_per_activity`` carries survey standard deviations as metadata and is
    never used in any computation.
    """

    fertilizer: float
    fertilizer_application: float
    pruning: float
    weeding: float
    harvesting: float
    transportation: float
    gap: float
    drying: float
    dehulling: float
    cost_basis: CostBasis = CostBasis.ALL_TREES
    sd_per_activity: Mapping[str, float] | None = None

    def __post_init__(self) -> None:
        for name in ALL_ACTIVITIES:
            _check_nonneg(name, getattr(self, name))
        if self.sd_per_activity is not None:
            unknown = set(self.sd_per_activity) - set(ALL_ACTIVITIES)
            _require(not unknown, f"sd_per_activity has unknown activities: {sorted(unknown)}")

    @property
    def base_fc_cost_per_tree(self) -> float:
        """Sum of the seven always-incurred activities (Php/tree/year)."""
        return math.fsum(getattr(self, name) for name in FC_ACTIVITIES)

    def activity_cost(self, activity: str) -> float:
        _require(activity in ALL_ACTIVITIES, f"unknown activity {activity!r}")
        return getattr(self, activity)

    def with_activity_cost(self, activity: str, value: float) -> "CostSchedule":
        _require(activity in ALL_ACTIVITIES, f"unknown activity {activity!r}")
        return replace(self, **{activity: value})


@dataclass(frozen=True)
class MarketOutlet:
    """One buyer channel with its average price per product (Php/kg).

    A price of 0 means the outlet does not buy that product. The optional
    sd_* fields carry survey standard deviations as metadata only.
    """

    id: int
    name: str
    price_fc: float
    price_dc: float
    price_gcb: float
    sd_fc: float | None = None
    sd_dc: float | None = None
    sd_gcb: float | None = None

    def __post_init__(self) -> None:
        _require(1 <= self.id <= N_MARKETS, f"id must be within 1..{N_MARKETS} (got {self.id!r})")
        _check_nonneg("price_fc", self.price_fc)
        _check_nonneg("price_dc", self.price_dc)
        _check_nonneg("price_gcb", self.price_gcb)

    def price(self, product: Product) -> float:
        if product is Product.FC:
            return self.price_fc
        if product is Product.DC:
            return self.price_dc
        return self.price_gcb

    def with_price(self, product: Product, value: float) -> "MarketOutlet":
        key = {Product.FC: "price_fc", Product.DC: "price_dc", Product.GCB: "price_gcb"}[product]
        return replace(self, **{key: value})


@dataclass(frozen=True)
class MarketSet:
    """The five outlets, ordered by id 1..5."""

    outlets: tuple[MarketOutlet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "outlets", tuple(self.outlets))
        ids = [o.id for o in self.outlets]
        _require(
            sorted(ids) == list(range(1, N_MARKETS + 1)),
            f"outlets must carry ids 1..{N_MARKETS} exactly once (got {ids})",
        )
        object.__setattr__(
            self, "outlets", tuple(sorted(self.outlets, key=lambda o: o.id))
        )

    def outlet(self, market_id: int) -> MarketOutlet:
        _require(1 <= market_id <= N_MARKETS, f"market_id must be within 1..{N_MARKETS} (got {market_id!r})")
        return self.outlets[market_id - 1]

    def prices(self, product: Product) -> tuple[float, ...]:
        return tuple(o.price(product) for o in self.outlets)

    def buying_markets(self, product: Product) -> tuple[int, ...]:
        """Ids of outlets with a positive price for ``product``."""
        return tuple(o.id for o in self.outlets if o.price(product) > 0)

    def max_price(self) -> float:
        return max(p for o in self.outlets for p in (o.price_fc, o.price_dc, o.price_gcb))

    def with_price(self, product: Product, market_ids: Sequence[int], value: float) -> "MarketSet":
        wanted = set(market_ids)
        return MarketSet(
            tuple(
                o.with_price(product, value) if o.id in wanted else o
                for o in self.outlets
            )
        )


def _check_fractions(name: str, values: Sequence[float]) -> tuple[float, ...]:
    vals = tuple(float(v) for v in values)
    _require(len(vals) == N_MARKETS, f"{name} must have {N_MARKETS} entries (got {len(vals)})")
    for i, v in enumerate(vals):
        _require(
            0.0 <= v <= 1.0,
            f"{name}[{i + 1}] must be within [0, 1] (got {v!r})",
        )
    total = math.fsum(vals)
    if total > 1.0 + _SUM_TOL:
        raise InfeasiblePlanError(f"{name} sums to {total:g} > 1")
    return vals


@dataclass(frozen=True)
class AllocationPlan:
    """Per-stage allocation fractions to the five markets.

    ``beta`` splits the harvest into fresh-cherry sales; ``delta`` splits
    what remains into mass set aside for drying; ``sigma`` splits what then
    remains into mass set aside for dehulling. Each vector may sum to at
    most 1: a stage cannot hand out more mass than it holds.
    """

    beta: tuple[float, ...]
    delta: tuple[float, ...]
    sigma: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _check_fractions("beta", self.beta))
        object.__setattr__(self, "delta", _check_fractions("delta", self.delta))
        object.__setattr__(self, "sigma", _check_fractions("sigma", self.sigma))

    @classmethod
    def zero(cls) -> "AllocationPlan":
        z = (0.0,) * N_MARKETS
        return cls(z, z, z)

    @classmethod
    def for_product(cls, product: Product, shares: Mapping[int, float]) -> "AllocationPlan":
        """Plan selling only ``product``, split per ``shares`` (market id -> fraction)."""
        vec = [0.0] * N_MARKETS
        for market_id, fraction in shares.items():
            _require(
                1 <= int(market_id) <= N_MARKETS,
                f"market id must be within 1..{N_MARKETS} (got {market_id!r})",
            )
            vec[int(market_id) - 1] = float(fraction)
        z = (0.0,) * N_MARKETS
        vec = tuple(vec)
        if product is Product.FC:
            return cls(vec, z, z)
        if product is Product.DC:
            return cls(z, vec, z)
        return cls(z, z, vec)

    @classmethod
    def single(cls, product: Product, market_id: int, fraction: float = 1.0) -> "AllocationPlan":
        """Plan routing ``fraction`` of one stage's mass to one market."""
        return cls.for_product(product, {market_id: fraction})

    def stage(self, product: Product) -> tuple[float, ...]:
        if product is Product.FC:
            return self.beta
        if product is Product.DC:
            return self.delta
        return self.sigma


@dataclass(frozen=True)
class ProductFlows:
    """Mass bookkeeping of one cascade pass (all values kg of fresh cherries)."""

    harvest_kg: float
    fc_to_market: tuple[float, ...]
    remaining_after_fc: float
    dc_raw_to_market: tuple[float, ...]   # fresh-cherry mass destined for drying
    remaining_after_dc: float
    gcb_raw_to_market: tuple[float, ...]  # fresh-cherry mass destined for dehulling
    unsold_kg: float

    def __post_init__(self) -> None:
        _check_nonneg("harvest_kg", self.harvest_kg)
        _check_nonneg("remaining_after_fc", self.remaining_after_fc)
        _check_nonneg("remaining_after_dc", self.remaining_after_dc)
        _check_nonneg("unsold_kg", self.unsold_kg)
        for name in ("fc_to_market", "dc_raw_to_market", "gcb_raw_to_market"):
            vec = tuple(getattr(self, name))
            object.__setattr__(self, name, vec)
            _require(len(vec) == N_MARKETS, f"{name} must have {N_MARKETS} entries")
            for i, v in enumerate(vec):
                _check_nonneg(f"{name}[{i + 1}]", v)

    @property
    def total_fc(self) -> float:
        return math.fsum(self.fc_to_market)

    @property
    def total_dc_raw(self) -> float:
        return math.fsum(self.dc_raw_to_market)

    @property
    def total_gcb_raw(self) -> float:
        return math.fsum(self.gcb_raw_to_market)


@dataclass(frozen=True)
class SellableMasses:
    """Market-ready product per outlet after drying/dehulling shrinkage (kg)."""

    fc: tuple[float, ...]
    dc: tuple[float, ...]
    gcb: tuple[float, ...]

    def __post_init__(self) -> None:
        for name in ("fc", "dc", "gcb"):
            vec = tuple(getattr(self, name))
            object.__setattr__(self, name, vec)
            _require(len(vec) == N_MARKETS, f"{name} must have {N_MARKETS} entries")
            for i, v in enumerate(vec):
                _check_nonneg(f"{name}[{i + 1}]", v)

    def mass(self, product: Product) -> tuple[float, ...]:
        if product is Product.FC:
            return self.fc
        if product is Product.DC:
            return self.dc
        return self.gcb

    @property
    def total(self) -> float:
        return math.fsum(self.fc) + math.fsum(self.dc) + math.fsum(self.gcb)


@dataclass(frozen=True)
class ScenarioInputs:
    """Exact inputs of one evaluation, echoed into the result."""

    params: FarmParameters
    plan: AllocationPlan
    markets: MarketSet
    schedule: CostSchedule
    rates: ConversionRates


@dataclass(frozen=True)
class ScenarioResult:
    """Full breakdown of one evaluated plan."""

    flows: ProductFlows
    sellable: SellableMasses
    revenue_by_market: tuple[float, ...]
    revenue_total: float
    cost_breakdown: Mapping[str, float]
    cost_total: float
    profit: float
    config_echo: ScenarioInputs = field(repr=False)


def compute_harvest(params: FarmParameters) -> float:
    """Annual fresh-cherry harvest in kg.

    yield/tree x trees/ha x bearing fraction x (1 - damage rate) x hectares.
    """
    return (
        params.yield_per_tree
        * params.trees_per_ha
        * params.bearing_fraction
        * (1.0 - params.damage_rate)
        * params.land_area
    )


def cascade_allocate(harvest_kg: float, plan: AllocationPlan) -> ProductFlows:
    """Split the harvest through the three-stage allocation cascade.

    Stage 1 sells fresh cherries per ``beta``; stage 2 routes shares of the
    remainder to drying per ``delta``; stage 3 routes shares of what is then
    left to dehulling per ``sigma``. Whatever no stage claims stays unsold.
    Remainders are clamped at zero so float roundoff on fully-allocated
    stages cannot produce negative masses.
    """
    _check_nonneg("harvest_kg", harvest_kg)
    fc = tuple(b * harvest_kg for b in plan.beta)
    remaining_after_fc = max(0.0, harvest_kg - math.fsum(fc))
    dc_raw = tuple(d * remaining_after_fc for d in plan.delta)
    remaining_after_dc = max(0.0, remaining_after_fc - math.fsum(dc_raw))
    gcb_raw = tuple(s * remaining_after_dc for s in plan.sigma)
    unsold = max(0.0, remaining_after_dc - math.fsum(gcb_raw))
    return ProductFlows(
        harvest_kg=harvest_kg,
        fc_to_market=fc,
        remaining_after_fc=remaining_after_fc,
        dc_raw_to_market=dc_raw,
        remaining_after_dc=remaining_after_dc,
        gcb_raw_to_market=gcb_raw,
        unsold_kg=unsold,
    )


def apply_conversion(flows: ProductFlows, rates: ConversionRates) -> SellableMasses:
    """Shrink raw process masses to sellable product; fresh cherries pass through."""
    return SellableMasses(
        fc=flows.fc_to_market,
        dc=tuple(d * rates.fc_to_dc for d in flows.dc_raw_to_market),
        gcb=tuple(g * rates.fc_to_gcb for g in flows.gcb_raw_to_market),
    )


def wasted_allocations(sellable: SellableMasses, markets: MarketSet) -> tuple[str, ...]:
    """Describe any positive mass routed to an outlet that does not buy it."""
    notes = []
    for product in Product:
        for outlet, mass in zip(markets.outlets, sellable.mass(product)):
            if mass > 0 and outlet.price(product) == 0:
                notes.append(
                    f"{outlet.name} (market {outlet.id}) does not buy {product.value}; "
                    f"{mass:.4f} kg allocated there earns nothing"
                )
    return tuple(notes)


def compute_revenue(
    sellable: SellableMasses, markets: MarketSet
) -> tuple[tuple[float, ...], float]:
    """Sales per market and in total (Php).

    Each outlet pays its posted price per product; a zero price contributes
    nothing. Routing mass to a zero-price pair is allowed for what-if
    exploration but raises a :class:`WastedAllocationWarning`.
    """
    for note in wasted_allocations(sellable, markets):
        warnings.warn(note, WastedAllocationWarning, stacklevel=2)
    by_market = tuple(
        o.price_fc * f + o.price_dc * d + o.price_gcb * g
        for o, f, d, g in zip(markets.outlets, sellable.fc, sellable.dc, sellable.gcb)
    )
    return by_market, math.fsum(by_market)


def _tree_count(params: FarmParameters, schedule: CostSchedule) -> float:
    count = params.trees_per_ha * params.land_area
    if schedule.cost_basis is CostBasis.BEARING_TREES:
        count *= params.bearing_fraction
    return count


def compute_cost(
    params: FarmParameters, flows: ProductFlows, schedule: CostSchedule
) -> dict[str, float]:
    """Per-activity cost breakdown in Php.

    The seven base activities are charged on every tree of the configured
    basis regardless of what is sold. Drying is charged in proportion to the
    harvest share that enters a dryer (beans for dehulling dry first under
    natural processing, so both process streams count); dehulling in
    proportion to the share that reaches the huller.
    """
    trees = _tree_count(params, schedule)
    harvest = flows.harvest_kg
    if harvest > 0:
        fraction_dried = (flows.total_dc_raw + flows.total_gcb_raw) / harvest
        fraction_dehulled = flows.total_gcb_raw / harvest
    else:
        fraction_dried = fraction_dehulled = 0.0
    breakdown = {name: getattr(schedule, name) * trees for name in FC_ACTIVITIES}
    breakdown["drying"] = schedule.drying * trees * fraction_dried
    breakdown["dehulling"] = schedule.dehulling * trees * fraction_dehulled
    return breakdown


def evaluate_scenario(
    params: FarmParameters,
    plan: AllocationPlan,
    markets: MarketSet,
    schedule: CostSchedule,
    rates: ConversionRates,
) -> ScenarioResult:
    """Run the full harvest-to-profit pipeline for one plan."""
    harvest = compute_harvest(params)
    flows = cascade_allocate(harvest, plan)
    sellable = apply_conversion(flows, rates)
    revenue_by_market, revenue_total = compute_revenue(sellable, markets)
    cost_breakdown = compute_cost(params, flows, schedule)
    cost_total = math.fsum(cost_breakdown.values())
    return ScenarioResult(
        flows=flows,
        sellable=sellable,
        revenue_by_market=revenue_by_market,
        revenue_total=revenue_total,
        cost_breakdown=cost_breakdown,
        cost_total=cost_total,
        profit=revenue_total - cost_total,
        config_echo=ScenarioInputs(params, plan, markets, schedule, rates),
    )
