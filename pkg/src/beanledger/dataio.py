"""Configuration loading and report serialization.

The config document is JSON with five optional top-level sections: ``farm``,
``rates``, ``costs``, ``markets``, ``engine``. A file overlays the embedded
Sultan Kudarat survey defaults field by field, so ``{}`` is a complete,
valid config. Unknown fields anywhere are hard errors: a typo in a
decision-support input should never be ignored silently.

Reports are written as CSV (fixed header, currency to 2 decimals, masses to
4) or JSON (same field names, full float precision). Serialization is
deterministic: the same rows produce the same bytes on every run and
platform.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import IO, Any, Mapping, Sequence

from .errors import ConfigError, ValidationError
from .model import (
    ALL_ACTIVITIES,
    AllocationPlan,
    ConversionRates,
    CostBasis,
    CostSchedule,
    FarmParameters,
    MarketOutlet,
    MarketSet,
    ScenarioResult,
)

_TOP_LEVEL_KEYS = ("farm", "rates", "costs", "markets", "engine")


@dataclass(frozen=True)
class EngineOptions:
    """Knobs for the analysis layer rather than the model itself.

    ``cost_basis`` here, when set, overrides the basis carried by the cost
    schedule without editing the schedule; ``None`` defers to it.
    """

    grid_step: float = 0.05
    bisection_tol: float = 1e-6
    cost_basis: CostBasis | None = None

    def __post_init__(self) -> None:
        if not self.grid_step > 0:
            raise ValidationError(f"grid_step must be > 0 (got {self.grid_step!r})")
        if not self.bisection_tol > 0:
            raise ValidationError(f"bisection_tol must be > 0 (got {self.bisection_tol!r})")


@dataclass(frozen=True)
class ModelConfig:
    """Validated bundle of everything one evaluation needs."""

    farm: FarmParameters
    rates: ConversionRates
    costs: CostSchedule
    markets: MarketSet
    engine: EngineOptions = EngineOptions()

    @property
    def effective_costs(self) -> CostSchedule:
        """The cost schedule with any engine-level basis override applied."""
        if self.engine.cost_basis is None:
            return self.costs
        return replace(self.costs, cost_basis=self.engine.cost_basis)


def default_config() -> ModelConfig:
    """The embedded smallholder survey dataset (1 ha reference farm).

    Standard deviations from the survey accompany the means as metadata;
    no computation reads them.
    """
    return ModelConfig(
        farm=FarmParameters(
            yield_per_tree=2.7723,
            trees_per_ha=1025,
            bearing_fraction=0.80,
            damage_rate=0.05,
            land_area=1.0,
        ),
        rates=ConversionRates(fc_to_dc=0.45, fc_to_gcb=0.20),
        costs=CostSchedule(
            fertilizer=0.86,
            fertilizer_application=1.20,
            pruning=2.38,
            weeding=3.38,
            harvesting=5.98,
            transportation=2.35,
            gap=15.20,
            drying=0.56,
            dehulling=2.51,
            cost_basis=CostBasis.ALL_TREES,
            sd_per_activity={
                "fertilizer": 5.1848,
                "fertilizer_application": 5.6521,
                "pruning": 4.2322,
                "weeding": 5.7509,
                "harvesting": 10.4203,
                "transportation": 3.4235,
                "gap": 21.1903,
                "drying": 1.8221,
                "dehulling": 2.9458,
            },
        ),
        markets=MarketSet(
            (
                MarketOutlet(1, "Nestle", 0.0, 0.0, 75.41, sd_fc=0.0, sd_dc=0.0, sd_gcb=3.05956),
                MarketOutlet(2, "Local Traders", 32.5, 70.7, 69.7, sd_fc=27.157, sd_dc=4.51731, sd_gcb=9.54011),
                MarketOutlet(3, "Grower Association", 0.0, 75.0, 74.5, sd_fc=0.0, sd_dc=0.0, sd_gcb=0.0),
                MarketOutlet(4, "Direct Selling", 0.0, 72.96, 70.24, sd_fc=0.0, sd_dc=3.05956, sd_gcb=3.65911),
                MarketOutlet(5, "Other Markets", 12.0, 75.0, 70.12, sd_fc=0.0, sd_dc=0.0, sd_gcb=2.25832),
            )
        ),
        engine=EngineOptions(),
    )


def _require_mapping(value: Any, where: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise ConfigError(f"{where} must be a JSON object (got {type(value).__name__})")
    return value


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number (got {value!r})")
    return float(value)


def _cost_basis(value: Any, where: str, *, nullable: bool = False) -> CostBasis | None:
    if value is None and nullable:
        return None
    if isinstance(value, CostBasis):
        return value
    try:
        return CostBasis(value)
    except (ValueError, TypeError):
        raise ConfigError(
            f"{where} must be ALL_TREES or BEARING_TREES (got {value!r})"
        ) from None


def _overlay_simple(base: Any, data: Any, section: str) -> Any:
    """Overlay a flat numeric dataclass section, rejecting unknown fields."""
    if data is None:
        return base
    data = _require_mapping(data, section)
    names = {f.name for f in fields(base)}
    kwargs = {name: getattr(base, name) for name in names}
    for key, value in data.items():
        if key not in names:
            raise ConfigError(f"unknown field {section}.{key}")
        kwargs[key] = _number(value, f"{section}.{key}")
    return type(base)(**kwargs)


def _overlay_costs(base: CostSchedule, data: Any) -> CostSchedule:
    if data is None:
        return base
    data = _require_mapping(data, "costs")
    kwargs: dict[str, Any] = {name: getattr(base, name) for name in ALL_ACTIVITIES}
    kwargs["cost_basis"] = base.cost_basis
    kwargs["sd_per_activity"] = base.sd_per_activity
    for key, value in data.items():
        if key in ALL_ACTIVITIES:
            kwargs[key] = _number(value, f"costs.{key}")
        elif key == "cost_basis":
            kwargs["cost_basis"] = _cost_basis(value, "costs.cost_basis")
        elif key == "sd_per_activity":
            if value is None:
                kwargs["sd_per_activity"] = None
            else:
                sd = _require_mapping(value, "costs.sd_per_activity")
                kwargs["sd_per_activity"] = {
                    k: _number(v, f"costs.sd_per_activity.{k}") for k, v in sd.items()
                }
        else:
            raise ConfigError(f"unknown field costs.{key}")
    return CostSchedule(**kwargs)


_OUTLET_NUMERIC = ("price_fc", "price_dc", "price_gcb", "sd_fc", "sd_dc", "sd_gcb")


def _overlay_markets(base: MarketSet, data: Any) -> MarketSet:
    if data is None:
        return base
    if not isinstance(data, Sequence) or isinstance(data, (str, bytes)):
        raise ConfigError("markets must be a JSON array of outlet objects")
    outlets = {o.id: o for o in base.outlets}
    for i, entry in enumerate(data):
        entry = _require_mapping(entry, f"markets[{i}]")
        if "id" not in entry:
            raise ConfigError(f"markets[{i}] is missing the required field id")
        raw_id = entry["id"]
        if isinstance(raw_id, bool) or not isinstance(raw_id, int):
            raise ConfigError(f"markets[{i}].id must be an integer (got {raw_id!r})")
        if raw_id not in outlets:
            raise ConfigError(f"markets[{i}].id must be within 1..{len(outlets)} (got {raw_id})")
        kwargs: dict[str, Any] = {}
        for key, value in entry.items():
            if key == "id":
                continue
            if key == "name":
                if not isinstance(value, str):
                    raise ConfigError(f"markets[{i}].name must be a string (got {value!r})")
                kwargs["name"] = value
            elif key in _OUTLET_NUMERIC:
                if key.startswith("sd_") and value is None:
                    kwargs[key] = None
                else:
                    kwargs[key] = _number(value, f"markets[{i}].{key}")
            else:
                raise ConfigError(f"unknown field markets[{i}].{key}")
        outlets[raw_id] = replace(outlets[raw_id], **kwargs)
    return MarketSet(tuple(outlets[k] for k in sorted(outlets)))


def _overlay_engine(base: EngineOptions, data: Any) -> EngineOptions:
    if data is None:
        return base
    data = _require_mapping(data, "engine")
    kwargs: dict[str, Any] = {
        "grid_step": base.grid_step,
        "bisection_tol": base.bisection_tol,
        "cost_basis": base.cost_basis,
    }
    for key, value in data.items():
        if key in ("grid_step", "bisection_tol"):
            kwargs[key] = _number(value, f"engine.{key}")
        elif key == "cost_basis":
            kwargs["cost_basis"] = _cost_basis(value, "engine.cost_basis", nullable=True)
        else:
            raise ConfigError(f"unknown field engine.{key}")
    return EngineOptions(**kwargs)


def parse_config(data: Any, base: ModelConfig | None = None) -> ModelConfig:
    """Overlay a config document onto ``base`` (default: the embedded dataset).

    Every mentioned field replaces its counterpart; everything else is
    inherited. Unknown fields raise :class:`ConfigError`; out-of-bound
    values raise :class:`ValidationError` naming the field and bound.
    """
    if base is None:
        base = default_config()
    data = _require_mapping(data, "config")
    unknown = set(data) - set(_TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    return ModelConfig(
        farm=_overlay_simple(base.farm, data.get("farm"), "farm"),
        rates=_overlay_simple(base.rates, data.get("rates"), "rates"),
        costs=_overlay_costs(base.costs, data.get("costs")),
        markets=_overlay_markets(base.markets, data.get("markets")),
        engine=_overlay_engine(base.engine, data.get("engine")),
    )


def load_config(path: str | Path) -> ModelConfig:
    """Parse and validate a JSON config file, overlaying the defaults."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{p}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_config(data)


def config_to_dict(config: ModelConfig) -> dict[str, Any]:
    """JSON-ready representation; inverse of :func:`parse_config`."""
    return {
        "farm": {
            "yield_per_tree": config.farm.yield_per_tree,
            "trees_per_ha": config.farm.trees_per_ha,
            "bearing_fraction": config.farm.bearing_fraction,
            "damage_rate": config.farm.damage_rate,
            "land_area": config.farm.land_area,
        },
        "rates": {
            "fc_to_dc": config.rates.fc_to_dc,
            "fc_to_gcb": config.rates.fc_to_gcb,
        },
        "costs": {
            **{name: getattr(config.costs, name) for name in ALL_ACTIVITIES},
            "cost_basis": config.costs.cost_basis.value,
            "sd_per_activity": dict(config.costs.sd_per_activity)
            if config.costs.sd_per_activity is not None
            else None,
        },
        "markets": [
            {
                "id": o.id,
                "name": o.name,
                "price_fc": o.price_fc,
                "price_dc": o.price_dc,
                "price_gcb": o.price_gcb,
                "sd_fc": o.sd_fc,
                "sd_dc": o.sd_dc,
                "sd_gcb": o.sd_gcb,
            }
            for o in config.markets.outlets
        ],
        "engine": {
            "grid_step": config.engine.grid_step,
            "bisection_tol": config.engine.bisection_tol,
            "cost_basis": config.engine.cost_basis.value
            if config.engine.cost_basis is not None
            else None,
        },
    }


def plan_to_dict(plan: AllocationPlan) -> dict[str, list[float]]:
    return {"beta": list(plan.beta), "delta": list(plan.delta), "sigma": list(plan.sigma)}


def plan_from_dict(data: Any) -> AllocationPlan:
    """Parse `{"beta": [...], "delta": [...], "sigma": [...]}`, defaults zero."""
    data = _require_mapping(data, "plan")
    unknown = set(data) - {"beta", "delta", "sigma"}
    if unknown:
        raise ConfigError(f"unknown plan field(s): {', '.join(sorted(unknown))}")
    vectors: dict[str, tuple[float, ...]] = {}
    for key in ("beta", "delta", "sigma"):
        raw = data.get(key)
        if raw is None:
            vectors[key] = (0.0,) * 5
            continue
        if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
            raise ConfigError(f"plan.{key} must be an array of numbers")
        vectors[key] = tuple(_number(v, f"plan.{key}[{i + 1}]") for i, v in enumerate(raw))
    return AllocationPlan(**vectors)


def result_to_dict(result: ScenarioResult, warnings_seen: Sequence[str] = ()) -> dict[str, Any]:
    """Flatten a ScenarioResult for JSON transport, full precision."""
    flows = result.flows
    sellable = result.sellable
    echo = result.config_echo
    return {
        "harvest_kg": flows.harvest_kg,
        "flows": {
            "fc_to_market": list(flows.fc_to_market),
            "remaining_after_fc": flows.remaining_after_fc,
            "dc_raw_to_market": list(flows.dc_raw_to_market),
            "remaining_after_dc": flows.remaining_after_dc,
            "gcb_raw_to_market": list(flows.gcb_raw_to_market),
            "unsold_kg": flows.unsold_kg,
        },
        "sellable": {
            "fc": list(sellable.fc),
            "dc": list(sellable.dc),
            "gcb": list(sellable.gcb),
        },
        "revenue_by_market": list(result.revenue_by_market),
        "revenue_total": result.revenue_total,
        "cost_breakdown": dict(result.cost_breakdown),
        "cost_total": result.cost_total,
        "profit": result.profit,
        "plan": plan_to_dict(echo.plan),
        "cost_basis": echo.schedule.cost_basis.value,
        "warnings": list(warnings_seen),
    }


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class ReportFormat(Enum):
    CSV = "csv"
    JSON = "json"


REPORT_HEADER = "scenario,case_id,x,fc_kg,dc_kg,gcb_kg,revenue_php,cost_php,profit_php"


@dataclass(frozen=True)
class ReportRow:
    """One output line: a labelled scenario with masses and money.

    Money fields are held at full precision; rounding to 2 decimals happens
    only when the row is serialized.
    """

    scenario: str
    case_id: int | None
    x: float | None
    fc_kg: float
    dc_kg: float
    gcb_kg: float
    revenue_php: float
    cost_php: float
    profit_php: float

    def __post_init__(self) -> None:
        if not math.isclose(
            self.profit_php, self.revenue_php - self.cost_php, rel_tol=0.0, abs_tol=1e-9
        ):
            raise ValidationError(
                f"profit_php must equal revenue_php - cost_php within 1e-9 "
                f"(got {self.profit_php!r} vs {self.revenue_php - self.cost_php!r})"
            )


def row_from_result(
    scenario: str,
    result: ScenarioResult,
    *,
    case_id: int | None = None,
    x: float | None = None,
) -> ReportRow:
    return ReportRow(
        scenario=scenario,
        case_id=case_id,
        x=x,
        fc_kg=math.fsum(result.sellable.fc),
        dc_kg=math.fsum(result.sellable.dc),
        gcb_kg=math.fsum(result.sellable.gcb),
        revenue_php=result.revenue_total,
        cost_php=result.cost_total,
        profit_php=result.profit,
    )


def _csv_cell_x(x: float | None) -> str:
    return "" if x is None else f"{x:g}"


def _render_report_csv(rows: Sequence[ReportRow]) -> str:
    lines = [REPORT_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                (
                    r.scenario,
                    "" if r.case_id is None else str(r.case_id),
                    _csv_cell_x(r.x),
                    f"{r.fc_kg:.4f}",
                    f"{r.dc_kg:.4f}",
                    f"{r.gcb_kg:.4f}",
                    f"{r.revenue_php:.2f}",
                    f"{r.cost_php:.2f}",
                    f"{r.profit_php:.2f}",
                )
            )
        )
    return "\n".join(lines) + "\n"


def _render_report_json(rows: Sequence[ReportRow]) -> str:
    payload = [
        {
            "scenario": r.scenario,
            "case_id": r.case_id,
            "x": r.x,
            "fc_kg": r.fc_kg,
            "dc_kg": r.dc_kg,
            "gcb_kg": r.gcb_kg,
            "revenue_php": r.revenue_php,
            "cost_php": r.cost_php,
            "profit_php": r.profit_php,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def _write_payload(payload: str, destination: str | Path | IO[str]) -> int:
    data = payload.encode("utf-8")
    if isinstance(destination, (str, Path)):
        Path(destination).write_bytes(data)
    else:
        destination.write(payload)
    return len(data)


def write_report(
    rows: Sequence[ReportRow],
    destination: str | Path | IO[str],
    fmt: ReportFormat = ReportFormat.CSV,
) -> int:
    """Serialize rows to ``destination``; returns the byte count written.

    CSV carries the fixed header and rounds money to centavos and masses to
    4 decimals; JSON carries full precision. Identical rows always produce
    identical bytes.
    """
    if not rows:
        raise ValidationError("rows must be nonempty")
    payload = (
        _render_report_csv(rows) if fmt is ReportFormat.CSV else _render_report_json(rows)
    )
    return _write_payload(payload, destination)


RECONCILIATION_HEADER = (
    "label,published_php,all_trees_php,bearing_trees_php,"
    "deviation_all_trees,deviation_bearing_trees"
)


def write_reconciliation(report, destination: str | Path | IO[str], fmt: ReportFormat = ReportFormat.CSV) -> int:
    """Serialize a reconciliation report; deviations rendered to 6 decimals in CSV."""
    rows = report.rows
    if fmt is ReportFormat.CSV:
        lines = [RECONCILIATION_HEADER]
        for r in rows:
            label = f'"{r.label}"' if "," in r.label else r.label
            lines.append(
                ",".join(
                    (
                        label,
                        f"{r.published_php:.2f}",
                        f"{r.all_trees_php:.2f}",
                        f"{r.bearing_trees_php:.2f}",
                        f"{r.deviation_all_trees:.6f}",
                        f"{r.deviation_bearing_trees:.6f}",
                    )
                )
            )
        payload = "\n".join(lines) + "\n"
    else:
        payload = (
            json.dumps(
                [
                    {
                        "label": r.label,
                        "published_php": r.published_php,
                        "all_trees_php": r.all_trees_php,
                        "bearing_trees_php": r.bearing_trees_php,
                        "deviation_all_trees": r.deviation_all_trees,
                        "deviation_bearing_trees": r.deviation_bearing_trees,
                    }
                    for r in rows
                ],
                indent=2,
            )
            + "\n"
        )
    return _write_payload(payload, destination)
