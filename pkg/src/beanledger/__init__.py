"""Deterministic profit model and market-choice explorer for a smallholder coffee farm.

The package models one annual cycle: harvest, an allocation cascade across
fresh cherries, dried cherries, and green beans, sales into five market
outlets, and per-tree activity costs. On top of that sit a 14-case scenario
catalog, parameter sweeps, breakeven solvers, an allocation optimizer, a
CLI, and an HTTP service for the browser explorer.
"""

from .dataio import (
    EngineOptions,
    ModelConfig,
    ReportFormat,
    ReportRow,
    config_to_dict,
    default_config,
    load_config,
    parse_config,
    plan_from_dict,
    plan_to_dict,
    result_to_dict,
    row_from_result,
    write_reconciliation,
    write_report,
)
from .engine import (
    CaseSpec,
    CaseVariant,
    ConstraintKind,
    OptimizationConstraint,
    ReconciliationReport,
    ReconciliationRow,
    SweepPoint,
    SweepSeries,
    SweepSpec,
    breakeven_price,
    breakeven_unit_cost,
    builtin_cases,
    case_by_id,
    grid_points,
    optimize_allocation,
    parse_breakeven_axis,
    reconcile_with_reference,
    run_case,
    run_sweep,
)
from .errors import (
    BeanledgerError,
    CaseNotFoundError,
    ConfigError,
    InfeasibleBreakevenError,
    InfeasibleError,
    InfeasiblePlanError,
    ValidationError,
    WastedAllocationWarning,
)
from .model import (
    ALL_ACTIVITIES,
    FC_ACTIVITIES,
    N_MARKETS,
    PROCESS_ACTIVITIES,
    AllocationPlan,
    ConversionRates,
    CostBasis,
    CostSchedule,
    FarmParameters,
    MarketOutlet,
    MarketSet,
    Product,
    ProductFlows,
    ScenarioInputs,
    ScenarioResult,
    SellableMasses,
    apply_conversion,
    cascade_allocate,
    compute_cost,
    compute_harvest,
    compute_revenue,
    evaluate_scenario,
    wasted_allocations,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_ACTIVITIES",
    "FC_ACTIVITIES",
    "N_MARKETS",
    "PROCESS_ACTIVITIES",
    "AllocationPlan",
    "BeanledgerError",
    "CaseNotFoundError",
    "CaseSpec",
    "CaseVariant",
    "ConfigError",
    "ConstraintKind",
    "ConversionRates",
    "CostBasis",
    "CostSchedule",
    "EngineOptions",
    "FarmParameters",
    "InfeasibleBreakevenError",
    "InfeasibleError",
    "InfeasiblePlanError",
    "MarketOutlet",
    "MarketSet",
    "ModelConfig",
    "OptimizationConstraint",
    "Product",
    "ProductFlows",
    "ReconciliationReport",
    "ReconciliationRow",
    "ReportFormat",
    "ReportRow",
    "ScenarioInputs",
    "ScenarioResult",
    "SellableMasses",
    "SweepPoint",
    "SweepSeries",
    "SweepSpec",
    "ValidationError",
    "WastedAllocationWarning",
    "apply_conversion",
    "breakeven_price",
    "breakeven_unit_cost",
    "builtin_cases",
    "cascade_allocate",
    "case_by_id",
    "compute_cost",
    "compute_harvest",
    "compute_revenue",
    "config_to_dict",
    "default_config",
    "evaluate_scenario",
    "grid_points",
    "load_config",
    "optimize_allocation",
    "parse_breakeven_axis",
    "parse_config",
    "plan_from_dict",
    "plan_to_dict",
    "reconcile_with_reference",
    "result_to_dict",
    "row_from_result",
    "run_case",
    "run_sweep",
    "wasted_allocations",
    "write_reconciliation",
    "write_report",
]
