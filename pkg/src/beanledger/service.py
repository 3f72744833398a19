"""HTTP facade over the engine, consumed by the browser explorer.

The service is a stateless JSON API: the config loaded at startup is
immutable for the process lifetime, and any request may carry a ``config``
overlay that applies to that request alone. All arithmetic happens here on
the server; clients only render responses, which keeps every displayed
number identical to what the CLI reports for the same inputs.

Status codes: 400 for anything wrong with the request itself (unknown or
malformed fields, values out of bounds), 422 when the request is valid but
the computation has no answer (an infeasible breakeven), 404 for unknown
routes. Local decision-support tool; no authentication, not meant for
public deployment.
"""

from __future__ import annotations

import json
import math
import warnings
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .dataio import (
    ModelConfig,
    config_to_dict,
    default_config,
    parse_config,
    plan_from_dict,
    plan_to_dict,
    result_to_dict,
)
from .engine import (
    ConstraintKind,
    OptimizationConstraint,
    SweepSpec,
    breakeven_price,
    breakeven_unit_cost,
    builtin_cases,
    optimize_allocation,
    parse_breakeven_axis,
    run_sweep,
)
from .errors import ConfigError, InfeasibleError, ValidationError, WastedAllocationWarning
from .model import AllocationPlan, Product, evaluate_scenario, wasted_allocations


def _case_to_dict(spec) -> dict[str, Any]:
    return {
        "id": spec.id,
        "product": spec.product.value,
        "description": spec.description,
        "fixed_shares": {str(k): v for k, v in spec.fixed_shares.items()},
        "residual_markets": list(spec.residual_markets),
        "residual_fraction": spec.residual_fraction,
        "split_markets": list(spec.split_markets) if spec.split_markets else None,
    }


def _body_number(body: Mapping[str, Any], key: str) -> float:
    if key not in body:
        raise ConfigError(f"request is missing the required field {key}")
    value = body[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number (got {value!r})")
    return float(value)


def _check_fields(body: Mapping[str, Any], allowed: set[str], where: str) -> None:
    unknown = set(body) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} field(s): {', '.join(sorted(unknown))}")


def _parse_constraint(data: Any) -> OptimizationConstraint:
    if data is None:
        return OptimizationConstraint.unconstrained()
    if not isinstance(data, Mapping):
        raise ConfigError("constraint must be a JSON object")
    _check_fields(data, {"kind", "product", "market_id", "min_fraction"}, "constraint")
    kind_raw = data.get("kind", "NONE")
    try:
        kind = ConstraintKind(str(kind_raw).upper())
    except ValueError:
        raise ConfigError(f"constraint.kind must be NONE or MIN_SHARE (got {kind_raw!r})") from None
    if kind is ConstraintKind.NONE:
        if any(data.get(k) is not None for k in ("product", "market_id", "min_fraction")):
            raise ConfigError("a NONE constraint takes no product, market_id, or min_fraction")
        return OptimizationConstraint.unconstrained()
    try:
        product = Product(str(data.get("product", "")).upper())
    except ValueError:
        raise ConfigError(
            f"constraint.product must be FC, DC, or GCB (got {data.get('product')!r})"
        ) from None
    market_id = data.get("market_id")
    if isinstance(market_id, bool) or not isinstance(market_id, int):
        raise ConfigError(f"constraint.market_id must be an integer (got {market_id!r})")
    min_fraction = _body_number(data, "min_fraction")
    return OptimizationConstraint.min_share(product, market_id, min_fraction)


def create_app(config: ModelConfig | None = None) -> FastAPI:
    """Build the service around one immutable base config."""
    base = config if config is not None else default_config()
    app = FastAPI(title="beanledger", docs_url=None, redoc_url=None)
    # the browser explorer is served from its own origin; everything here is read-only
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(InfeasibleError)
    async def _infeasible(request: Request, exc: InfeasibleError):
        return JSONResponse(status_code=422, content={"error": "infeasible", "reason": str(exc)})

    @app.exception_handler(ValidationError)
    async def _invalid(request: Request, exc: ValidationError):
        return JSONResponse(status_code=400, content={"error": "validation", "detail": str(exc)})

    @app.exception_handler(ConfigError)
    async def _bad_config(request: Request, exc: ConfigError):
        return JSONResponse(status_code=400, content={"error": "validation", "detail": str(exc)})

    async def _read_body(request: Request) -> dict[str, Any]:
        try:
            body = await request.json()
        except json.JSONDecodeError as exc:
            raise ConfigError(f"request body is not valid JSON: {exc.msg}") from exc
        if not isinstance(body, Mapping):
            raise ConfigError("request body must be a JSON object")
        return dict(body)

    def _effective(body: Mapping[str, Any]) -> ModelConfig:
        overlay = body.get("config")
        return parse_config(overlay, base=base) if overlay is not None else base

    def _quiet(config: ModelConfig, plan: AllocationPlan):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WastedAllocationWarning)
            result = evaluate_scenario(
                config.farm, plan, config.markets, config.effective_costs, config.rates
            )
        return result, list(wasted_allocations(result.sellable, config.markets))

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.get("/config")
    async def get_config():
        return config_to_dict(base)

    @app.get("/cases")
    async def get_cases():
        return [_case_to_dict(spec) for spec in builtin_cases()]

    @app.post("/evaluate")
    async def evaluate(request: Request):
        body = await _read_body(request)
        _check_fields(body, {"plan", "config"}, "evaluate")
        if "plan" not in body:
            raise ConfigError("request is missing the required field plan")
        cfg = _effective(body)
        plan = plan_from_dict(body["plan"])
        result, notes = _quiet(cfg, plan)
        return result_to_dict(result, notes)

    @app.post("/sweep")
    async def sweep(request: Request):
        body = await _read_body(request)
        _check_fields(body, {"target", "lo", "hi", "step", "plan", "config"}, "sweep")
        if "target" not in body or not isinstance(body["target"], str):
            raise ConfigError("sweep requires a string field target")
        cfg = _effective(body)
        plan = plan_from_dict(body["plan"]) if body.get("plan") is not None else AllocationPlan.zero()
        spec = SweepSpec(
            target=body["target"],
            lo=_body_number(body, "lo"),
            hi=_body_number(body, "hi"),
            step=_body_number(body, "step"),
        )
        series = run_sweep(spec, cfg.farm, plan, cfg.markets, cfg.effective_costs, cfg.rates)
        return {
            "target": series.target,
            "points": [
                {
                    "x": p.x,
                    "profit": p.profit,
                    "revenue": p.revenue,
                    "cost": p.cost,
                    "fc_kg": p.fc_kg,
                    "dc_kg": p.dc_kg,
                    "gcb_kg": p.gcb_kg,
                }
                for p in series.points
            ],
        }

    @app.post("/breakeven")
    async def breakeven(request: Request):
        body = await _read_body(request)
        _check_fields(body, {"axis", "plan", "config"}, "breakeven")
        if "axis" not in body or not isinstance(body["axis"], str):
            raise ConfigError("breakeven requires a string field axis")
        cfg = _effective(body)
        plan = plan_from_dict(body["plan"]) if body.get("plan") is not None else AllocationPlan.zero()
        mode, product, market_ids = parse_breakeven_axis(body["axis"])
        common = (cfg.farm, plan, cfg.markets, cfg.effective_costs, cfg.rates)
        if mode == "cost":
            value = breakeven_unit_cost(body["axis"], *common, tol=cfg.engine.bisection_tol)
            if value is None:
                raise InfeasibleError("profit negative at zero cost")
        else:
            assert product is not None
            value = breakeven_price(
                product, *common, market_ids=market_ids, tol=cfg.engine.bisection_tol
            )
        unbounded = math.isinf(value)
        return {
            "axis": body["axis"],
            "value": None if unbounded else value,
            "unbounded": unbounded,
        }

    @app.post("/optimize")
    async def optimize(request: Request):
        body = await _read_body(request)
        _check_fields(body, {"constraint", "config"}, "optimize")
        cfg = _effective(body)
        constraint = _parse_constraint(body.get("constraint"))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WastedAllocationWarning)
            plan, result = optimize_allocation(
                constraint, cfg.farm, cfg.markets, cfg.effective_costs, cfg.rates
            )
        notes = list(wasted_allocations(result.sellable, cfg.markets))
        return {"plan": plan_to_dict(plan), "result": result_to_dict(result, notes)}

    return app
