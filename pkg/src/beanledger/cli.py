"""Command-line interface.

One executable, seven subcommands:

    evaluate    profit breakdown for one allocation plan
    case        run one catalog case (all its variants)
    sweep       profit curve along a parameter axis
    breakeven   zero-profit price or unit cost
    optimize    best plan, optionally under a delivery quota
    reconcile   computed figures vs the published reference values
    serve       HTTP service for the browser explorer

Exit codes: 0 success, 1 invalid input (bad flag, bad config, bad plan,
unknown case), 2 infeasible computation (for example a breakeven that does
not exist). Every failure prints a one-line diagnostic to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import replace
from typing import Sequence

from .dataio import (
    ModelConfig,
    ReportFormat,
    default_config,
    load_config,
    plan_from_dict,
    plan_to_dict,
    result_to_dict,
    row_from_result,
    write_reconciliation,
    write_report,
    ReportRow,
)
from .engine import (
    OptimizationConstraint,
    SweepSpec,
    breakeven_price,
    breakeven_unit_cost,
    case_by_id,
    optimize_allocation,
    parse_breakeven_axis,
    reconcile_with_reference,
    run_case,
    run_sweep,
)
from .errors import ConfigError, InfeasibleError, ValidationError, WastedAllocationWarning
from .model import (
    AllocationPlan,
    CostBasis,
    Product,
    evaluate_scenario,
    wasted_allocations,
)

DEFAULT_PORT = 8715
PORT_ENV_VAR = "BEANLEDGER_PORT"

_PLAN_PRESETS = {"all-fc": Product.FC, "all-dc": Product.DC, "all-gcb": Product.GCB}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON config overlaying the built-in dataset")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="report format (default csv)"
    )
    common.add_argument(
        "--basis",
        choices=["all", "bearing"],
        help="charge per-tree costs on all planted trees or bearing trees only",
    )
    common.add_argument(
        "--grid-step", type=float, metavar="F", help="grid step for case/sweep fraction axes"
    )

    plan_help = "zero, all-fc, all-dc, all-gcb (with --market), or inline JSON"

    parser = argparse.ArgumentParser(
        prog="beanledger",
        description="Deterministic profit model and market-choice explorer for a smallholder coffee farm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate one allocation plan")
    p.add_argument("--plan", default="zero", help=plan_help)
    p.add_argument("--market", type=int, help="target market for all-* plan presets")

    p = sub.add_parser("case", parents=[common], help="run one catalog case")
    p.add_argument("--id", type=int, required=True, help="case id, 1..14")

    p = sub.add_parser("sweep", parents=[common], help="sweep one parameter axis")
    p.add_argument(
        "--axis",
        required=True,
        help="beta.N | delta.N | sigma.N | split.<product>.<A>.<B> | price.<product>.<N|all> | cost.<activity>",
    )
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--plan", default="zero", help=plan_help)
    p.add_argument("--market", type=int, help="target market for all-* plan presets")

    p = sub.add_parser("breakeven", parents=[common], help="zero-profit price or activity cost")
    p.add_argument(
        "--axis",
        required=True,
        help="an activity name (cost axis) or price.<product>[.<N|all>] (price axis)",
    )
    p.add_argument("--plan", default="zero", help=plan_help)
    p.add_argument("--market", type=int, help="target market for all-* plan presets")

    p = sub.add_parser("optimize", parents=[common], help="find the best allocation plan")
    p.add_argument(
        "--min-share",
        metavar="PRODUCT:MARKET:FRACTION",
        help="commit FRACTION of PRODUCT's stage to MARKET, e.g. dc:3:0.7",
    )

    sub.add_parser("reconcile", parents=[common], help="compare against the published reference figures")

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument(
        "--port",
        type=int,
        help=f"listen port (default ${PORT_ENV_VAR} or {DEFAULT_PORT})",
    )

    return parser


def _load_config(args: argparse.Namespace) -> ModelConfig:
    config = load_config(args.config) if args.config else default_config()
    engine = config.engine
    if args.basis is not None:
        basis = CostBasis.ALL_TREES if args.basis == "all" else CostBasis.BEARING_TREES
        engine = replace(engine, cost_basis=basis)
    if args.grid_step is not None:
        engine = replace(engine, grid_step=args.grid_step)
    return replace(config, engine=engine)


def _parse_plan(plan_arg: str, market: int | None) -> AllocationPlan:
    text = plan_arg.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--plan is not valid JSON: {exc.msg}") from exc
        return plan_from_dict(data)
    if text == "zero":
        return AllocationPlan.zero()
    if text in _PLAN_PRESETS:
        if market is None:
            raise ValidationError(f"plan preset {text} requires --market")
        return AllocationPlan.single(_PLAN_PRESETS[text], market)
    raise ValidationError(f"unknown plan {plan_arg!r} (expected {', '.join(_PLAN_PRESETS)}, zero, or inline JSON)")


def _parse_min_share(text: str) -> OptimizationConstraint:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"--min-share must look like dc:3:0.7 (got {text!r})")
    try:
        product = Product(parts[0].upper())
    except ValueError:
        raise ValidationError(f"unknown product {parts[0]!r} (expected fc, dc, or gcb)") from None
    try:
        market = int(parts[1])
        fraction = float(parts[2])
    except ValueError:
        raise ValidationError(f"--min-share must look like dc:3:0.7 (got {text!r})") from None
    return OptimizationConstraint.min_share(product, market, fraction)


def _out_stream(args: argparse.Namespace):
    return args.out if args.out else sys.stdout


def _fmt(args: argparse.Namespace) -> ReportFormat:
    return ReportFormat(args.format)


def _quiet_evaluate(config: ModelConfig, plan: AllocationPlan):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WastedAllocationWarning)
        result = evaluate_scenario(
            config.farm, plan, config.markets, config.effective_costs, config.rates
        )
    return result, wasted_allocations(result.sellable, config.markets)


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    plan = _parse_plan(args.plan, args.market)
    result, notes = _quiet_evaluate(config, plan)
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    if _fmt(args) is ReportFormat.JSON:
        payload = json.dumps(result_to_dict(result, notes), indent=2) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    else:
        write_report([row_from_result("evaluate", result)], _out_stream(args))
    return 0


def _cmd_case(args: argparse.Namespace) -> int:
    config = _load_config(args)
    spec = case_by_id(args.id)
    results = run_case(
        args.id,
        config.farm,
        config.markets,
        config.effective_costs,
        config.rates,
        grid_step=config.engine.grid_step,
    )
    rows = [
        row_from_result(variant.label, result, case_id=spec.id, x=variant.x)
        for variant, result in zip(spec.variants(config.engine.grid_step), results)
    ]
    write_report(rows, _out_stream(args), _fmt(args))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    plan = _parse_plan(args.plan, args.market)
    series = run_sweep(
        SweepSpec(args.axis, args.lo, args.hi, args.step),
        config.farm,
        plan,
        config.markets,
        config.effective_costs,
        config.rates,
    )
    rows = [
        ReportRow(
            scenario=series.target,
            case_id=None,
            x=pt.x,
            fc_kg=pt.fc_kg,
            dc_kg=pt.dc_kg,
            gcb_kg=pt.gcb_kg,
            revenue_php=pt.revenue,
            cost_php=pt.cost,
            profit_php=pt.profit,
        )
        for pt in series.points
    ]
    write_report(rows, _out_stream(args), _fmt(args))
    return 0


def _write_breakeven(args: argparse.Namespace, axis: str, value: float) -> None:
    unbounded = math.isinf(value)
    if _fmt(args) is ReportFormat.JSON:
        payload = (
            json.dumps(
                {"axis": axis, "value": None if unbounded else value, "unbounded": unbounded},
                indent=2,
            )
            + "\n"
        )
    else:
        rendered = "unbounded" if unbounded else f"{value:.6f}"
        payload = f"axis,value\n{axis},{rendered}\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _cmd_breakeven(args: argparse.Namespace) -> int:
    config = _load_config(args)
    plan = _parse_plan(args.plan, args.market)
    mode, product, market_ids = parse_breakeven_axis(args.axis)
    common = (config.farm, plan, config.markets, config.effective_costs, config.rates)
    if mode == "cost":
        value = breakeven_unit_cost(args.axis, *common, tol=config.engine.bisection_tol)
        if value is None:
            print("infeasible: profit negative at zero cost", file=sys.stderr)
            return 2
    else:
        assert product is not None
        value = breakeven_price(
            product, *common, market_ids=market_ids, tol=config.engine.bisection_tol
        )
    _write_breakeven(args, args.axis, value)
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    config = _load_config(args)
    constraint = (
        _parse_min_share(args.min_share) if args.min_share else OptimizationConstraint.unconstrained()
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WastedAllocationWarning)
        plan, result = optimize_allocation(
            constraint, config.farm, config.markets, config.effective_costs, config.rates
        )
    notes = wasted_allocations(result.sellable, config.markets)
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    if _fmt(args) is ReportFormat.JSON:
        payload = (
            json.dumps(
                {"plan": plan_to_dict(plan), "result": result_to_dict(result, notes)}, indent=2
            )
            + "\n"
        )
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    else:
        write_report([row_from_result("optimal", result)], _out_stream(args))
    return 0


def _cmd_reconcile(args: argparse.Namespace) -> int:
    config = _load_config(args)
    report = reconcile_with_reference(
        config.farm,
        config.markets,
        config.effective_costs,
        config.rates,
        grid_step=config.engine.grid_step,
    )
    write_reconciliation(report, _out_stream(args), _fmt(args))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args)
    if args.port is not None:
        port = args.port
    else:
        env = os.environ.get(PORT_ENV_VAR)
        try:
            port = int(env) if env else DEFAULT_PORT
        except ValueError:
            raise ValidationError(f"{PORT_ENV_VAR} must be an integer (got {env!r})") from None
    uvicorn.run(create_app(config), host="127.0.0.1", port=port)
    return 0


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "case": _cmd_case,
    "sweep": _cmd_sweep,
    "breakeven": _cmd_breakeven,
    "optimize": _cmd_optimize,
    "reconcile": _cmd_reconcile,
    "serve": _cmd_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage/help; fold its exit code into ours
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
