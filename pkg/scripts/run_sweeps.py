"""Run the standard sensitivity panel: the FC split curve, uniform GCB price,
the dehulling cost axis, and the association DC price.

    python3 scripts/run_sweeps.py --outdir out/sweeps
    python3 scripts/run_sweeps.py --axis price.gcb.all --lo 60 --hi 100 --step 1 --plan gcb:1
"""

import argparse
import sys
from pathlib import Path

from beanledger import (
    AllocationPlan,
    Product,
    ReportRow,
    SweepSpec,
    default_config,
    load_config,
    run_sweep,
    write_report,
)

# (spec, plan) pairs; the split axis drives the plan itself, so zero there
PANEL = [
    (SweepSpec("split.fc.2.5", 0.0, 1.0, 0.05), AllocationPlan.zero()),
    (SweepSpec("price.gcb.all", 60.0, 100.0, 1.0), AllocationPlan.single(Product.GCB, 1)),
    (SweepSpec("cost.dehulling", 0.0, 10.0, 0.25), AllocationPlan.single(Product.GCB, 1)),
    (SweepSpec("price.dc.3", 60.0, 90.0, 1.0), AllocationPlan.single(Product.DC, 3)),
]


def parse_plan(text):
    if text == "zero":
        return AllocationPlan.zero()
    product, _, market = text.partition(":")
    return AllocationPlan.single(Product(product.upper()), int(market))


def sweep_to_rows(series):
    return [
        ReportRow(
            scenario=series.target,
            case_id=None,
            x=p.x,
            fc_kg=p.fc_kg,
            dc_kg=p.dc_kg,
            gcb_kg=p.gcb_kg,
            revenue_php=p.revenue,
            cost_php=p.cost,
            profit_php=p.profit,
        )
        for p in series.points
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description="profit curves along parameter axes")
    parser.add_argument("--config", metavar="PATH")
    parser.add_argument("--outdir", default="out/sweeps")
    parser.add_argument("--axis", help="run a single custom axis instead of the panel")
    parser.add_argument("--lo", type=float)
    parser.add_argument("--hi", type=float)
    parser.add_argument("--step", type=float)
    parser.add_argument("--plan", default="zero", help="zero or <product>:<market>, e.g. gcb:1")
    args = parser.parse_args(argv)

    config = load_config(args.config) if args.config else default_config()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    if args.axis:
        if None in (args.lo, args.hi, args.step):
            parser.error("--axis needs --lo, --hi, and --step")
        jobs = [(SweepSpec(args.axis, args.lo, args.hi, args.step), parse_plan(args.plan))]
    else:
        jobs = PANEL

    for spec, plan in jobs:
        series = run_sweep(
            spec, config.farm, plan, config.markets, config.effective_costs, config.rates
        )
        name = spec.target.replace(".", "_")
        write_report(sweep_to_rows(series), outdir / f"sweep_{name}.csv")
        profits = [p.profit for p in series.points]
        crossings = sum(1 for a, b in zip(profits, profits[1:]) if (a < 0) != (b < 0))
        print(
            f"{spec.target}: {len(series.points)} points, "
            f"profit {min(profits):,.2f} .. {max(profits):,.2f}, "
            f"{crossings} sign change(s)"
        )

    print(f"wrote {len(jobs)} sweep reports to {outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
