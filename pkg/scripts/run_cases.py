"""Run the built-in marketing cases and write one report per case.

Produces ``case_<id>.csv`` (or .json) per case plus a combined
``all_cases.csv`` in the output directory, and prints a one-line summary
per case with the best variant. Typical use:

    python3 scripts/run_cases.py --outdir out/cases
    python3 scripts/run_cases.py --ids 12 13 14 --basis bearing
"""

import argparse
import sys
from pathlib import Path

from beanledger import (
    ReportFormat,
    builtin_cases,
    default_config,
    load_config,
    row_from_result,
    run_case,
    write_report,
)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="PATH", help="JSON overlay for the built-in dataset")
    parser.add_argument("--ids", type=int, nargs="*", help="case ids to run (default: all 14)")
    parser.add_argument("--outdir", default="out/cases", help="where reports land")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument(
        "--basis", choices=["all", "bearing"], help="override the cost-charging basis"
    )
    args = parser.parse_args(argv)

    config = load_config(args.config) if args.config else default_config()
    if args.basis:
        from dataclasses import replace

        from beanledger import CostBasis

        basis = CostBasis.ALL_TREES if args.basis == "all" else CostBasis.BEARING_TREES
        config = replace(config, engine=replace(config.engine, cost_basis=basis))

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fmt = ReportFormat(args.format)
    suffix = ".csv" if fmt is ReportFormat.CSV else ".json"

    wanted = args.ids if args.ids else [spec.id for spec in builtin_cases()]
    specs = {spec.id: spec for spec in builtin_cases()}
    combined = []

    for case_id in wanted:
        spec = specs[case_id]
        results = run_case(
            case_id,
            config.farm,
            config.markets,
            config.effective_costs,
            config.rates,
            grid_step=config.engine.grid_step,
        )
        rows = [
            row_from_result(variant.label, result, case_id=case_id, x=variant.x)
            for variant, result in zip(spec.variants(config.engine.grid_step), results)
        ]
        combined.extend(rows)
        write_report(rows, outdir / f"case_{case_id}{suffix}", fmt)

        best = max(rows, key=lambda r: r.profit_php)
        print(
            f"case {case_id:>2} ({spec.description}): "
            f"best {best.scenario} profit {best.profit_php:,.2f} Php"
        )

    write_report(combined, outdir / f"all_cases{suffix}", fmt)
    print(f"wrote {len(wanted)} case reports + all_cases{suffix} to {outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
