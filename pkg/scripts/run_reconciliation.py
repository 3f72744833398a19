"""Print and save the reconciliation against the published reference figures.

Each tracked figure is recomputed under both cost-charging bases so the gap
between them (and the published number) is visible side by side.

    python3 scripts/run_reconciliation.py --out out/reconciliation.csv
"""

import argparse
import sys
from pathlib import Path

from beanledger import (
    ReportFormat,
    default_config,
    load_config,
    reconcile_with_reference,
    write_reconciliation,
)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="PATH")
    parser.add_argument("--out", default="out/reconciliation.csv")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    args = parser.parse_args(argv)

    config = load_config(args.config) if args.config else default_config()
    report = reconcile_with_reference(
        config.farm,
        config.markets,
        config.effective_costs,
        config.rates,
        grid_step=config.engine.grid_step,
    )

    width = max(len(r.label) for r in report.rows)
    print(f"{'figure':<{width}}  {'published':>12}  {'all trees':>12}  {'bearing':>12}")
    for r in report.rows:
        print(
            f"{r.label:<{width}}  {r.published_php:>12,.2f}  "
            f"{r.all_trees_php:>12,.2f}  {r.bearing_trees_php:>12,.2f}"
        )

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_reconciliation(report, out, ReportFormat(args.format))
    print(f"\nwrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
