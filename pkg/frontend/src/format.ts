import type { EvaluateResponse, MarketEntry } from "./types.js";

// report style: thousands separators, always two decimals
const twoDecimals = new Intl.NumberFormat("en-US", {
  minimumFractionDigits: 2,
  maximumFractionDigits: 2,
});

export function money(value: number): string {
  // avoid "-0.00" when a tiny negative rounds away
  const rendered = twoDecimals.format(value);
  return rendered === "-0.00" ? "0.00" : rendered;
}

export function kg(value: number): string {
  return money(value);
}

export type SignClass = "positive" | "negative";

export function signClass(value: number): SignClass {
  return value < 0 ? "negative" : "positive";
}

export interface MassBar {
  product: "fc" | "dc" | "gcb";
  marketId: number;
  marketName: string;
  kgText: string;
  /** share of the largest bar, for widths; display text never derives from it */
  fraction: number;
}

export interface ResultView {
  profitText: string;
  profitClass: SignClass;
  revenueText: string;
  costText: string;
  harvestText: string;
  unsoldText: string;
  basis: string;
  massBars: MassBar[];
  warnings: string[];
}

/**
 * Project an evaluate response onto display strings. Every number shown in
 * the page comes through here, straight off the response body.
 */
export function resultView(res: EvaluateResponse, markets: MarketEntry[]): ResultView {
  const bars: MassBar[] = [];
  const products = [
    ["fc", res.sellable.fc],
    ["dc", res.sellable.dc],
    ["gcb", res.sellable.gcb],
  ] as const;
  const peak = Math.max(1e-9, ...products.flatMap(([, masses]) => masses));
  for (const [product, masses] of products) {
    masses.forEach((mass, i) => {
      bars.push({
        product,
        marketId: i + 1,
        marketName: markets[i]?.name ?? `Market ${i + 1}`,
        kgText: kg(mass),
        fraction: mass / peak,
      });
    });
  }
  return {
    profitText: money(res.profit),
    profitClass: signClass(res.profit),
    revenueText: money(res.revenue_total),
    costText: money(res.cost_total),
    harvestText: kg(res.harvest_kg),
    unsoldText: kg(res.flows.unsold_kg),
    basis: res.cost_basis,
    massBars: bars,
    warnings: [...res.warnings],
  };
}
