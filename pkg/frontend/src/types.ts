// Shapes mirror the service JSON exactly; the client never reshapes numbers.

export type ProductName = "FC" | "DC" | "GCB";
export type StageName = "beta" | "delta" | "sigma";
export type CostBasis = "ALL_TREES" | "BEARING_TREES";

/** Five fractions per stage, one slot per market (ids 1..5 -> indexes 0..4). */
export interface PlanBody {
  beta: number[];
  delta: number[];
  sigma: number[];
}

export interface MarketEntry {
  id: number;
  name: string;
  price_fc: number;
  price_dc: number;
  price_gcb: number;
  sd_fc: number;
  sd_dc: number;
  sd_gcb: number;
}

export interface ServiceConfig {
  farm: {
    yield_per_tree: number;
    trees_per_ha: number;
    bearing_fraction: number;
    damage_rate: number;
    land_area: number;
  };
  rates: { fc_to_dc: number; fc_to_gcb: number };
  costs: Record<string, unknown> & { cost_basis: CostBasis };
  markets: MarketEntry[];
  engine?: Record<string, unknown>;
}

/** Request-scoped overlay; passed through verbatim as the `config` field. */
export type ConfigOverlay = Record<string, unknown>;

export interface CaseEntry {
  id: number;
  product: ProductName;
  description: string;
  fixed_shares: Record<string, number>;
  residual_markets: number[];
  residual_fraction: number;
  split_markets: number[] | null;
}

export interface EvaluateResponse {
  harvest_kg: number;
  flows: {
    fc_to_market: number[];
    remaining_after_fc: number;
    dc_raw_to_market: number[];
    remaining_after_dc: number;
    gcb_raw_to_market: number[];
    unsold_kg: number;
  };
  sellable: { fc: number[]; dc: number[]; gcb: number[] };
  revenue_by_market: number[];
  revenue_total: number;
  cost_breakdown: Record<string, number>;
  cost_total: number;
  profit: number;
  plan: PlanBody;
  cost_basis: CostBasis;
  warnings: string[];
}

export interface SweepPointBody {
  x: number;
  profit: number;
  revenue: number;
  cost: number;
  fc_kg: number;
  dc_kg: number;
  gcb_kg: number;
}

export interface SweepResponse {
  target: string;
  points: SweepPointBody[];
}

export interface BreakevenResponse {
  axis: string;
  value: number | null;
  unbounded: boolean;
}

export interface OptimizeResponse {
  plan: PlanBody;
  result: EvaluateResponse;
}

/** 400 bodies carry `detail`, 422 bodies carry `reason`. */
export interface ErrorBody {
  error: string;
  detail?: string;
  reason?: string;
}
