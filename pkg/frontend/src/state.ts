import type { Api } from "./api.js";
import type {
  ConfigOverlay,
  CostBasis,
  EvaluateResponse,
  PlanBody,
  ProductName,
  StageName,
} from "./types.js";

export const N_MARKETS = 5;
/** The grower association is market 3, slot 2 in every stage array. */
export const ASSOCIATION_INDEX = 2;
export const CONSTRAINT_FLOOR = 0.7;
export const DEFAULT_DEBOUNCE_MS = 150;

const STAGE_OF_PRODUCT: Record<ProductName, StageName> = {
  FC: "beta",
  DC: "delta",
  GCB: "sigma",
};

export function stageForProduct(product: ProductName): StageName {
  return STAGE_OF_PRODUCT[product];
}

function sumExcept(values: number[], skip: number): number {
  let total = 0;
  for (let i = 0; i < values.length; i++) {
    if (i !== skip) total += values[i];
  }
  return total;
}

const clip01 = (v: number) => Math.min(1, Math.max(0, v));

/**
 * Move one slider inside a stage group, keeping the group sum at or below 1.
 * The moved slider gives way to the others: it is capped at the headroom the
 * rest of the group leaves. A floor (the 70% association lock) beats the cap;
 * when both apply the other sliders are scaled down to make room.
 */
export function moveSlider(
  group: number[],
  index: number,
  proposed: number,
  floor: number | null = null,
): number[] {
  const next = group.slice();
  let v = clip01(proposed);
  if (floor !== null) v = Math.max(v, floor);
  const headroom = 1 - sumExcept(next, index);
  if (v > headroom) {
    if (floor !== null && v <= floor + 1e-12) {
      // locked value does not fit; shrink everyone else proportionally
      const others = sumExcept(next, index);
      const scale = others > 0 ? Math.max(0, (1 - v) / others) : 0;
      for (let i = 0; i < next.length; i++) {
        if (i !== index) next[i] *= scale;
      }
    } else {
      v = Math.max(floor ?? 0, headroom);
    }
  }
  next[index] = v;
  return next;
}

/** Apply the association lock to a stage: raise slot 2, shrink others to fit. */
export function applyFloor(group: number[], floor: number): number[] {
  return moveSlider(group, ASSOCIATION_INDEX, Math.max(group[ASSOCIATION_INDEX], floor), floor);
}

export interface ConstraintState {
  on: boolean;
  product: ProductName;
}

export interface UIState {
  plan: PlanBody;
  constraint: ConstraintState;
  basis: CostBasis | null;
  pending: boolean;
  /** true while showing a result that predates the latest input or failure */
  stale: boolean;
  error: string | null;
  result: EvaluateResponse | null;
}

export function zeroPlan(): PlanBody {
  return {
    beta: new Array(N_MARKETS).fill(0),
    delta: new Array(N_MARKETS).fill(0),
    sigma: new Array(N_MARKETS).fill(0),
  };
}

const padStage = (xs: number[]) => Array.from({ length: N_MARKETS }, (_, i) => xs[i] ?? 0);

/** Plan sending the given per-market shares of one product, as the catalog encodes cases. */
export function planFromShares(product: ProductName, shares: Record<string, number>): PlanBody {
  const plan = zeroPlan();
  const stage = plan[stageForProduct(product)];
  for (const [marketId, share] of Object.entries(shares)) {
    stage[Number(marketId) - 1] = share;
  }
  return plan;
}

export interface Scheduler {
  /** schedule fn after ms; returns a cancel handle */
  set(fn: () => void, ms: number): () => void;
}

export const realScheduler: Scheduler = {
  set(fn, ms) {
    const handle = setTimeout(fn, ms);
    return () => clearTimeout(handle);
  },
};

type Listener = (state: UIState) => void;

/**
 * Holds the whole explorer state and talks to the service. Slider input is
 * debounced; every input bumps a generation counter and a response is applied
 * only if no newer input exists by the time it lands, so the displayed result
 * always matches the latest state.
 */
export class ExplorerStore {
  private plan = zeroPlan();
  private constraint: ConstraintState = { on: false, product: "DC" };
  private basis: CostBasis | null = null;
  private result: EvaluateResponse | null = null;
  private pending = false;
  private stale = false;
  private error: string | null = null;

  private generation = 0;
  private cancelTimer: (() => void) | null = null;
  private listeners = new Set<Listener>();
  private settled: Promise<void> = Promise.resolve();

  constructor(
    private readonly api: Pick<Api, "evaluate">,
    private readonly scheduler: Scheduler = realScheduler,
    private readonly debounceMs: number = DEFAULT_DEBOUNCE_MS,
  ) {}

  view(): UIState {
    return {
      plan: { beta: [...this.plan.beta], delta: [...this.plan.delta], sigma: [...this.plan.sigma] },
      constraint: { ...this.constraint },
      basis: this.basis,
      pending: this.pending,
      stale: this.stale,
      error: this.error,
      result: this.result,
    };
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  /** resolves once every response for inputs made so far has landed */
  whenSettled(): Promise<void> {
    return this.settled;
  }

  setSlider(stage: StageName, index: number, value: number): void {
    const floor =
      this.constraint.on &&
      stage === stageForProduct(this.constraint.product) &&
      index === ASSOCIATION_INDEX
        ? CONSTRAINT_FLOOR
        : null;
    this.plan = { ...this.plan, [stage]: moveSlider(this.plan[stage], index, value, floor) };
    this.inputChanged();
  }

  setConstraint(on: boolean, product?: ProductName): void {
    this.constraint = { on, product: product ?? this.constraint.product };
    if (on) {
      const stage = stageForProduct(this.constraint.product);
      this.plan = { ...this.plan, [stage]: applyFloor(this.plan[stage], CONSTRAINT_FLOOR) };
    }
    this.inputChanged();
  }

  setBasis(basis: CostBasis | null): void {
    this.basis = basis;
    this.inputChanged();
  }

  setPlan(plan: PlanBody): void {
    this.plan = {
      beta: padStage(plan.beta),
      delta: padStage(plan.delta),
      sigma: padStage(plan.sigma),
    };
    if (this.constraint.on) {
      const stage = stageForProduct(this.constraint.product);
      this.plan = { ...this.plan, [stage]: applyFloor(this.plan[stage], CONSTRAINT_FLOOR) };
    }
    this.inputChanged();
  }

  /** evaluate the current state immediately, skipping the debounce */
  refresh(): Promise<void> {
    this.generation += 1;
    this.cancelTimer?.();
    this.cancelTimer = null;
    this.pending = true;
    this.notify();
    return this.fire(this.generation);
  }

  overlay(): ConfigOverlay | undefined {
    return this.basis ? { engine: { cost_basis: this.basis } } : undefined;
  }

  private inputChanged(): void {
    this.generation += 1;
    this.stale = this.result !== null;
    this.pending = true;
    this.cancelTimer?.();
    const gen = this.generation;
    this.cancelTimer = this.scheduler.set(() => {
      this.cancelTimer = null;
      void this.fire(gen);
    }, this.debounceMs);
    this.notify();
  }

  private fire(gen: number): Promise<void> {
    const run = async () => {
      try {
        const res = await this.api.evaluate(this.plan, this.overlay());
        if (gen !== this.generation) return; // superseded while in flight
        this.result = res;
        this.stale = false;
        this.error = null;
      } catch (err) {
        if (gen !== this.generation) return;
        this.error = err instanceof Error ? err.message : String(err);
        this.stale = this.result !== null; // keep the last good numbers, marked
      } finally {
        if (gen === this.generation) {
          this.pending = false;
          this.notify();
        }
      }
    };
    const done = run();
    this.settled = this.settled.then(() => done);
    return done;
  }

  private notify(): void {
    const snapshot = this.view();
    for (const listener of this.listeners) listener(snapshot);
  }
}
