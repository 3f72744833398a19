import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { Api, ServiceError } from "../src/api.js";
import { caseChartModel, sweepChartModel, NO_BREAKEVEN_BADGE } from "../src/charts.js";
import { resultView } from "../src/format.js";
import {
  ASSOCIATION_INDEX,
  CONSTRAINT_FLOOR,
  ExplorerStore,
  planFromShares,
  zeroPlan,
  type Scheduler,
} from "../src/state.js";
import type {
  CaseEntry,
  CostBasis,
  EvaluateResponse,
  MarketEntry,
  PlanBody,
  ProductName,
} from "../src/types.js";

// Everything here runs against a real service process: the point is that the
// page shows exactly what the HTTP interface says, nothing computed locally.

const PORT = 8741;
const BASE = `http://127.0.0.1:${PORT}`;

let proc: ChildProcess;
let api: Api;
let markets: MarketEntry[] = [];
let cases: CaseEntry[] = [];

// independent renderer: same contract, separate code path from src/format.ts
const ref = new Intl.NumberFormat("en-US", {
  minimumFractionDigits: 2,
  maximumFractionDigits: 2,
});
const fmt2 = (v: number) => {
  const s = ref.format(v);
  return s === "-0.00" ? "0.00" : s;
};

async function directEvaluate(
  plan: PlanBody,
  config?: Record<string, unknown>,
): Promise<EvaluateResponse> {
  const res = await fetch(`${BASE}/evaluate`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(config ? { plan, config } : { plan }),
  });
  expect(res.ok).toBe(true);
  return (await res.json()) as EvaluateResponse;
}

beforeAll(async () => {
  proc = spawn("beanledger", ["serve", "--port", String(PORT)], { stdio: "ignore" });
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const res = await fetch(`${BASE}/health`);
      if (res.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service did not come up on " + BASE);
    await new Promise((r) => setTimeout(r, 250));
  }
  api = new Api(BASE);
  markets = (await api.config()).markets;
  cases = await api.cases();
}, 30_000);

afterAll(async () => {
  proc.kill("SIGTERM");
  await new Promise<void>((resolve) => {
    const t = setTimeout(() => {
      proc.kill("SIGKILL");
      resolve();
    }, 3_000);
    proc.once("exit", () => {
      clearTimeout(t);
      resolve();
    });
  });
});

class ImmediateScheduler implements Scheduler {
  set(fn: () => void): () => void {
    fn();
    return () => {};
  }
}

interface ScriptedState {
  label: string;
  drive: (store: ExplorerStore) => void;
  basis?: CostBasis;
}

function scriptedStates(): ScriptedState[] {
  const states: ScriptedState[] = [];
  // the eleven fixed single-channel cases, exactly as the catalog encodes them
  for (const c of cases.filter((c) => c.id <= 11)) {
    states.push({
      label: `case ${c.id}`,
      drive: (s) => s.setPlan(planFromShares(c.product, c.fixed_shares)),
    });
  }
  states.push({ label: "do nothing", drive: (s) => s.setPlan(zeroPlan()) });
  states.push({
    label: "association lock from zero",
    drive: (s) => s.setConstraint(true, "DC"),
  });
  states.push({
    label: "best single channel under the bearing-trees basis",
    basis: "BEARING_TREES",
    drive: (s) => {
      s.setBasis("BEARING_TREES");
      s.setPlan(planFromShares("DC", { "3": 1.0 }));
    },
  });
  states.push({
    label: "fresh cherries spread evenly",
    drive: (s) => {
      for (let i = 0; i < 5; i++) s.setSlider("beta", i, 0.2);
    },
  });
  states.push({
    label: "mixed pipeline A",
    drive: (s) => {
      s.setSlider("beta", 0, 0.1);
      s.setSlider("beta", 1, 0.1);
      s.setSlider("delta", 2, 0.5);
      s.setSlider("sigma", 3, 0.2);
      s.setSlider("sigma", 4, 0.1);
    },
  });
  states.push({
    label: "mixed pipeline B",
    drive: (s) => {
      s.setSlider("beta", 0, 0.2);
      s.setSlider("beta", 2, 0.1);
      s.setSlider("delta", 1, 0.3);
      s.setSlider("delta", 3, 0.2);
      s.setSlider("sigma", 0, 0.1);
      s.setSlider("sigma", 4, 0.2);
    },
  });
  states.push({
    label: "green beans to the top payer",
    drive: (s) => s.setPlan(planFromShares("GCB", { "1": 1.0 })),
  });
  states.push({
    label: "dried cherries split with the association",
    drive: (s) => s.setPlan(planFromShares("DC", { "3": 0.7, "2": 0.3 })),
  });
  states.push({
    label: "drag below the lock while constrained",
    drive: (s) => {
      s.setConstraint(true, "GCB");
      s.setSlider("sigma", ASSOCIATION_INDEX, 0.4); // must clamp back to 0.7
      s.setSlider("sigma", 0, 0.2);
    },
  });
  return states;
}

describe("live display parity", () => {
  it("covers twenty scripted states including all eleven cases", () => {
    expect(scriptedStates()).toHaveLength(20);
  });

  it(
    "renders exactly what POST /evaluate returns, state by state",
    async () => {
      for (const state of scriptedStates()) {
        const store = new ExplorerStore(api, new ImmediateScheduler());
        state.drive(store);
        await store.whenSettled();
        const view = store.view();
        expect(view.error, state.label).toBeNull();
        expect(view.result, state.label).not.toBeNull();

        // ask the service again, straight over HTTP, for the same inputs
        const overlay = state.basis ? { engine: { cost_basis: state.basis } } : undefined;
        const direct = await directEvaluate(view.plan, overlay);

        const shown = resultView(view.result!, markets);
        expect(shown.profitText, state.label).toBe(fmt2(direct.profit));
        expect(shown.revenueText, state.label).toBe(fmt2(direct.revenue_total));
        expect(shown.costText, state.label).toBe(fmt2(direct.cost_total));
        expect(shown.harvestText, state.label).toBe(fmt2(direct.harvest_kg));
        expect(shown.unsoldText, state.label).toBe(fmt2(direct.flows.unsold_kg));
        expect(shown.basis, state.label).toBe(direct.cost_basis);
        for (const product of ["fc", "dc", "gcb"] as const) {
          direct.sellable[product].forEach((mass, i) => {
            const bar = shown.massBars.find((b) => b.product === product && b.marketId === i + 1);
            expect(bar?.kgText, `${state.label} ${product}@${i + 1}`).toBe(fmt2(mass));
          });
        }
      }
    },
    120_000,
  );

  it("shows the full loss of doing nothing", async () => {
    const store = new ExplorerStore(api, new ImmediateScheduler());
    store.setPlan(zeroPlan());
    await store.whenSettled();
    const shown = resultView(store.view().result!, markets);
    expect(shown.profitText).toBe("-32,133.75");
    expect(shown.profitClass).toBe("negative");
  });

  it("clamps the association slider at 0.70 when the lock is on", async () => {
    const store = new ExplorerStore(api, new ImmediateScheduler());
    store.setConstraint(true, "DC");
    store.setSlider("delta", ASSOCIATION_INDEX, 0.1);
    await store.whenSettled();
    const view = store.view();
    expect(view.plan.delta[ASSOCIATION_INDEX]).toBe(CONSTRAINT_FLOOR);
    expect(view.result!.plan.delta[ASSOCIATION_INDEX]).toBeCloseTo(CONSTRAINT_FLOOR, 12);
  });

  it("applies the bearing-trees overlay through to the response", async () => {
    const store = new ExplorerStore(api, new ImmediateScheduler());
    store.setBasis("BEARING_TREES");
    store.setPlan(planFromShares("DC", { "3": 1.0 }));
    await store.whenSettled();
    expect(store.view().result!.cost_basis).toBe("BEARING_TREES");
  });
});

describe("live case comparison chart", () => {
  it(
    "shows five profitable and six losing cases, values straight from the service",
    async () => {
      const singles = cases.filter((c) => c.id <= 11);
      expect(singles).toHaveLength(11);
      const results = await Promise.all(
        singles.map((c) => api.evaluate(planFromShares(c.product, c.fixed_shares))),
      );
      const model = caseChartModel(
        singles.map((c, i) => ({ id: c.id, label: String(c.id), profit: results[i].profit })),
      );
      const byId = new Map(model.bars.map((b) => [b.id, b]));
      for (const id of [1, 3, 4, 5, 6]) expect(byId.get(id)?.cls, `case ${id}`).toBe("positive");
      for (const id of [2, 7, 8, 9, 10, 11]) {
        expect(byId.get(id)?.cls, `case ${id}`).toBe("negative");
      }
      model.bars.forEach((bar, i) => {
        expect(bar.valueText).toBe(fmt2(results[i].profit));
      });
    },
    60_000,
  );
});

describe("live sweep views", () => {
  const gcbPlan = (): PlanBody => planFromShares("GCB" as ProductName, { "1": 1.0 });

  it("annotates the green-bean price sweep at the service breakeven", async () => {
    const series = await api.sweep("price.gcb.all", 60, 100, 1, gcbPlan());
    const be = await api.breakeven("price.gcb.all", gcbPlan());
    expect(be.unbounded).toBe(false);
    expect(be.value).not.toBeNull();
    const model = sweepChartModel(series.points, { kind: "value", value: be.value! });
    expect(model.crossing?.label).toBe("81.68");
    expect(model.badge).toBeNull();
  });

  it("shows the no-breakeven badge for dehulling cost under the default basis", async () => {
    const series = await api.sweep("cost.dehulling", 0, 10, 0.25, gcbPlan());
    expect(series.points.every((p) => p.profit < 0)).toBe(true);
    const err = await api.breakeven("dehulling", gcbPlan()).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).infeasible).toBe(true);
    const model = sweepChartModel(series.points, { kind: "infeasible" });
    expect(model.crossing).toBeNull();
    expect(model.badge).toBe(NO_BREAKEVEN_BADGE);
  });

  it("finds the fresh-cherry split crossing between 0.10 and 0.15", async () => {
    const series = await api.sweep("split.fc.2.5", 0, 1, 0.05, zeroPlan());
    const pts = series.points;
    const flip = pts.findIndex((p, i) => i > 0 && (pts[i - 1].profit < 0) !== (p.profit < 0));
    expect(flip).toBeGreaterThan(0);
    expect(pts[flip - 1].x).toBeCloseTo(0.1, 9);
    expect(pts[flip].x).toBeCloseTo(0.15, 9);
    const model = sweepChartModel(pts, { kind: "value", value: pts[flip].x });
    expect(model.crossing?.label).toBe("0.15");
  });
});
