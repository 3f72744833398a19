import { Api, resolveBaseUrl, ServiceError } from "./api.js";
import {
  caseChartModel,
  renderCaseChart,
  renderSweepChart,
  sweepChartModel,
  type BreakevenInfo,
  type CaseBarDatum,
} from "./charts.js";
import { money, resultView } from "./format.js";
import {
  ExplorerStore,
  planFromShares,
  zeroPlan,
  N_MARKETS,
} from "./state.js";
import type { CaseEntry, CostBasis, MarketEntry, ProductName, StageName } from "./types.js";

interface SweepPreset {
  label: string;
  target: string;
  lo: number;
  hi: number;
  step: number;
  plan: ReturnType<typeof zeroPlan>;
}

const SWEEP_PRESETS: SweepPreset[] = [
  {
    label: "fresh share to Local Traders vs Other Markets",
    target: "split.fc.2.5",
    lo: 0,
    hi: 1,
    step: 0.05,
    plan: zeroPlan(),
  },
  {
    label: "green bean price, all buying outlets",
    target: "price.gcb.all",
    lo: 60,
    hi: 100,
    step: 1,
    plan: planFromShares("GCB", { "1": 1.0 }),
  },
  {
    label: "dehulling cost per tree",
    target: "cost.dehulling",
    lo: 0,
    hi: 10,
    step: 0.25,
    plan: planFromShares("GCB", { "1": 1.0 }),
  },
  {
    label: "dry cherry price at the Grower Association",
    target: "price.dc.3",
    lo: 60,
    hi: 90,
    step: 1,
    plan: planFromShares("DC", { "3": 1.0 }),
  },
];

const STAGE_TITLES: Record<StageName, string> = {
  beta: "Fresh cherries (share of harvest)",
  delta: "Dried cherries (share of what remains)",
  sigma: "Green beans (share of what remains)",
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export async function mount(root: HTMLElement, api: Api): Promise<void> {
  root.innerHTML = PAGE;
  const store = new ExplorerStore(api);

  let markets: MarketEntry[] = [];
  let cases: CaseEntry[] = [];
  try {
    const config = await api.config();
    markets = config.markets;
    cases = await api.cases();
    el("banner").hidden = true;
  } catch (err) {
    showBanner(err);
    return;
  }

  buildSliders(store, markets);
  bindPresets(store, cases);
  bindConstraint(store);
  bindBasis(store);

  store.subscribe((state) => {
    // slider positions can move on clamp; keep the controls honest
    for (const stage of ["beta", "delta", "sigma"] as StageName[]) {
      state.plan[stage].forEach((v, i) => {
        const slider = el<HTMLInputElement>(`sl-${stage}-${i}`);
        if (slider.valueAsNumber !== v) slider.value = String(v);
        el(`sl-${stage}-${i}-val`).textContent = v.toFixed(2);
      });
    }
    el("pending").hidden = !state.pending;
    el("stale").hidden = !state.stale;
    if (state.error) {
      el("banner").textContent = `service error: ${state.error}`;
      el("banner").hidden = false;
    } else {
      el("banner").hidden = true;
    }
    if (!state.result) return;
    const view = resultView(state.result, markets);
    const profitEl = el("kpi-profit");
    profitEl.textContent = view.profitText;
    profitEl.className = `kpi-value ${view.profitClass}`;
    el("kpi-revenue").textContent = view.revenueText;
    el("kpi-cost").textContent = view.costText;
    el("kpi-harvest").textContent = view.harvestText;
    el("kpi-unsold").textContent = view.unsoldText;
    el("kpi-basis").textContent = view.basis;
    el("warnings").innerHTML = view.warnings
      .map((w) => `<li>${w.replace(/&/g, "&amp;").replace(/</g, "&lt;")}</li>`)
      .join("");
    const bars = el("mass-bars");
    bars.innerHTML = view.massBars
      .filter((b) => b.fraction > 0)
      .map(
        (b) =>
          `<div class="mass-row"><span class="mass-label">${b.product.toUpperCase()} @ ${b.marketName}</span>` +
          `<div class="mass-track"><div class="mass-fill" style="width:${(b.fraction * 100).toFixed(1)}%"></div></div>` +
          `<span class="mass-kg">${b.kgText} kg</span></div>`,
      )
      .join("");
  });

  void store.refresh();
  void renderCases(api, store, cases);
  void runSweep(api, store, SWEEP_PRESETS[0]);

  el<HTMLSelectElement>("sweep-axis").addEventListener("change", (ev) => {
    const preset = SWEEP_PRESETS[Number((ev.target as HTMLSelectElement).value)];
    void runSweep(api, store, preset);
  });
  el("basis-select").addEventListener("change", () => {
    void renderCases(api, store, cases);
    const preset = SWEEP_PRESETS[Number(el<HTMLSelectElement>("sweep-axis").value)];
    void runSweep(api, store, preset);
  });

  function showBanner(err: unknown): void {
    const banner = el("banner");
    banner.textContent =
      err instanceof ServiceError
        ? `service error: ${err.message}`
        : `service unreachable at ${api.baseUrl}; is "beanledger serve" running?`;
    banner.hidden = false;
  }
}

function buildSliders(store: ExplorerStore, markets: MarketEntry[]): void {
  const host = el("sliders");
  const chunks: string[] = [];
  for (const stage of ["beta", "delta", "sigma"] as StageName[]) {
    const rows = Array.from({ length: N_MARKETS }, (_, i) => {
      const name = markets[i]?.name ?? `Market ${i + 1}`;
      return (
        `<div class="slider-row"><label for="sl-${stage}-${i}">${name}</label>` +
        `<input type="range" id="sl-${stage}-${i}" min="0" max="1" step="0.01" value="0">` +
        `<span class="slider-val" id="sl-${stage}-${i}-val">0.00</span></div>`
      );
    }).join("");
    chunks.push(`<fieldset><legend>${STAGE_TITLES[stage]}</legend>${rows}</fieldset>`);
  }
  host.innerHTML = chunks.join("");
  for (const stage of ["beta", "delta", "sigma"] as StageName[]) {
    for (let i = 0; i < N_MARKETS; i++) {
      el<HTMLInputElement>(`sl-${stage}-${i}`).addEventListener("input", (ev) => {
        store.setSlider(stage, i, (ev.target as HTMLInputElement).valueAsNumber);
      });
    }
  }
}

function bindPresets(store: ExplorerStore, cases: CaseEntry[]): void {
  const select = el<HTMLSelectElement>("case-select");
  select.innerHTML =
    `<option value="">pick a case plan</option>` +
    cases
      .filter((c) => c.id <= 11)
      .map((c) => `<option value="${c.id}">case ${c.id}: ${c.description}</option>`)
      .join("");
  select.addEventListener("change", () => {
    const entry = cases.find((c) => c.id === Number(select.value));
    if (entry) store.setPlan(planFromShares(entry.product, entry.fixed_shares));
  });
  el("reset").addEventListener("click", () => store.setPlan(zeroPlan()));
}

function bindConstraint(store: ExplorerStore): void {
  const toggle = el<HTMLInputElement>("constraint-toggle");
  const product = el<HTMLSelectElement>("constraint-product");
  const apply = () =>
    store.setConstraint(toggle.checked, product.value as ProductName);
  toggle.addEventListener("change", apply);
  product.addEventListener("change", () => {
    if (toggle.checked) apply();
  });
}

function bindBasis(store: ExplorerStore): void {
  el<HTMLSelectElement>("basis-select").addEventListener("change", (ev) => {
    const raw = (ev.target as HTMLSelectElement).value;
    store.setBasis(raw === "" ? null : (raw as CostBasis));
  });
}

async function renderCases(api: Api, store: ExplorerStore, cases: CaseEntry[]): Promise<void> {
  const host = el("case-chart");
  try {
    // profits always come back from the service, one evaluate per fixed case
    const singles = cases.filter((c) => c.id <= 11);
    const results = await Promise.all(
      singles.map((c) => api.evaluate(planFromShares(c.product, c.fixed_shares), store.overlay())),
    );
    const data: CaseBarDatum[] = singles.map((c, i) => ({
      id: c.id,
      label: String(c.id),
      profit: results[i].profit,
      description: c.description,
    }));
    host.innerHTML = renderCaseChart(caseChartModel(data));
  } catch {
    host.innerHTML = `<p class="empty">case comparison unavailable; service not reachable</p>`;
  }
}

async function runSweep(api: Api, store: ExplorerStore, preset: SweepPreset): Promise<void> {
  const host = el("sweep-chart");
  const caption = el("sweep-caption");
  try {
    const series = await api.sweep(
      preset.target,
      preset.lo,
      preset.hi,
      preset.step,
      preset.plan,
      store.overlay(),
    );
    let breakeven: BreakevenInfo;
    if (preset.target.startsWith("split.")) {
      // fraction axes have no breakeven endpoint; mark the sign change if any
      const cross = series.points.find(
        (p, i) => i > 0 && (series.points[i - 1].profit < 0) !== (p.profit < 0),
      );
      breakeven = cross ? { kind: "value", value: cross.x } : { kind: "infeasible" };
    } else {
      const axis = preset.target.startsWith("cost.")
        ? preset.target.slice("cost.".length)
        : preset.target;
      try {
        const be = await api.breakeven(axis, preset.plan, store.overlay());
        breakeven = be.unbounded || be.value === null
          ? { kind: "unbounded" }
          : { kind: "value", value: be.value };
      } catch (err) {
        if (err instanceof ServiceError && err.infeasible) breakeven = { kind: "infeasible" };
        else throw err;
      }
    }
    host.innerHTML = renderSweepChart(sweepChartModel(series.points, breakeven));
    const profits = series.points.map((p) => p.profit);
    caption.textContent =
      `${preset.label}: profit ${money(Math.min(...profits))} to ${money(Math.max(...profits))} Php`;
  } catch {
    host.innerHTML = `<p class="empty">sweep unavailable; service not reachable</p>`;
    caption.textContent = "";
  }
}

const PAGE = `
<header>
  <h1>beanledger explorer</h1>
  <p class="sub">allocation what-ifs for one harvest; every number is computed by the service</p>
  <div id="banner" class="banner" hidden></div>
</header>
<section class="kpis">
  <div class="kpi"><span class="kpi-label">profit, Php</span><span class="kpi-value" id="kpi-profit">-</span></div>
  <div class="kpi"><span class="kpi-label">revenue, Php</span><span class="kpi-value" id="kpi-revenue">-</span></div>
  <div class="kpi"><span class="kpi-label">cost, Php</span><span class="kpi-value" id="kpi-cost">-</span></div>
  <div class="kpi"><span class="kpi-label">harvest, kg</span><span class="kpi-value" id="kpi-harvest">-</span></div>
  <div class="kpi"><span class="kpi-label">unsold, kg</span><span class="kpi-value" id="kpi-unsold">-</span></div>
  <div class="kpi"><span class="kpi-label">cost basis</span><span class="kpi-value small" id="kpi-basis">-</span></div>
  <span id="pending" class="chip" hidden>evaluating&hellip;</span>
  <span id="stale" class="chip warn" hidden>stale</span>
</section>
<main>
  <section class="panel">
    <h2>allocation plan</h2>
    <div class="plan-controls">
      <select id="case-select"></select>
      <button id="reset" type="button">reset</button>
      <label class="basis">cost basis
        <select id="basis-select">
          <option value="">service default</option>
          <option value="ALL_TREES">all planted trees</option>
          <option value="BEARING_TREES">bearing trees only</option>
        </select>
      </label>
      <label class="constraint">
        <input type="checkbox" id="constraint-toggle">
        keep 70% with the Grower Association for
        <select id="constraint-product">
          <option value="DC">dried cherries</option>
          <option value="FC">fresh cherries</option>
          <option value="GCB">green beans</option>
        </select>
      </label>
    </div>
    <div id="sliders"></div>
    <ul id="warnings" class="warnings"></ul>
  </section>
  <section class="panel">
    <h2>where the mass goes</h2>
    <div id="mass-bars"></div>
  </section>
  <section class="panel">
    <h2>profit by case</h2>
    <div id="case-chart" class="chart"></div>
  </section>
  <section class="panel">
    <h2>sweep</h2>
    <select id="sweep-axis">
      ${SWEEP_PRESETS.map((p, i) => `<option value="${i}">${p.label}</option>`).join("")}
    </select>
    <div id="sweep-chart" class="chart"></div>
    <p id="sweep-caption" class="caption"></p>
  </section>
</main>
`;

declare global {
  interface Window {
    BEANLEDGER_API?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = resolveBaseUrl(window.location.search, window.BEANLEDGER_API);
  void mount(el("app"), new Api(base));
}
