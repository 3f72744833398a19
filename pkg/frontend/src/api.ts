import type {
  BreakevenResponse,
  CaseEntry,
  ConfigOverlay,
  ErrorBody,
  EvaluateResponse,
  OptimizeResponse,
  PlanBody,
  ServiceConfig,
  SweepResponse,
} from "./types.js";

export const DEFAULT_BASE_URL = "http://127.0.0.1:8715";

/**
 * Pick the service base URL. The `api` query parameter wins, then an
 * explicit build-time override, then the stock local port.
 */
export function resolveBaseUrl(search: string, override?: string): string {
  const fromQuery = new URLSearchParams(search).get("api");
  const chosen = fromQuery ?? override ?? DEFAULT_BASE_URL;
  return chosen.replace(/\/+$/, "");
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody | null,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }

  /** 422: the request was fine but the computation has no answer. */
  get infeasible(): boolean {
    return this.status === 422;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Api {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  async config(): Promise<ServiceConfig> {
    return this.request("GET", "/config");
  }

  async cases(): Promise<CaseEntry[]> {
    return this.request("GET", "/cases");
  }

  async evaluate(plan: Partial<PlanBody>, config?: ConfigOverlay): Promise<EvaluateResponse> {
    return this.request("POST", "/evaluate", config ? { plan, config } : { plan });
  }

  async sweep(
    target: string,
    lo: number,
    hi: number,
    step: number,
    plan?: Partial<PlanBody>,
    config?: ConfigOverlay,
  ): Promise<SweepResponse> {
    const body: Record<string, unknown> = { target, lo, hi, step };
    if (plan) body.plan = plan;
    if (config) body.config = config;
    return this.request("POST", "/sweep", body);
  }

  async breakeven(
    axis: string,
    plan?: Partial<PlanBody>,
    config?: ConfigOverlay,
  ): Promise<BreakevenResponse> {
    const body: Record<string, unknown> = { axis };
    if (plan) body.plan = plan;
    if (config) body.config = config;
    return this.request("POST", "/breakeven", body);
  }

  async optimize(constraint?: Record<string, unknown>, config?: ConfigOverlay): Promise<OptimizeResponse> {
    const body: Record<string, unknown> = {};
    if (constraint) body.constraint = constraint;
    if (config) body.config = config;
    return this.request("POST", "/optimize", body);
  }

  private async request<T>(method: "GET" | "POST", path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!res.ok) {
      let parsed: ErrorBody | null = null;
      try {
        parsed = (await res.json()) as ErrorBody;
      } catch {
        // non-JSON error page; keep the status only
      }
      const reason = parsed?.reason ?? parsed?.detail ?? res.statusText;
      throw new ServiceError(res.status, parsed, `${method} ${path} -> ${res.status}: ${reason}`);
    }
    return (await res.json()) as T;
  }
}
