import { describe, expect, it } from "vitest";
import { Api, DEFAULT_BASE_URL, resolveBaseUrl, ServiceError, type FetchLike } from "../src/api.js";

describe("resolveBaseUrl", () => {
  it("defaults to the stock local service", () => {
    expect(resolveBaseUrl("")).toBe(DEFAULT_BASE_URL);
  });

  it("prefers the api query parameter over everything", () => {
    expect(resolveBaseUrl("?api=http://10.0.0.9:9000", "http://build-time:1")).toBe(
      "http://10.0.0.9:9000",
    );
  });

  it("falls back to the build-time override", () => {
    expect(resolveBaseUrl("?foo=bar", "http://build-time:1")).toBe("http://build-time:1");
  });

  it("strips trailing slashes so paths join cleanly", () => {
    expect(resolveBaseUrl("?api=http://x:1///")).toBe("http://x:1");
  });
});

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function fakeFetch(
  handler: (input: string, init?: RequestInit) => Response,
): { calls: { input: string; init?: RequestInit }[]; fetch: FetchLike } {
  const calls: { input: string; init?: RequestInit }[] = [];
  return {
    calls,
    fetch: (input, init) => {
      calls.push({ input, init });
      return Promise.resolve(handler(input, init));
    },
  };
}

describe("Api", () => {
  it("posts the plan body to /evaluate and parses the response", async () => {
    const { calls, fetch } = fakeFetch(() => jsonResponse(200, { profit: 1 }));
    const api = new Api("http://svc:1", fetch);
    const res = await api.evaluate({ delta: [0, 0, 1, 0, 0] });
    expect(res.profit).toBe(1);
    expect(calls[0].input).toBe("http://svc:1/evaluate");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      plan: { delta: [0, 0, 1, 0, 0] },
    });
  });

  it("includes the config overlay only when one is given", async () => {
    const { calls, fetch } = fakeFetch(() => jsonResponse(200, {}));
    const api = new Api("http://svc:1", fetch);
    await api.evaluate({ beta: [1, 0, 0, 0, 0] }, { engine: { cost_basis: "BEARING_TREES" } });
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      plan: { beta: [1, 0, 0, 0, 0] },
      config: { engine: { cost_basis: "BEARING_TREES" } },
    });
  });

  it("maps 400 validation bodies onto ServiceError with detail", async () => {
    const { fetch } = fakeFetch(() =>
      jsonResponse(400, { error: "validation", detail: "plan.beta must be an array of numbers" }),
    );
    const api = new Api("http://svc:1", fetch);
    const err = await api.evaluate({}).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    const se = err as ServiceError;
    expect(se.status).toBe(400);
    expect(se.infeasible).toBe(false);
    expect(se.body?.detail).toBe("plan.beta must be an array of numbers");
    expect(se.message).toContain("plan.beta must be an array of numbers");
  });

  it("maps 422 infeasible bodies with the reason", async () => {
    const { fetch } = fakeFetch(() =>
      jsonResponse(422, { error: "infeasible", reason: "profit negative at zero cost" }),
    );
    const api = new Api("http://svc:1", fetch);
    const err = await api.breakeven("dehulling").catch((e: unknown) => e);
    const se = err as ServiceError;
    expect(se.infeasible).toBe(true);
    expect(se.body?.reason).toBe("profit negative at zero cost");
  });

  it("survives non-JSON error pages", async () => {
    const { fetch } = fakeFetch(
      () => new Response("<html>boom</html>", { status: 500, statusText: "Internal Server Error" }),
    );
    const api = new Api("http://svc:1", fetch);
    const err = await api.health().catch((e: unknown) => e);
    const se = err as ServiceError;
    expect(se.status).toBe(500);
    expect(se.body).toBeNull();
  });

  it("sends sweep and breakeven parameters flat, plan optional", async () => {
    const { calls, fetch } = fakeFetch(() => jsonResponse(200, { points: [] }));
    const api = new Api("http://svc:1", fetch);
    await api.sweep("price.gcb.all", 60, 100, 1);
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      target: "price.gcb.all",
      lo: 60,
      hi: 100,
      step: 1,
    });
    await api.breakeven("price.gcb.all", { sigma: [1, 0, 0, 0, 0] });
    expect(JSON.parse(String(calls[1].init?.body))).toEqual({
      axis: "price.gcb.all",
      plan: { sigma: [1, 0, 0, 0, 0] },
    });
  });
});
