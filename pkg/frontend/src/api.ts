/** Typed client for the audit service.
 *
 * Concurrent GETs to the same URL are deduplicated: while a request is in
 * flight, further calls share its promise instead of hitting the network.
 */

import type {
  DesireDraft,
  DesireInfo,
  GraphSummary,
  HowResponse,
  MetricsResponse,
  RegionsResponse,
  RegisterResponse,
  StateDetail,
  StateListPage,
  TimelineResponse,
  WhatResponse,
  WhyResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

function query(params: Record<string, string | number | undefined>): string {
  const pairs = Object.entries(params).filter(([, v]) => v !== undefined);
  if (pairs.length === 0) return "";
  const search = new URLSearchParams();
  for (const [k, v] of pairs) search.set(k, String(v));
  return `?${search.toString()}`;
}

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly base = "",
  ) {}

  private async request<T>(url: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + url, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private get<T>(url: string): Promise<T> {
    const pending = this.inflight.get(url);
    if (pending) return pending as Promise<T>;
    const promise = this.request<T>(url).finally(() => {
      this.inflight.delete(url);
    });
    this.inflight.set(url, promise);
    return promise;
  }

  graphSummary(): Promise<GraphSummary> {
    return this.get("/graph/summary");
  }

  states(page = 0): Promise<StateListPage> {
    return this.get(`/states${query({ page })}`);
  }

  stateDetail(stateId: string, commitment: number): Promise<StateDetail> {
    return this.get(
      `/state/${encodeURIComponent(stateId)}${query({ commitment })}`,
    );
  }

  desires(): Promise<{ desires: DesireInfo[] }> {
    return this.get("/desires");
  }

  registerDesire(draft: DesireDraft): Promise<RegisterResponse> {
    return this.request("/desires", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(draft),
    });
  }

  deleteDesire(id: string): Promise<{ deleted: string }> {
    return this.request(`/desires/${encodeURIComponent(id)}`, {
      method: "DELETE",
    });
  }

  what(state: string, commitment: number): Promise<WhatResponse> {
    return this.get(`/query/what${query({ state, commitment })}`);
  }

  how(state: string, desire: string, maxDepth?: number): Promise<HowResponse> {
    return this.get(
      `/query/how${query({ state, desire, max_depth: maxDepth })}`,
    );
  }

  why(state: string, action: string, commitment: number): Promise<WhyResponse> {
    return this.get(`/query/why${query({ state, action, commitment })}`);
  }

  metrics(commitment: number, curve?: string): Promise<MetricsResponse> {
    return this.get(`/metrics${query({ commitment, curve })}`);
  }

  timeline(episode: number, commitment: number): Promise<TimelineResponse> {
    return this.get(`/timeline/${episode}${query({ commitment })}`);
  }

  regions(
    episode: number,
    commitment: number,
    opts: { minlen?: number; grace?: number; stall?: number } = {},
  ): Promise<RegionsResponse> {
    return this.get(
      `/regions/${episode}${query({ commitment, ...opts })}`,
    );
  }
}
