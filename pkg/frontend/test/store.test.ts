import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { DEFAULT_CURVE_GRID, Store } from "../src/store.js";
import { MockService } from "./mock.js";
import type { DesireDraft } from "../src/types.js";

const REACH_D: DesireDraft = {
  id: "reach_d",
  where: [{ var: "v", in: ["D"] }],
  action: "act",
};

const REACH_B: DesireDraft = {
  id: "reach_b",
  where: [{ var: "v", in: ["B"] }],
  action: "go",
};

function freshStore(mock: MockService, settleMs = 5): Store {
  return new Store(new ApiClient(mock.fetch), settleMs);
}

describe("Store", () => {
  it("loads summary, metrics, and the trade-off curve on init", async () => {
    const mock = new MockService([REACH_D]);
    const store = freshStore(mock);
    await store.init();
    expect(store.state.summary?.desires).toEqual(["reach_d"]);
    expect(store.state.metrics?.any_desire).toBeDefined();
    expect(store.state.curve.length).toBe(
      DEFAULT_CURVE_GRID.split(",").length,
    );
    expect(store.state.toast).toBeNull();
  });

  it("selecting a state clears stale query results", async () => {
    const mock = new MockService([REACH_D]);
    const store = freshStore(mock);
    await store.init();
    await store.selectState("v=A");
    await store.askWhat();
    expect(store.state.what).not.toBeNull();
    await store.selectState("v=B");
    expect(store.state.what).toBeNull();
    expect(store.state.selectedState?.id).toBe("v=B");
  });

  it("surfaces a 404 as a toast instead of throwing", async () => {
    const mock = new MockService();
    const store = freshStore(mock);
    await store.selectState("v=Z");
    expect(store.state.selectedState).toBeNull();
    expect(store.state.toast).toContain("v=Z");
  });

  it("refetches state detail, metrics, and regions when commitment changes", async () => {
    const mock = new MockService([REACH_D]);
    const store = freshStore(mock);
    await store.init();
    await store.selectState("v=A");
    await store.loadEpisode(0);
    expect(store.state.selectedState?.attributed.length).toBe(1);
    expect(store.state.regions?.regions.length).toBe(2);
    await store.setCommitment(1.0);
    expect(store.state.commitment).toBe(1.0);
    expect(store.state.selectedState?.attributed.length).toBe(0);
    expect(store.state.regions?.regions).toEqual([
      {
        kind: "unintentional",
        t_start: 0,
        t_end: 5,
        desire: null,
        peak: 0,
      },
    ]);
    expect(store.state.metrics?.any_desire?.reliability).toBeNull();
  });

  it("issues one regions request per slider settle, not per tick", async () => {
    const mock = new MockService([REACH_D]);
    const store = freshStore(mock, 10);
    await store.init();
    await store.loadEpisode(0);
    const before = mock.countRequests("/regions/0");
    const drags = [0.1, 0.2, 0.3, 0.4, 0.45].map((v) =>
      store.slideCommitment(v),
    );
    await Promise.all(drags);
    expect(mock.countRequests("/regions/0")).toBe(before + 1);
    expect(store.state.commitment).toBe(0.45);
    expect(store.state.regions?.commitment).toBe(0.45);
  });

  it("a second drag after a settle triggers a second refetch", async () => {
    const mock = new MockService([REACH_D]);
    const store = freshStore(mock, 5);
    await store.init();
    await store.loadEpisode(0);
    const before = mock.countRequests("/regions/0");
    await store.slideCommitment(0.3);
    await store.slideCommitment(0.7);
    expect(mock.countRequests("/regions/0")).toBe(before + 2);
  });

  it("registering then deleting a desire restores the prior trade-off curve", async () => {
    const mock = new MockService([REACH_D]);
    const api = new ApiClient(mock.fetch);
    const store = new Store(api, 5);
    await store.init();
    const baseline = store.state.curve;
    expect(baseline.length).toBeGreaterThan(0);

    await api.registerDesire(REACH_B);
    await store.refreshMetrics();
    expect(store.state.curve).not.toEqual(baseline);
    expect(
      store.state.curve.every((p) => "reach_b" in p.per_desire),
    ).toBe(true);

    await api.deleteDesire("reach_b");
    await store.refreshMetrics();
    expect(store.state.curve).toEqual(baseline);
  });
});
