/** View-model store: the single source of truth for the page.
 *
 * Every number shown in the UI comes from a service response held here;
 * the store never derives probabilities from raw counts. The commitment
 * threshold is session-global: changing it refetches everything that
 * depends on it (state detail, metrics, timeline regions).
 */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type {
  CurvePoint,
  GraphSummary,
  HowResponse,
  MetricsResponse,
  RegionsResponse,
  StateDetail,
  TimelineResponse,
  WhatResponse,
  WhyResponse,
} from "./types.js";

export interface ViewModel {
  commitment: number;
  summary: GraphSummary | null;
  selectedState: StateDetail | null;
  what: WhatResponse | null;
  how: HowResponse | null;
  why: WhyResponse | null;
  metrics: MetricsResponse | null;
  curve: CurvePoint[];
  episode: number | null;
  timeline: TimelineResponse | null;
  regions: RegionsResponse | null;
  toast: string | null;
}

export const DEFAULT_CURVE_GRID =
  "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95";

type Listener = (model: ViewModel) => void;

export class Store {
  private model: ViewModel = {
    commitment: 0.5,
    summary: null,
    selectedState: null,
    what: null,
    how: null,
    why: null,
    metrics: null,
    curve: [],
    episode: null,
    timeline: null,
    regions: null,
    toast: null,
  };

  private listeners = new Set<Listener>();
  private sliderTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly sliderSettleMs = 150,
  ) {}

  get state(): ViewModel {
    return this.model;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private patch(partial: Partial<ViewModel>): void {
    this.model = { ...this.model, ...partial };
    for (const listener of this.listeners) listener(this.model);
  }

  private fail(error: unknown): void {
    const message =
      error instanceof ApiError ? error.detail : String(error);
    this.patch({ toast: message });
  }

  async init(): Promise<void> {
    try {
      const [summary, metrics] = await Promise.all([
        this.api.graphSummary(),
        this.api.metrics(this.model.commitment, DEFAULT_CURVE_GRID),
      ]);
      this.patch({ summary, metrics, curve: metrics.curve ?? [], toast: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async selectState(stateId: string): Promise<void> {
    try {
      const detail = await this.api.stateDetail(stateId, this.model.commitment);
      this.patch({
        selectedState: detail,
        what: null,
        how: null,
        why: null,
        toast: null,
      });
    } catch (error) {
      this.fail(error);
    }
  }

  async askWhat(): Promise<void> {
    const selected = this.model.selectedState;
    if (!selected) return;
    try {
      const what = await this.api.what(selected.id, this.model.commitment);
      this.patch({ what, toast: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async askHow(desire: string): Promise<void> {
    const selected = this.model.selectedState;
    if (!selected) return;
    try {
      const how = await this.api.how(selected.id, desire);
      this.patch({ how, toast: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async askWhy(action: string): Promise<void> {
    const selected = this.model.selectedState;
    if (!selected) return;
    try {
      const why = await this.api.why(
        selected.id,
        action,
        this.model.commitment,
      );
      this.patch({ why, toast: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async loadEpisode(episode: number): Promise<void> {
    try {
      const [timeline, regions] = await Promise.all([
        this.api.timeline(episode, this.model.commitment),
        this.api.regions(episode, this.model.commitment),
      ]);
      this.patch({ episode, timeline, regions, toast: null });
    } catch (error) {
      this.fail(error);
    }
  }

  async refreshMetrics(): Promise<void> {
    try {
      const metrics = await this.api.metrics(
        this.model.commitment,
        DEFAULT_CURVE_GRID,
      );
      this.patch({ metrics, curve: metrics.curve ?? [], toast: null });
    } catch (error) {
      this.fail(error);
    }
  }

  /** Immediate commitment change: refetch everything threshold-dependent. */
  async setCommitment(value: number): Promise<void> {
    this.patch({ commitment: value });
    const jobs: Promise<void>[] = [this.refreshMetrics()];
    if (this.model.selectedState) {
      jobs.push(this.selectState(this.model.selectedState.id));
    }
    if (this.model.episode !== null) {
      jobs.push(this.loadEpisode(this.model.episode));
    }
    await Promise.all(jobs);
  }

  private sliderWaiters: (() => void)[] = [];

  /** Slider drag handler: one refetch per settle, not per tick. */
  slideCommitment(value: number): Promise<void> {
    this.patch({ commitment: value });
    if (this.sliderTimer !== null) clearTimeout(this.sliderTimer);
    return new Promise((resolve) => {
      this.sliderWaiters.push(resolve);
      this.sliderTimer = setTimeout(() => {
        this.sliderTimer = null;
        const waiters = this.sliderWaiters;
        this.sliderWaiters = [];
        void this.setCommitment(value).then(() => {
          for (const waiter of waiters) waiter();
        });
      }, this.sliderSettleMs);
    });
  }
}
