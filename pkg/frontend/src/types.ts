/** Typed mirrors of the audit service's JSON responses. */

export interface SpaceVariable {
  name: string;
  domain: string[];
}

export interface SpaceJson {
  variables: SpaceVariable[];
}

export interface GraphSummary {
  states: number;
  edges: number;
  actions: string[];
  total_occupancy: number;
  episodes: number[];
  desires: string[];
  space: SpaceJson;
}

export interface StateListEntry {
  id: string;
  occupancy: number;
  p_state: number;
}

export interface StateListPage {
  page: number;
  page_size: number;
  total: number;
  states: StateListEntry[];
}

export interface TransitionEntry {
  action: string;
  to: string;
  p: number;
}

export interface AttributedDesire {
  desire: string;
  intention: number;
}

export interface StateDetail {
  id: string;
  predicates: Record<string, string>;
  p_state: number;
  terminal: boolean;
  action_probs: Record<string, number>;
  transitions: TransitionEntry[];
  intentions: Record<string, number>;
  attributed: AttributedDesire[];
}

export interface DesireLiteral {
  var: string;
  in: string[];
}

export interface DesireInfo {
  id: string;
  where: DesireLiteral[];
  action: string;
  epsilon: number;
  states_with_intention: number;
}

export interface DesireDraft {
  id: string;
  where: DesireLiteral[];
  action: string;
  epsilon?: number;
}

export interface WhatResponse {
  state: string;
  attributed: AttributedDesire[];
  text: string;
}

export interface PlanStep {
  action: string;
  successor: string;
  intention: number;
}

export interface HowResponse {
  state: string;
  desire: string;
  plan: PlanStep[];
  text: string;
}

export interface WhyVerdict {
  kind: "furthers_intention" | "gamble" | "unintentional";
  desire: string | null;
  expected_increase: number | null;
  p_increase: number | null;
  expected_positive: number | null;
}

export interface WhyResponse {
  state: string;
  action: string;
  verdicts: WhyVerdict[];
  text: string;
}

export interface DesireMetrics {
  region_probability: number;
  action_probability: number | null;
  intention_probability: number;
  expected_intention: number | null;
}

export interface CurvePoint {
  commitment: number;
  interpretability: number;
  reliability: number | null;
  per_desire: Record<
    string,
    { intention_probability: number; expected_intention: number | null }
  >;
}

export interface MetricsResponse {
  entropy: {
    weighted: { total: number; action: number; world: number };
    unweighted: { total: number; action: number; world: number };
  };
  states: number;
  total_occupancy: number;
  desires?: Record<string, DesireMetrics>;
  any_desire?: { interpretability: number; reliability: number | null };
  curve?: CurvePoint[];
}

export interface TimelineStep {
  t: number;
  state: string;
  action: string;
  values: Record<string, number>;
  attributed: string[];
  fulfilled: string[];
  unseen: boolean;
}

export interface TimelineResponse {
  episode: number;
  commitment: number;
  steps: TimelineStep[];
}

export type RegionKind = "unintentional" | "unfulfilled" | "stalled";

export interface RegionJson {
  kind: RegionKind;
  t_start: number;
  t_end: number;
  desire: string | null;
  peak: number;
}

export interface RegionsResponse {
  episode: number;
  commitment: number;
  regions: RegionJson[];
}

export interface RegisterResponse {
  id: string;
  duration_seconds: number;
  metrics: MetricsResponse;
}
