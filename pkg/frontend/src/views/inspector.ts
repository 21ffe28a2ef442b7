/** State-inspector panel model: predicates, P(a|s), attributed intentions,
 * and the buttons that issue how/why queries. Pure function of the state
 * detail response and the query results already in the store.
 */

import type {
  HowResponse,
  StateDetail,
  WhatResponse,
  WhyResponse,
} from "../types.js";

export interface ActionRow {
  action: string;
  probability: number;
  whyEnabled: boolean;
}

export interface IntentionRow {
  desire: string;
  intention: number;
  attributed: boolean;
  howEnabled: boolean;
}

export interface InspectorPanel {
  stateId: string;
  predicates: [string, string][];
  terminal: boolean;
  pState: number;
  actions: ActionRow[];
  intentions: IntentionRow[];
  /** Shown when nothing is attributed at the current threshold. */
  unintentionalBanner: boolean;
  whatText: string | null;
  howText: string | null;
  howPath: string[];
  whyText: string | null;
}

export function buildInspectorPanel(
  detail: StateDetail,
  what: WhatResponse | null,
  how: HowResponse | null,
  why: WhyResponse | null,
): InspectorPanel {
  const attributed = new Set(detail.attributed.map((a) => a.desire));
  const actions: ActionRow[] = Object.entries(detail.action_probs)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([action, probability]) => ({
      action,
      probability,
      whyEnabled: probability > 0,
    }));
  const intentions: IntentionRow[] = Object.entries(detail.intentions)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([desire, intention]) => ({
      desire,
      intention,
      attributed: attributed.has(desire),
      howEnabled: attributed.has(desire),
    }));
  return {
    stateId: detail.id,
    predicates: Object.entries(detail.predicates),
    terminal: detail.terminal,
    pState: detail.p_state,
    actions,
    intentions,
    unintentionalBanner: detail.attributed.length === 0,
    whatText: what ? what.text : null,
    howText: how ? how.text : null,
    howPath: how ? [detail.id, ...how.plan.map((s) => s.successor)] : [],
    whyText: why ? why.text : null,
  };
}
