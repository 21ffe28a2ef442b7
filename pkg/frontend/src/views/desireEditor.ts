/** Desire-editor model: client-side validation of a draft against the
 * predicate space *before* any network call. Structural checks only; the
 * service remains the authority (422s are surfaced next to the form).
 */

import type { DesireDraft, GraphSummary } from "../types.js";

export interface DraftProblem {
  field: "id" | "where" | "action";
  literal?: number;
  message: string;
}

export function validateDraft(
  draft: DesireDraft,
  summary: GraphSummary,
  existing: string[],
): DraftProblem[] {
  const problems: DraftProblem[] = [];
  if (!draft.id.trim()) {
    problems.push({ field: "id", message: "desire id is required" });
  } else if (existing.includes(draft.id)) {
    problems.push({
      field: "id",
      message: `desire '${draft.id}' already exists`,
    });
  }
  if (!summary.actions.includes(draft.action)) {
    problems.push({
      field: "action",
      message: `unknown action '${draft.action}'`,
    });
  }
  if (draft.where.length === 0) {
    problems.push({ field: "where", message: "clause needs a literal" });
  }
  const domains = new Map(
    summary.space.variables.map((v) => [v.name, new Set(v.domain)]),
  );
  const seen = new Set<string>();
  draft.where.forEach((literal, i) => {
    const domain = domains.get(literal.var);
    if (!domain) {
      problems.push({
        field: "where",
        literal: i,
        message: `unknown variable '${literal.var}'`,
      });
      return;
    }
    if (seen.has(literal.var)) {
      problems.push({
        field: "where",
        literal: i,
        message: `variable '${literal.var}' appears twice`,
      });
    }
    seen.add(literal.var);
    if (literal.in.length === 0) {
      problems.push({
        field: "where",
        literal: i,
        message: `literal for '${literal.var}' admits no values`,
      });
    }
    for (const value of literal.in) {
      if (!domain.has(value)) {
        problems.push({
          field: "where",
          literal: i,
          message: `'${value}' is not in the domain of '${literal.var}'`,
        });
      }
    }
  });
  return problems;
}
