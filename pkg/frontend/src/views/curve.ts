/** Trade-off chart model from the `/metrics` curve: interpretability and
 * reliability against the commitment threshold, plus one intention-
 * probability series per desire. Pure function of the response.
 */

import type { CurvePoint } from "../types.js";

export interface CurveSeries {
  label: string;
  points: { x: number; y: number | null }[];
}

export interface CurveChart {
  series: CurveSeries[];
}

export function buildCurveChart(curve: CurvePoint[]): CurveChart {
  const series: CurveSeries[] = [
    {
      label: "interpretability",
      points: curve.map((p) => ({ x: p.commitment, y: p.interpretability })),
    },
    {
      label: "reliability",
      points: curve.map((p) => ({ x: p.commitment, y: p.reliability })),
    },
  ];
  const desires = new Set<string>();
  for (const point of curve) {
    for (const d of Object.keys(point.per_desire)) desires.add(d);
  }
  for (const desire of [...desires].sort()) {
    series.push({
      label: `I(${desire})`,
      points: curve.map((p) => ({
        x: p.commitment,
        y: p.per_desire[desire]?.intention_probability ?? null,
      })),
    });
  }
  return { series };
}
