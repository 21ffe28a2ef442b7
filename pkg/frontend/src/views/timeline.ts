/** Timeline chart model: per-desire intention lines, the commitment rule,
 * and shaded region bands. Pure function of the service responses — the
 * band list is the `/regions` payload verbatim, only positioned.
 */

import type {
  RegionJson,
  RegionsResponse,
  TimelineResponse,
} from "../types.js";

export interface SeriesPoint {
  t: number;
  value: number;
}

export interface Series {
  desire: string;
  points: SeriesPoint[];
}

export interface Band {
  region: RegionJson;
  /** Horizontal extent as a fraction of the episode length, for CSS. */
  left: number;
  width: number;
}

export interface TimelineChart {
  episode: number;
  commitment: number;
  length: number;
  series: Series[];
  bands: Band[];
}

export function buildTimelineChart(
  timeline: TimelineResponse,
  regions: RegionsResponse,
): TimelineChart {
  if (timeline.episode !== regions.episode) {
    throw new Error(
      `timeline episode ${timeline.episode} != regions episode ${regions.episode}`,
    );
  }
  const length = timeline.steps.length;
  const desires = new Set<string>();
  for (const step of timeline.steps) {
    for (const d of Object.keys(step.values)) desires.add(d);
  }
  const series: Series[] = [...desires].sort().map((desire) => ({
    desire,
    points: timeline.steps.map((step) => ({
      t: step.t,
      value: step.values[desire] ?? 0,
    })),
  }));
  const bands: Band[] = regions.regions.map((region) => ({
    region,
    left: length === 0 ? 0 : region.t_start / length,
    width: length === 0 ? 0 : (region.t_end - region.t_start + 1) / length,
  }));
  return {
    episode: timeline.episode,
    commitment: timeline.commitment,
    length,
    series,
    bands,
  };
}
