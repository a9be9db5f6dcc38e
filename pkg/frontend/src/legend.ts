/** Vessel-type legend: fixed class order, fixed palette. */

import type { TrackFeature } from "./types.js";

export const COARSE_CLASSES = ["cargo", "tanker", "fishing", "passenger", "other"] as const;

export type CoarseClass = (typeof COARSE_CLASSES)[number];

const PALETTE: Record<CoarseClass, string> = {
  cargo: "#d97f28",
  tanker: "#b33939",
  fishing: "#2e7d4f",
  passenger: "#3558a8",
  other: "#6e7b87",
};

function bucket(vtype: string | null | undefined): CoarseClass {
  return (COARSE_CLASSES as readonly string[]).includes(vtype ?? "")
    ? (vtype as CoarseClass)
    : "other";
}

export function colorFor(vtype: string | null | undefined): string {
  return PALETTE[bucket(vtype)];
}

export interface LegendEntry {
  vtype: CoarseClass;
  color: string;
  count: number;
}

/** One entry per class present among the features, in fixed class order. */
export function legendEntries(features: readonly TrackFeature[]): LegendEntry[] {
  const counts = new Map<CoarseClass, number>();
  for (const f of features) {
    const cls = bucket(f.properties.vtype);
    counts.set(cls, (counts.get(cls) ?? 0) + 1);
  }
  return COARSE_CLASSES.filter((c) => counts.has(c)).map((c) => ({
    vtype: c,
    color: PALETTE[c],
    count: counts.get(c) ?? 0,
  }));
}

export function renderLegend(el: HTMLElement, features: readonly TrackFeature[]): void {
  const doc = el.ownerDocument;
  el.textContent = "";
  for (const entry of legendEntries(features)) {
    const li = doc.createElement("li");
    const swatch = doc.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = entry.color;
    li.appendChild(swatch);
    li.appendChild(doc.createTextNode(` ${entry.vtype} (${entry.count})`));
    li.dataset.vtype = entry.vtype;
    el.appendChild(li);
  }
}
