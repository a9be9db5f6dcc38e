/** Filter state and its URL query-string form (shareable links). */

import { COARSE_CLASSES } from "./legend.js";

export type BBox = [number, number, number, number];

export interface FilterState {
  start: string; // ISO-8601, passed to the API verbatim
  end: string;
  bbox: BBox | null;
  vtype: string | null; // one legend class, null shows all
  live: boolean;
}

export function defaultFilters(): FilterState {
  return { start: "", end: "", bbox: null, vtype: null, live: false };
}

export function filtersToQuery(f: FilterState): string {
  const q = new URLSearchParams();
  if (f.start) q.set("start", f.start);
  if (f.end) q.set("end", f.end);
  if (f.bbox) {
    const [xmin, ymin, xmax, ymax] = f.bbox;
    q.set("xmin", String(xmin));
    q.set("ymin", String(ymin));
    q.set("xmax", String(xmax));
    q.set("ymax", String(ymax));
  }
  if (f.vtype) q.set("vtype", f.vtype);
  if (f.live) q.set("live", "1");
  return q.toString();
}

export function filtersFromQuery(query: string): FilterState {
  const q = new URLSearchParams(query);
  const f = defaultFilters();
  f.start = q.get("start") ?? "";
  f.end = q.get("end") ?? "";
  const corners = ["xmin", "ymin", "xmax", "ymax"].map((k) => q.get(k));
  if (corners.every((c) => c !== null)) {
    const nums = corners.map((c) => Number(c));
    // all-or-none, same as the API contract
    if (nums.every((n) => Number.isFinite(n))) {
      f.bbox = nums as BBox;
    }
  }
  const vtype = q.get("vtype");
  if (vtype && (COARSE_CLASSES as readonly string[]).includes(vtype)) {
    f.vtype = vtype;
  }
  f.live = q.get("live") === "1";
  return f;
}

export function sameFilters(a: FilterState, b: FilterState): boolean {
  return filtersToQuery(a) === filtersToQuery(b);
}
