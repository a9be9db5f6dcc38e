import { expect, test } from "vitest";

import { COARSE_CLASSES, colorFor, legendEntries, renderLegend } from "../src/legend.js";
import type { TrackFeature } from "../src/types.js";

function feature(mmsi: number, vtype: string): TrackFeature {
  return {
    type: "Feature",
    geometry: { type: "LineString", coordinates: [[0, 0], [1, 1]] },
    properties: { mmsi, timestamps: [], ship_type: "x", ship_name: null, vtype },
  };
}

test("one entry per class present, in fixed order", () => {
  const feats = [feature(1, "other"), feature(2, "cargo"), feature(3, "cargo")];
  const entries = legendEntries(feats);
  expect(entries.map((e) => e.vtype)).toEqual(["cargo", "other"]);
  expect(entries.map((e) => e.count)).toEqual([2, 1]);
});

test("all five classes give five entries", () => {
  const feats = COARSE_CLASSES.map((cls, i) => feature(i, cls));
  expect(legendEntries(feats)).toHaveLength(5);
});

test("empty collection gives an empty legend", () => {
  expect(legendEntries([])).toEqual([]);
});

test("unknown class buckets into other", () => {
  const entries = legendEntries([feature(1, "submarine")]);
  expect(entries.map((e) => e.vtype)).toEqual(["other"]);
  expect(colorFor("submarine")).toBe(colorFor("other"));
});

test("class colors are pairwise distinct", () => {
  const colors = COARSE_CLASSES.map((c) => colorFor(c));
  expect(new Set(colors).size).toBe(COARSE_CLASSES.length);
});

test("renderLegend writes one list item per present class", () => {
  const ul = document.createElement("ul");
  renderLegend(ul, [feature(1, "tanker"), feature(2, "fishing"), feature(3, "tanker")]);
  const items = [...ul.querySelectorAll("li")];
  expect(items.map((li) => li.dataset.vtype)).toEqual(["tanker", "fishing"]);
  expect(items[0]?.textContent).toContain("tanker (2)");

  // re-render replaces, never accumulates
  renderLegend(ul, [feature(9, "cargo")]);
  expect([...ul.querySelectorAll("li")].map((li) => li.dataset.vtype)).toEqual(["cargo"]);
});
