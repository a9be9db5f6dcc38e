import { expect, test } from "vitest";

import { wireSelection } from "../src/main.js";
import { renderCount, renderMap } from "../src/map.js";
import { renderPanel } from "../src/panel.js";
import { Store } from "../src/state.js";
import type { TrackCollection, ZoneCollection } from "../src/types.js";

const TWO_TRACKS: TrackCollection = {
  type: "FeatureCollection",
  next_cursor: null,
  features: [
    {
      type: "Feature",
      geometry: {
        type: "LineString",
        coordinates: [
          [-63.60, 44.60],
          [-63.55, 44.64],
          [-63.50, 44.66],
        ],
      },
      properties: {
        mmsi: 316001201,
        timestamps: ["2024-06-11T01:00:00", "2024-06-11T01:10:00", "2024-06-11T01:20:00"],
        ship_type: "Cargo",
        ship_name: "EASTERN LINE",
        vtype: "cargo",
      },
    },
    {
      type: "Feature",
      geometry: {
        type: "LineString",
        coordinates: [
          [-63.40, 44.55],
          [-63.35, 44.58],
        ],
      },
      properties: {
        mmsi: 316001204,
        timestamps: ["2024-06-11T02:00:00", "2024-06-11T02:30:00"],
        ship_type: "Tanker",
        ship_name: "HARBOUR OAK",
        vtype: "tanker",
      },
    },
  ],
};

const ZONES: ZoneCollection = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      geometry: {
        type: "Polygon",
        coordinates: [[[-63.7, 44.5], [-63.5, 44.5], [-63.5, 44.7], [-63.7, 44.7], [-63.7, 44.5]]],
      },
      properties: { name: "inner" },
    },
  ],
};

function svgEl(): Element {
  return document.createElementNS("http://www.w3.org/2000/svg", "svg");
}

function loadedStore(): Store {
  const store = new Store();
  store.setZones(ZONES);
  store.completeFetch(store.beginFetch(), TWO_TRACKS);
  return store;
}

test("one polyline per feature, colored by class", () => {
  const svg = svgEl();
  renderMap(svg, loadedStore().state);
  const paths = [...svg.querySelectorAll("path.track")];
  expect(paths).toHaveLength(2);
  const strokes = paths.map((p) => p.getAttribute("stroke"));
  expect(new Set(strokes).size).toBe(2); // cargo and tanker differ
  expect(svg.querySelectorAll("path.zone")).toHaveLength(1);
});

test("empty collection renders an empty layer and a zero count", () => {
  const svg = svgEl();
  const store = new Store();
  store.completeFetch(store.beginFetch(), {
    type: "FeatureCollection",
    features: [],
    next_cursor: null,
  });
  renderMap(svg, store.state);
  expect(svg.querySelectorAll("path.track")).toHaveLength(0);

  const label = document.createElement("span");
  renderCount(label, store.state);
  expect(label.textContent).toBe("0 tracks");
});

test("re-rendering identical state is idempotent", () => {
  const svg = svgEl();
  const store = loadedStore();
  renderMap(svg, store.state);
  const once = svg.innerHTML;
  renderMap(svg, store.state);
  expect(svg.innerHTML).toBe(once);
});

test("clicking a track shows that vessel in the panel", () => {
  const svg = svgEl();
  const panel = document.createElement("section");
  document.body.appendChild(svg);
  const store = loadedStore();
  wireSelection(svg, store);
  store.subscribe((state) => {
    renderMap(svg, state);
    renderPanel(panel, state);
  });
  renderMap(svg, store.state);

  const target = svg.querySelector('path[data-mmsi="316001204"]');
  expect(target).not.toBeNull();
  target!.dispatchEvent(new MouseEvent("click", { bubbles: true }));

  expect(store.state.selection).toBe(316001204);
  // the panel mmsi equals the clicked feature's mmsi
  expect(panel.querySelector('[data-field="mmsi"]')?.textContent).toBe("316001204");
  expect(panel.textContent).toContain("HARBOUR OAK");
  expect(svg.querySelectorAll("path.track.selected")).toHaveLength(1);

  // clicking the open water clears the selection
  svg.dispatchEvent(new MouseEvent("click", { bubbles: true }));
  expect(store.state.selection).toBeNull();
  document.body.removeChild(svg);
});

test("bbox filter renders as an overlay rectangle", () => {
  const svg = svgEl();
  const store = loadedStore();
  store.setFilters({ bbox: [-63.65, 44.52, -63.45, 44.68] });
  renderMap(svg, store.state);
  expect(svg.querySelectorAll("rect.bbox")).toHaveLength(1);
});
