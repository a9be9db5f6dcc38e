/** SVG track renderer on an equirectangular fit.

    No tiles, no map library: zones and tracks are data-space paths
    projected into a fixed viewBox.  The projection used for the last
    render is remembered per element so pointer events can be mapped
    back to lon/lat.
*/

import type { ViewState } from "./state.js";
import { colorFor } from "./legend.js";

export const VIEW_W = 800;
export const VIEW_H = 560;
const SVG_NS = "http://www.w3.org/2000/svg";

export interface Projection {
  x0: number; // lon at x = 0
  y0: number; // lat at y = 0
  kx: number; // px per degree lon
  ky: number; // px per degree lat
}

export function project(p: Projection, lon: number, lat: number): [number, number] {
  return [(lon - p.x0) * p.kx, (p.y0 - lat) * p.ky];
}

export function unproject(p: Projection, x: number, y: number): [number, number] {
  return [p.x0 + x / p.kx, p.y0 - y / p.ky];
}

function dataBounds(state: ViewState): [number, number, number, number] {
  let xmin = Infinity, ymin = Infinity, xmax = -Infinity, ymax = -Infinity;
  const eat = (lon: number, lat: number) => {
    if (lon < xmin) xmin = lon;
    if (lon > xmax) xmax = lon;
    if (lat < ymin) ymin = lat;
    if (lat > ymax) ymax = lat;
  };
  for (const f of state.collection?.features ?? []) {
    for (const [lon, lat] of f.geometry.coordinates) eat(lon, lat);
  }
  for (const z of state.zones?.features ?? []) {
    for (const ring of z.geometry.coordinates) for (const [lon, lat] of ring) eat(lon, lat);
  }
  if (!Number.isFinite(xmin)) return [-64.2, 44.2, -63.0, 45.0]; // nothing loaded yet
  if (xmax - xmin < 1e-6) { xmin -= 0.05; xmax += 0.05; }
  if (ymax - ymin < 1e-6) { ymin -= 0.05; ymax += 0.05; }
  return [xmin, ymin, xmax, ymax];
}

export function fitProjection(state: ViewState): Projection {
  const vp = state.viewport;
  if (vp.manual) {
    const kx = VIEW_W / vp.scale;
    const ky = kx / Math.cos((vp.lat * Math.PI) / 180);
    return { x0: vp.lon - vp.scale / 2, y0: vp.lat + VIEW_H / (2 * ky), kx, ky };
  }
  const [xmin, ymin, xmax, ymax] = dataBounds(state);
  const midLat = (ymin + ymax) / 2;
  const aspect = Math.cos((midLat * Math.PI) / 180);
  // equal ground scale on both axes, 5% margin
  const k = Math.min(VIEW_W / ((xmax - xmin) * aspect), VIEW_H / (ymax - ymin)) * 0.95;
  const kx = k * aspect;
  const ky = k;
  const cx = (xmin + xmax) / 2;
  const cy = (ymin + ymax) / 2;
  return { x0: cx - VIEW_W / (2 * kx), y0: cy + VIEW_H / (2 * ky), kx, ky };
}

const projections = new WeakMap<Element, Projection>();

export function projectionOf(svg: Element): Projection | undefined {
  return projections.get(svg);
}

function pathOf(coords: readonly (readonly [number, number])[], p: Projection): string {
  let d = "";
  for (let i = 0; i < coords.length; i++) {
    const pt = coords[i];
    if (!pt) continue;
    const [x, y] = project(p, pt[0], pt[1]);
    d += `${i === 0 ? "M" : "L"}${x.toFixed(1)} ${y.toFixed(1)}`;
  }
  return d;
}

export function renderMap(svg: Element, state: ViewState): void {
  const doc = svg.ownerDocument;
  const p = fitProjection(state);
  projections.set(svg, p);
  svg.setAttribute("viewBox", `0 0 ${VIEW_W} ${VIEW_H}`);
  svg.textContent = "";

  for (const z of state.zones?.features ?? []) {
    const ring = z.geometry.coordinates[0] ?? [];
    const el = doc.createElementNS(SVG_NS, "path");
    el.setAttribute("d", pathOf(ring, p) + "Z");
    el.setAttribute("class", "zone");
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = z.properties.name;
    el.appendChild(title);
    svg.appendChild(el);
  }

  for (const f of state.collection?.features ?? []) {
    const el = doc.createElementNS(SVG_NS, "path");
    el.setAttribute("d", pathOf(f.geometry.coordinates, p));
    el.setAttribute(
      "class",
      f.properties.mmsi === state.selection ? "track selected" : "track",
    );
    el.setAttribute("stroke", colorFor(f.properties.vtype));
    el.setAttribute("data-mmsi", String(f.properties.mmsi));
    svg.appendChild(el);
  }

  if (state.filters.bbox) {
    const [xmin, ymin, xmax, ymax] = state.filters.bbox;
    const [x1, y1] = project(p, xmin, ymax);
    const [x2, y2] = project(p, xmax, ymin);
    const el = doc.createElementNS(SVG_NS, "rect");
    el.setAttribute("x", Math.min(x1, x2).toFixed(1));
    el.setAttribute("y", Math.min(y1, y2).toFixed(1));
    el.setAttribute("width", Math.abs(x2 - x1).toFixed(1));
    el.setAttribute("height", Math.abs(y2 - y1).toFixed(1));
    el.setAttribute("class", "bbox");
    svg.appendChild(el);
  }
}

export function renderCount(el: HTMLElement, state: ViewState): void {
  const n = state.collection?.features.length ?? 0;
  el.textContent = `${n} track${n === 1 ? "" : "s"}`;
}
