/** Page wiring: controls, map interaction, fetch loop, live polling. */

import { ApiClient } from "./net.js";
import { Store, runFetch } from "./state.js";
import type { ViewState } from "./state.js";
import { filtersFromQuery, filtersToQuery } from "./filters.js";
import { COARSE_CLASSES, renderLegend } from "./legend.js";
import { VIEW_W, VIEW_H, projectionOf, unproject, renderCount, renderMap } from "./map.js";
import { renderPanel } from "./panel.js";

const LIVE_INTERVAL_MS = 30_000;
const DRAG_MIN_PX = 6;

/** Click delegation: a track path selects its vessel, the background clears. */
export function wireSelection(svg: Element, store: Store): void {
  svg.addEventListener("click", (ev) => {
    const target = ev.target as Element | null;
    const path = target?.closest?.("path[data-mmsi]");
    if (path) {
      store.select(Number(path.getAttribute("data-mmsi")));
    } else if (target === svg) {
      store.select(null);
    }
  });
}

function clientToView(svg: Element, ev: { clientX: number; clientY: number }): [number, number] {
  const rect = svg.getBoundingClientRect();
  if (rect.width === 0 || rect.height === 0) return [0, 0];
  return [
    ((ev.clientX - rect.left) * VIEW_W) / rect.width,
    ((ev.clientY - rect.top) * VIEW_H) / rect.height,
  ];
}

function wireBboxDrag(svg: Element, store: Store, refetch: () => void): void {
  const doc = svg.ownerDocument;
  let start: [number, number] | null = null;
  let rubber: Element | null = null;

  svg.addEventListener("pointerdown", (ev) => {
    start = clientToView(svg, ev as PointerEvent);
  });

  svg.addEventListener("pointermove", (ev) => {
    if (!start) return;
    const here = clientToView(svg, ev as PointerEvent);
    if (Math.hypot(here[0] - start[0], here[1] - start[1]) < DRAG_MIN_PX) return;
    if (!rubber) {
      rubber = doc.createElementNS("http://www.w3.org/2000/svg", "rect");
      rubber.setAttribute("class", "rubber");
      svg.appendChild(rubber);
    }
    rubber.setAttribute("x", String(Math.min(start[0], here[0])));
    rubber.setAttribute("y", String(Math.min(start[1], here[1])));
    rubber.setAttribute("width", String(Math.abs(here[0] - start[0])));
    rubber.setAttribute("height", String(Math.abs(here[1] - start[1])));
  });

  svg.addEventListener("pointerup", (ev) => {
    if (!start) return;
    const from = start;
    start = null;
    const dragged = rubber !== null;
    rubber?.remove();
    rubber = null;
    if (!dragged) return;
    const proj = projectionOf(svg);
    if (!proj) return;
    const here = clientToView(svg, ev as PointerEvent);
    const [lon1, lat1] = unproject(proj, from[0], from[1]);
    const [lon2, lat2] = unproject(proj, here[0], here[1]);
    // the drawn rectangle becomes the query bbox verbatim
    store.setFilters({
      bbox: [
        Math.min(lon1, lon2),
        Math.min(lat1, lat2),
        Math.max(lon1, lon2),
        Math.max(lat1, lat2),
      ],
    });
    refetch();
  });
}

function wireZoom(svg: Element, store: Store): void {
  svg.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const proj = projectionOf(svg);
    if (!proj) return;
    const [lon, lat] = unproject(proj, VIEW_W / 2, VIEW_H / 2);
    const scale = VIEW_W / proj.kx;
    const factor = (ev as WheelEvent).deltaY < 0 ? 1 / 1.25 : 1.25;
    store.setViewport({ lon, lat, scale: scale * factor, manual: true });
  });
}

function monthWindow(month: string): { start: string; end: string } {
  const year = Number(month.slice(0, 4));
  const mon = Number(month.slice(4, 6));
  const nextYear = mon === 12 ? year + 1 : year;
  const nextMon = mon === 12 ? 1 : mon + 1;
  const pad = (n: number) => String(n).padStart(2, "0");
  return {
    start: `${year}-${pad(mon)}-01T00:00`,
    end: `${nextYear}-${pad(nextMon)}-01T00:00`,
  };
}

export function boot(doc: Document): void {
  const win = doc.defaultView;
  if (!win) return;
  const pageQuery = new URLSearchParams(win.location.search);
  const api = new ApiClient(pageQuery.get("api") ?? "");
  const store = new Store();

  const byId = (id: string) => doc.getElementById(id);
  const svg = byId("map");
  const legendEl = byId("legend");
  const panelEl = byId("panel");
  const countEl = byId("count");
  const statusEl = byId("status");
  const startEl = byId("start") as HTMLInputElement | null;
  const endEl = byId("end") as HTMLInputElement | null;
  const vtypeEl = byId("vtype") as HTMLSelectElement | null;
  const liveEl = byId("live") as HTMLInputElement | null;
  if (!svg || !legendEl || !panelEl || !countEl || !statusEl) return;

  if (vtypeEl) {
    const all = doc.createElement("option");
    all.value = "";
    all.textContent = "all types";
    vtypeEl.appendChild(all);
    for (const cls of COARSE_CLASSES) {
      const opt = doc.createElement("option");
      opt.value = cls;
      opt.textContent = cls;
      vtypeEl.appendChild(opt);
    }
  }

  let liveTimer: ReturnType<typeof setInterval> | null = null;
  function syncLiveTimer(state: ViewState): void {
    if (state.filters.live && liveTimer === null) {
      liveTimer = setInterval(refetch, LIVE_INTERVAL_MS);
    } else if (!state.filters.live && liveTimer !== null) {
      clearInterval(liveTimer);
      liveTimer = null;
    }
  }

  function syncControls(state: ViewState): void {
    const f = state.filters;
    if (startEl && startEl.value !== f.start) startEl.value = f.start;
    if (endEl && endEl.value !== f.end) endEl.value = f.end;
    if (vtypeEl && vtypeEl.value !== (f.vtype ?? "")) vtypeEl.value = f.vtype ?? "";
    if (liveEl && liveEl.checked !== f.live) liveEl.checked = f.live;
  }

  function pushUrl(state: ViewState): void {
    const q = new URLSearchParams(filtersToQuery(state.filters));
    const apiBase = pageQuery.get("api");
    if (apiBase) q.set("api", apiBase);
    const tail = q.toString();
    win!.history.replaceState(null, "", tail ? `?${tail}` : win!.location.pathname);
  }

  function refetch(): void {
    pushUrl(store.state);
    void runFetch(store, api);
  }

  store.subscribe((state) => {
    renderMap(svg, state);
    renderLegend(legendEl, state.collection?.features ?? []);
    renderPanel(panelEl, state);
    renderCount(countEl, state);
    statusEl.textContent = state.loading
      ? "loading..."
      : state.error
        ? `error: ${state.error}`
        : "";
    syncControls(state);
    syncLiveTimer(state);
  });

  wireSelection(svg, store);
  wireBboxDrag(svg, store, refetch);
  wireZoom(svg, store);

  startEl?.addEventListener("change", () => {
    store.setFilters({ start: startEl.value });
    refetch();
  });
  endEl?.addEventListener("change", () => {
    store.setFilters({ end: endEl.value });
    refetch();
  });
  vtypeEl?.addEventListener("change", () => {
    store.setFilters({ vtype: vtypeEl.value || null });
    refetch();
  });
  liveEl?.addEventListener("change", () => {
    store.setFilters({ live: liveEl.checked });
  });
  byId("clear-bbox")?.addEventListener("click", () => {
    store.setFilters({ bbox: null });
    refetch();
  });
  byId("fit")?.addEventListener("click", () => {
    store.setViewport({ manual: false });
  });
  svg.addEventListener("dblclick", () => {
    store.setFilters({ bbox: null });
    refetch();
  });

  void api.fetchZones().then((zones) => store.setZones(zones)).catch(() => undefined);

  const fromUrl = filtersFromQuery(win.location.search);
  store.setFilters(fromUrl);
  if (fromUrl.start && fromUrl.end) {
    refetch();
  } else {
    // no window in the link: default to the newest month in the store
    api
      .fetchStats()
      .then((stats) => {
        const month = stats.months[stats.months.length - 1];
        if (month) store.setFilters(monthWindow(month));
        refetch();
      })
      .catch((err) => {
        statusEl.textContent = `error: ${String(err)}`;
      });
  }
}

if (typeof document !== "undefined" && document.getElementById("map")) {
  boot(document);
}
