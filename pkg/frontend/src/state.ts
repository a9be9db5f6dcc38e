/** Single view-state store with sequence-gated fetches.

    Fetched documents are frozen before they enter the state, so any
    accidental mutation throws in strict mode, and the render layer is
    forced to stay a pure function of the state.
*/

import type { TrackCollection, ZoneCollection } from "./types.js";
import type { FilterState } from "./filters.js";
import { defaultFilters } from "./filters.js";
import type { ApiClient } from "./net.js";

/** Monotonic gate: a response applies only if nothing newer applied yet. */
export class FetchGate {
  private issued = 0;
  private applied = 0;

  issue(): number {
    return ++this.issued;
  }

  tryApply(seq: number): boolean {
    if (seq <= this.applied) return false;
    this.applied = seq;
    return true;
  }
}

export interface Viewport {
  lon: number;
  lat: number;
  scale: number; // degrees of longitude across the map width
  manual: boolean; // stop auto-fitting once the user has zoomed
}

export interface ViewState {
  filters: FilterState;
  collection: TrackCollection | null;
  zones: ZoneCollection | null;
  selection: number | null; // highlighted mmsi
  viewport: Viewport;
  loading: boolean;
  error: string | null;
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

export class Store {
  readonly gate = new FetchGate();
  private listeners: Array<(s: ViewState) => void> = [];

  state: ViewState = {
    filters: defaultFilters(),
    collection: null,
    zones: null,
    selection: null,
    viewport: { lon: 0, lat: 0, scale: 360, manual: false },
    loading: false,
    error: null,
  };

  subscribe(fn: (s: ViewState) => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn(this.state);
  }

  setFilters(patch: Partial<FilterState>): void {
    this.state = { ...this.state, filters: { ...this.state.filters, ...patch } };
    this.emit();
  }

  setZones(zones: ZoneCollection): void {
    this.state = { ...this.state, zones: deepFreeze(zones) };
    this.emit();
  }

  select(mmsi: number | null): void {
    this.state = { ...this.state, selection: mmsi };
    this.emit();
  }

  setViewport(patch: Partial<Viewport>): void {
    this.state = { ...this.state, viewport: { ...this.state.viewport, ...patch } };
    this.emit();
  }

  beginFetch(): number {
    this.state = { ...this.state, loading: true, error: null };
    this.emit();
    return this.gate.issue();
  }

  /** Apply a completed fetch unless something newer already rendered. */
  completeFetch(seq: number, collection: TrackCollection): boolean {
    if (!this.gate.tryApply(seq)) return false;
    const keep =
      this.state.selection !== null &&
      collection.features.some((f) => f.properties.mmsi === this.state.selection);
    this.state = {
      ...this.state,
      collection: deepFreeze(collection),
      selection: keep ? this.state.selection : null,
      loading: false,
      error: null,
    };
    this.emit();
    return true;
  }

  failFetch(seq: number, err: unknown): boolean {
    if (!this.gate.tryApply(seq)) return false;
    this.state = { ...this.state, loading: false, error: String(err) };
    this.emit();
    return true;
  }
}

/** One filter-driven fetch cycle; stale completions die at the gate. */
export async function runFetch(store: Store, api: ApiClient): Promise<boolean> {
  const seq = store.beginFetch();
  try {
    const collection = await api.fetchTracks(store.state.filters);
    return store.completeFetch(seq, collection);
  } catch (err) {
    return store.failFetch(seq, err);
  }
}
