/** Thin HTTP client for the track API; pagination folded into one call. */

import type { StoreStats, TrackCollection, VesselInfo, ZoneCollection } from "./types.js";
import type { FilterState } from "./filters.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number, readonly param?: string) {
    super(message);
    this.name = "ApiError";
  }
}

interface JsonResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

type FetchLike = (url: string) => Promise<JsonResponse>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  tracksUrl(f: FilterState, limit: number, cursor: number | null = null): string {
    const q = new URLSearchParams({ start: f.start, end: f.end });
    if (f.bbox) {
      const [xmin, ymin, xmax, ymax] = f.bbox;
      q.set("xmin", String(xmin));
      q.set("ymin", String(ymin));
      q.set("xmax", String(xmax));
      q.set("ymax", String(ymax));
    }
    if (f.vtype) q.set("vtype", f.vtype);
    q.set("limit", String(limit));
    if (cursor !== null) q.set("cursor", String(cursor));
    return `${this.base}/tracks?${q.toString()}`;
  }

  private async getJson<T>(url: string): Promise<T> {
    const resp = await this.fetchFn(url);
    const body = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      throw new ApiError(
        String(body?.error ?? `HTTP ${resp.status}`),
        resp.status,
        typeof body?.param === "string" ? body.param : undefined,
      );
    }
    return body as T;
  }

  /** Fetch every page of a track query and merge the features. */
  async fetchTracks(f: FilterState, limit = 500, maxPages = 20): Promise<TrackCollection> {
    const features: TrackCollection["features"] = [];
    let cursor: number | null = null;
    for (let page = 0; page < maxPages; page++) {
      const doc: TrackCollection = await this.getJson(this.tracksUrl(f, limit, cursor));
      features.push(...doc.features);
      cursor = doc.next_cursor;
      if (cursor === null) break;
    }
    return { type: "FeatureCollection", features, next_cursor: null };
  }

  fetchZones(): Promise<ZoneCollection> {
    return this.getJson(`${this.base}/zones`);
  }

  fetchStats(): Promise<StoreStats> {
    return this.getJson(`${this.base}/stats`);
  }

  fetchVessel(mmsi: number): Promise<VesselInfo> {
    return this.getJson(`${this.base}/vessels/${mmsi}`);
  }
}
