/** Wire shapes of the read-only track API.  The viewer never mutates these. */

export interface TrackProperties {
  mmsi: number;
  timestamps: string[];
  ship_type: string;
  ship_name: string | null;
  vtype: string;
  [extra: string]: unknown;
}

export interface TrackFeature {
  type: "Feature";
  geometry: { type: "LineString"; coordinates: [number, number][] };
  properties: TrackProperties;
}

export interface TrackCollection {
  type: "FeatureCollection";
  features: TrackFeature[];
  next_cursor: number | null;
}

export interface ZoneFeature {
  type: "Feature";
  geometry: { type: "Polygon"; coordinates: [number, number][][] };
  properties: { name: string };
}

export interface ZoneCollection {
  type: "FeatureCollection";
  features: ZoneFeature[];
}

export interface MonthCount {
  month: string;
  dynamic_rows: number;
  static_rows: number;
  aggregate_rows: number;
}

export interface StoreStats {
  partitions: MonthCount[];
  months: string[];
  dynamic_rows: number;
  static_rows: number;
  zones: number;
}

export interface VesselInfo {
  mmsi: number;
  type_name: string;
  coarse_class: string;
  ship_name?: string | null;
  [extra: string]: unknown;
}
