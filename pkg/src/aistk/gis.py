"""Spherical geometry primitives, zone polygons, and vessel transition graphs.

Coordinates are (lon, lat) in decimal degrees throughout, matching the
(x, y) axis order used by the rest of the toolkit.  Distances use the
haversine formula on a sphere of radius ``EARTH_RADIUS_M``.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

EARTH_RADIUS_M = 6_371_000.0

OUTSIDE = "outside"


class ZoneError(ValueError):
    """Raised for malformed zone polygons or zone files."""


def haversine(lon1: float, lat1: float, lon2: float, lat2: float) -> float:
    """Great-circle distance in meters between two lon/lat points."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = phi2 - phi1
    dlmb = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def haversine_arr(lon1, lat1, lon2, lat2):
    """Vectorized haversine; accepts numpy arrays, returns meters."""
    phi1 = np.radians(lat1)
    phi2 = np.radians(lat2)
    dphi = phi2 - phi1
    dlmb = np.radians(np.asarray(lon2) - np.asarray(lon1))
    a = np.sin(dphi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(a)))


def bearing(lon1: float, lat1: float, lon2: float, lat2: float) -> float:
    """Initial bearing (forward azimuth) from point 1 to point 2, degrees in [0, 360)."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dlmb = math.radians(lon2 - lon1)
    y = math.sin(dlmb) * math.cos(phi2)
    x = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(dlmb)
    return math.degrees(math.atan2(y, x)) % 360.0


def _on_segment(px, py, ax, ay, bx, by, eps=1e-12):
    # collinear and within the segment's extent
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if abs(cross) > eps:
        return False
    dot = (px - ax) * (bx - ax) + (py - ay) * (by - ay)
    sq_len = (bx - ax) ** 2 + (by - ay) ** 2
    return -eps <= dot <= sq_len + eps


def point_in_ring(lon: float, lat: float, ring: Sequence[tuple[float, float]]) -> bool:
    """Even-odd ray-cast membership test on a closed lon/lat ring.

    Boundary points count as inside.  Planar test: adequate for regional
    zones away from the poles, which is the documented approximation.
    """
    n = len(ring) - 1  # ring is closed, last vertex repeats the first
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[i + 1]
        if _on_segment(lon, lat, ax, ay, bx, by):
            return True
    inside = False
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[i + 1]
        if (ay > lat) != (by > lat):
            x_cross = ax + (lat - ay) * (bx - ax) / (by - ay)
            if lon < x_cross:
                inside = not inside
    return inside


def _segments_cross(p1, p2, p3, p4):
    # proper crossing test (shared endpoints do not count)
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > 0:
            return 1
        if v < 0:
            return -1
        return 0

    o1 = orient(p1, p2, p3)
    o2 = orient(p1, p2, p4)
    o3 = orient(p3, p4, p1)
    o4 = orient(p3, p4, p2)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


@dataclass
class ZonePolygon:
    """Named polygon with a closed exterior ring and a precomputed bbox."""

    name: str
    ring: list[tuple[float, float]]
    bbox: tuple[float, float, float, float] = field(init=False)

    def __post_init__(self):
        if len(self.ring) < 4:
            raise ZoneError(f"zone {self.name!r}: ring needs at least 4 vertices including closure")
        if self.ring[0] != self.ring[-1]:
            raise ZoneError(f"zone {self.name!r}: ring is not closed")
        n = len(self.ring) - 1
        for i in range(n):
            for j in range(i + 1, n):
                if abs(i - j) in (0, 1) or (i == 0 and j == n - 1):
                    continue  # adjacent edges share a vertex
                if _segments_cross(self.ring[i], self.ring[i + 1], self.ring[j], self.ring[j + 1]):
                    raise ZoneError(f"zone {self.name!r}: ring self-intersects (edges {i} and {j})")
        xs = [p[0] for p in self.ring]
        ys = [p[1] for p in self.ring]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))

    def contains(self, lon: float, lat: float) -> bool:
        xmin, ymin, xmax, ymax = self.bbox
        if not (xmin <= lon <= xmax and ymin <= lat <= ymax):
            return False
        return point_in_ring(lon, lat, self.ring)


def point_in_polygon(lon: float, lat: float, zone: ZonePolygon) -> bool:
    return zone.contains(lon, lat)


def zone_of(lon: float, lat: float, zones: Sequence[ZonePolygon]) -> str:
    """Name of the first zone containing the point, in declaration order, else "outside"."""
    for z in zones:
        if z.contains(lon, lat):
            return z.name
    return OUTSIDE


def load_zones(path: str | Path) -> list[ZonePolygon]:
    """Load zones from a GeoJSON FeatureCollection of named Polygons.

    Only exterior rings are supported; polygons with holes are rejected.
    """
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("type") != "FeatureCollection":
        raise ZoneError("zone file must be a GeoJSON FeatureCollection")
    zones = []
    for i, feat in enumerate(doc.get("features", [])):
        geom = feat.get("geometry") or {}
        if geom.get("type") != "Polygon":
            raise ZoneError(f"feature {i}: only Polygon geometries are supported")
        rings = geom.get("coordinates") or []
        if len(rings) != 1:
            raise ZoneError(f"feature {i}: polygon holes are not supported")
        name = (feat.get("properties") or {}).get("name")
        if not name:
            raise ZoneError(f"feature {i}: missing 'name' property")
        ring = [(float(x), float(y)) for x, y in rings[0]]
        zones.append(ZonePolygon(name=name, ring=ring))
    return zones


@dataclass
class EdgeStat:
    transit_count: int = 0
    vessels: set = field(default_factory=set)


@dataclass
class GeoGraph:
    """Directed multigraph of zone transitions.

    Nodes are zone names plus the reserved "outside" node; each edge
    carries a transit count and the set of contributing MMSIs.
    """

    nodes: set = field(default_factory=set)
    edges: dict = field(default_factory=dict)  # (from, to) -> EdgeStat

    def add_transit(self, src: str, dst: str, mmsi: int):
        stat = self.edges.setdefault((src, dst), EdgeStat())
        stat.transit_count += 1
        stat.vessels.add(mmsi)

    def total_transits(self) -> int:
        return sum(e.transit_count for e in self.edges.values())


def build_graph(tracks: Iterable, zones: Sequence[ZonePolygon]) -> GeoGraph:
    """Build the zone-transition graph from per-vessel tracks.

    Each track point maps to its zone; consecutive repeats collapse, and
    every remaining adjacent pair becomes one directed edge increment.
    Self-loops never occur by construction.
    """
    graph = GeoGraph()
    graph.nodes.update(z.name for z in zones)
    graph.nodes.add(OUTSIDE)
    for track in tracks:
        prev = None
        for lon, lat in zip(track.x, track.y):
            name = zone_of(float(lon), float(lat), zones)
            if prev is not None and name != prev:
                graph.add_transit(prev, name, track.mmsi)
            prev = name
    return graph


@dataclass
class FeaturePointSet:
    """Labelled set of reference points (e.g. shore, ports)."""

    label: str
    lons: np.ndarray
    lats: np.ndarray
    names: list[str]

    def __post_init__(self):
        if len(self.lons) == 0:
            raise ValueError("feature point set must be non-empty")


def load_feature_points(path: str | Path, label: str | None = None) -> FeaturePointSet:
    """Read a `name,lon,lat` CSV into a FeaturePointSet."""
    path = Path(path)
    names, lons, lats = [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            names.append(row["name"])
            lons.append(float(row["lon"]))
            lats.append(float(row["lat"]))
    return FeaturePointSet(
        label=label or path.stem,
        lons=np.array(lons, dtype=float),
        lats=np.array(lats, dtype=float),
        names=names,
    )


@dataclass
class Nearest:
    meters: float
    lon: float
    lat: float
    name: str


def distance_to_nearest(lon: float, lat: float, features: FeaturePointSet) -> Nearest:
    """Minimum haversine distance from the point to the feature set."""
    d = haversine_arr(lon, lat, features.lons, features.lats)
    i = int(np.argmin(d))
    return Nearest(float(d[i]), float(features.lons[i]), float(features.lats[i]), features.names[i])
