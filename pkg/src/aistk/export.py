"""Serialization of query results: row CSV and track GeoJSON.

The GeoJSON writer is deterministic on purpose: keys are sorted, the
separator style is fixed, and every float is rounded to 9 decimals
before serialization so repeated runs over the same store produce
byte-identical files.
"""

import csv
import json
import math
from typing import IO, Iterable

import numpy as np

from .decoder.sources import CSV_COLUMNS
from .query import epoch_to_text
from .shiptypes import coarse_class, type_name
from .storage import DynamicRow
from .tracks import Track

FLOAT_DECIMALS = 9


def rows_to_csv(rows: Iterable[DynamicRow], fo: IO[str]) -> int:
    """Write dynamic rows with the same header decode_source reads back."""
    writer = csv.writer(fo, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    n = 0
    for row in rows:
        writer.writerow(
            [
                row.mmsi,
                epoch_to_text(row.time),
                repr(float(row.lon)),
                repr(float(row.lat)),
                "" if row.sog is None else repr(float(row.sog)),
                "" if row.cog is None else repr(float(row.cog)),
                "" if row.heading is None else int(row.heading),
                "" if row.nav_status is None else int(row.nav_status),
                row.source or "",
            ]
        )
        n += 1
    return n


def _jsonable(value):
    """Round floats, unwrap numpy, and map non-finite values to null."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if not math.isfinite(v):
            return None
        return round(v, FLOAT_DECIMALS)
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def track_to_feature(track: Track) -> dict:
    """Feature with one timestamp per position plus vessel identity.

    ship_type comes out as a display name (code resolved through the
    bundled lookup); vtype is the coarse legend class derived from the
    same code.
    """
    coords = [[float(x), float(y)] for x, y in zip(track.x, track.y)]
    code = track.meta.get("ship_type")
    props = {
        "mmsi": int(track.mmsi),
        "timestamps": [epoch_to_text(int(t)) for t in track.t],
        "ship_type": type_name(code),
        "ship_name": track.meta.get("ship_name"),
        "vtype": coarse_class(code),
    }
    for key, value in track.meta.items():
        if key not in props and key not in ("ship_type", "mmsi", "month"):
            props[key] = value
    return {
        "type": "Feature",
        "geometry": {"type": "LineString", "coordinates": coords},
        "properties": props,
    }


def tracks_to_feature_collection(tracks: Iterable[Track]) -> dict:
    """FeatureCollection of LineStrings; sub-2-point tracks are dropped
    since a LineString needs two positions."""
    features = [track_to_feature(t) for t in tracks if len(t) >= 2]
    return {"type": "FeatureCollection", "features": features}


def dump_geojson(obj: dict, fo: IO[str]) -> None:
    json.dump(_jsonable(obj), fo, sort_keys=True, separators=(",", ":"), allow_nan=False)
    fo.write("\n")


def geojson_text(obj: dict) -> str:
    return (
        json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)
        + "\n"
    )


__all__ = [
    "FLOAT_DECIMALS",
    "dump_geojson",
    "geojson_text",
    "rows_to_csv",
    "track_to_feature",
    "tracks_to_feature_collection",
]
