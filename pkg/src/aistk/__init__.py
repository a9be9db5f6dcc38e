"""AIS track toolkit: decode, store, query, clean, and serve vessel tracks."""

from .decoder import (
    DecodeError,
    PositionReportA,
    PositionReportB,
    StaticDataReportA,
    StaticDataReportB,
    StaticVoyage,
    StreamDecoder,
    decode_source,
)
from .gis import (
    EARTH_RADIUS_M,
    GeoGraph,
    ZonePolygon,
    bearing,
    build_graph,
    distance_to_nearest,
    haversine,
    load_zones,
    point_in_ring,
    zone_of,
)
from .query import (
    QuerySpec,
    epoch_to_text,
    run_query,
    text_to_epoch,
    track_gen,
    valid_mmsi,
    with_metadata,
)
from .raster import RasterGrid, annotate_track, load_ascii_grid, load_geotiff
from .storage import IngestReport, StorageHandle, open_storage
from .tracks import Track, concat_tracks
from .trajectory import (
    CleanParams,
    decimate,
    encode_greatcircledistance,
    interp_equidistant,
    interp_time,
    score,
    split_timedelta,
)

__version__ = "0.1.0"

__all__ = [
    "CleanParams",
    "DecodeError",
    "EARTH_RADIUS_M",
    "GeoGraph",
    "IngestReport",
    "PositionReportA",
    "PositionReportB",
    "QuerySpec",
    "RasterGrid",
    "StaticDataReportA",
    "StaticDataReportB",
    "StaticVoyage",
    "StorageHandle",
    "StreamDecoder",
    "Track",
    "ZonePolygon",
    "annotate_track",
    "bearing",
    "build_graph",
    "concat_tracks",
    "decimate",
    "decode_source",
    "distance_to_nearest",
    "encode_greatcircledistance",
    "epoch_to_text",
    "haversine",
    "interp_equidistant",
    "interp_time",
    "load_ascii_grid",
    "load_geotiff",
    "load_zones",
    "open_storage",
    "point_in_ring",
    "run_query",
    "score",
    "split_timedelta",
    "text_to_epoch",
    "track_gen",
    "valid_mmsi",
    "with_metadata",
    "zone_of",
    "__version__",
]
