"""Read-only JSON API over a track store.

Stdlib-only HTTP: each request opens the SQLite file in read-only mode,
answers, and closes, so the server can never mutate the store and
concurrent requests do not share connections.

Routes:
    GET /tracks?start=&end=[&xmin=&ymin=&xmax=&ymax=][&vtype=][&limit=][&cursor=]
    GET /vessels/<mmsi>
    GET /zones
    GET /stats

All responses carry permissive CORS headers so a browser viewer served
from anywhere can call the API.  Errors are machine readable:
{"error": "...", "param": "..."} with a 4xx status.
"""

import json
import mimetypes
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .export import geojson_text, tracks_to_feature_collection
from .gis import ZonePolygon, load_zones
from .query import QuerySpec, run_query, text_to_epoch, track_gen, with_metadata
from .shiptypes import COARSE_CLASSES, coarse_class, type_name
from .storage import open_storage

DEFAULT_LIMIT = 100
MAX_LIMIT = 1000


class ApiError(Exception):
    def __init__(self, status: int, message: str, param: str | None = None):
        super().__init__(message)
        self.status = status
        self.message = message
        self.param = param


def _parse_time_param(value: str, param: str) -> int:
    value = value.strip()
    try:
        if value.lstrip("-").isdigit():
            return int(value)
        return text_to_epoch(value)
    except (ValueError, OverflowError):
        raise ApiError(400, f"cannot parse time {value!r}", param) from None


def _get_one(params: dict, name: str, required: bool = False) -> str | None:
    values = params.get(name)
    if not values:
        if required:
            raise ApiError(400, f"missing required parameter {name!r}", name)
        return None
    return values[-1]


def _float_param(params: dict, name: str) -> float | None:
    raw = _get_one(params, name)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ApiError(400, f"cannot parse number {raw!r}", name) from None


def _int_param(params: dict, name: str, default: int | None = None) -> int | None:
    raw = _get_one(params, name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ApiError(400, f"cannot parse integer {raw!r}", name) from None


def zones_feature_collection(zones: list[ZonePolygon]) -> dict:
    features = []
    for z in zones:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[float(x), float(y)] for x, y in z.ring]],
                },
                "properties": {"name": z.name},
            }
        )
    return {"type": "FeatureCollection", "features": features}


class TrackApiServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(
        self,
        address: tuple[str, int],
        db_path: str,
        *,
        zones_path: str | None = None,
        static_dir: str | None = None,
        quiet: bool = True,
    ):
        self.db_path = str(db_path)
        self.zones = load_zones(zones_path) if zones_path else []
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        self.quiet = quiet
        super().__init__(address, TrackApiHandler)


class TrackApiHandler(BaseHTTPRequestHandler):
    server: TrackApiServer
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        if not self.server.quiet:
            super().log_message(fmt, *args)

    # -- response plumbing -----------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, obj: dict) -> None:
        body = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
        self._send(status, body, "application/json")

    def _send_geojson(self, obj: dict) -> None:
        self._send(200, geojson_text(obj).encode(), "application/geo+json")

    def do_OPTIONS(self):
        self._send(204, b"", "text/plain")

    # -- routing ---------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        params = parse_qs(url.query)
        try:
            if url.path == "/tracks":
                self._handle_tracks(params)
            elif url.path.startswith("/vessels/"):
                self._handle_vessel(url.path[len("/vessels/") :])
            elif url.path == "/zones":
                self._send_geojson(zones_feature_collection(self.server.zones))
            elif url.path == "/stats":
                self._handle_stats()
            elif self.server.static_dir is not None:
                self._handle_static(url.path)
            else:
                raise ApiError(404, f"no such route: {url.path}")
        except ApiError as e:
            payload = {"error": e.message}
            if e.param:
                payload["param"] = e.param
            self._send_json(e.status, payload)
        except BrokenPipeError:
            pass
        except Exception:
            self._send_json(500, {"error": "internal error"})

    # -- routes ----------------------------------------------------------

    def _handle_tracks(self, params: dict) -> None:
        start = _parse_time_param(_get_one(params, "start", required=True), "start")
        end = _parse_time_param(_get_one(params, "end", required=True), "end")
        corners = {n: _float_param(params, n) for n in ("xmin", "ymin", "xmax", "ymax")}
        given = [n for n, v in corners.items() if v is not None]
        if given and len(given) != 4:
            missing = sorted(set(corners) - set(given))
            raise ApiError(400, f"bbox needs all four corners, missing {missing}", missing[0])
        bbox = None
        if len(given) == 4:
            bbox = (corners["xmin"], corners["ymin"], corners["xmax"], corners["ymax"])
        vtype = _get_one(params, "vtype")
        if vtype is not None and vtype not in COARSE_CLASSES:
            raise ApiError(
                400, f"vtype must be one of {', '.join(COARSE_CLASSES)}", "vtype"
            )
        limit = _int_param(params, "limit", DEFAULT_LIMIT)
        if not 1 <= limit <= MAX_LIMIT:
            raise ApiError(400, f"limit must be within 1..{MAX_LIMIT}", "limit")
        cursor = _int_param(params, "cursor", None)

        try:
            spec = QuerySpec(start=start, end=end, bbox=bbox)
        except ValueError as e:
            raise ApiError(400, str(e)) from None

        with open_storage(self.server.db_path, read_only=True) as handle:
            kept = []
            next_cursor = None
            tracks = with_metadata(track_gen(run_query(handle, spec)), handle)
            for track in tracks:
                if cursor is not None and track.mmsi <= cursor:
                    continue
                if vtype is not None and coarse_class(track.meta.get("ship_type")) != vtype:
                    continue
                if len(kept) >= limit:
                    next_cursor = kept[-1].mmsi
                    break
                kept.append(track)
            doc = tracks_to_feature_collection(kept)
            doc["next_cursor"] = next_cursor
        self._send_geojson(doc)

    def _handle_vessel(self, tail: str) -> None:
        if not re.fullmatch(r"\d{1,9}", tail):
            raise ApiError(400, f"bad mmsi {tail!r}", "mmsi")
        mmsi = int(tail)
        with open_storage(self.server.db_path, read_only=True) as handle:
            info = handle.vessel_info(mmsi)
        if info is None:
            raise ApiError(404, f"no static data for mmsi {mmsi}")
        code = info.get("ship_type")
        info["type_name"] = type_name(code) if code is not None else "Unknown"
        info["coarse_class"] = coarse_class(code)
        self._send_json(200, info)

    def _handle_stats(self) -> None:
        with open_storage(self.server.db_path, read_only=True) as handle:
            parts = handle.partition_counts()
        self._send_json(
            200,
            {
                "partitions": parts,
                "months": [p["month"] for p in parts],
                "dynamic_rows": sum(p["dynamic_rows"] for p in parts),
                "static_rows": sum(p["static_rows"] for p in parts),
                "zones": len(self.server.zones),
            },
        )

    def _handle_static(self, path: str) -> None:
        root = self.server.static_dir
        rel = path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if not target.is_relative_to(root) or not target.is_file():
            raise ApiError(404, f"no such route: {path}")
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), ctype)


def serve(
    db_path: str,
    host: str = "127.0.0.1",
    port: int = 8737,
    *,
    zones_path: str | None = None,
    static_dir: str | None = None,
    quiet: bool = True,
) -> TrackApiServer:
    """Build a ready-to-run server; callers invoke serve_forever themselves."""
    return TrackApiServer(
        (host, port),
        db_path,
        zones_path=zones_path,
        static_dir=static_dir,
        quiet=quiet,
    )


__all__ = [
    "ApiError",
    "DEFAULT_LIMIT",
    "MAX_LIMIT",
    "TrackApiHandler",
    "TrackApiServer",
    "serve",
    "zones_feature_collection",
]
