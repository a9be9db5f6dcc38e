"""Command-line front end.

Subcommands cover the whole pipeline: file import, windowed query with
optional cleaning/resampling, zone-transition graphs, raster annotation,
stream replay/listen, and the HTTP API server.

Query pipeline stages always apply in a fixed order regardless of flag
order on the command line:

    split (--split-gap) -> clean (--distance-threshold/--speed-threshold)
    -> interpolate (--interp-step) -> decimate (--decimate-epsilon)

A flag left unset skips its stage, so a bare query exports raw tracks.
"""

import argparse
import csv
import json
import math
import sys
import threading
from contextlib import ExitStack
from typing import Iterable, Iterator

from . import stream as stream_mod
from .decoder.sources import SourceStats, decode_source, guess_format
from .export import rows_to_csv, dump_geojson, tracks_to_feature_collection
from .gis import build_graph, load_zones
from .query import (
    QuerySpec,
    epoch_to_text,
    run_query,
    text_to_epoch,
    track_gen,
    with_metadata,
)
from .raster import load_ascii_grid, load_geotiff
from .server import serve
from .storage import DynamicRow, StorageError, open_storage
from .tracks import Track
from .trajectory import (
    decimate_all,
    encode_greatcircledistance,
    interp_time_all,
    split_timedelta,
)


def _parse_time_arg(text: str) -> int:
    text = text.strip()
    if text.lstrip("-").isdigit():
        return int(text)
    return text_to_epoch(text)


def _parse_bbox(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("bbox must be xmin,ymin,xmax,ymax")
    try:
        return tuple(float(p) for p in parts)  # type: ignore[return-value]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _parse_mmsi_list(values: list[str]) -> set[int]:
    out = set()
    for chunk in values:
        for item in chunk.split(","):
            item = item.strip()
            if item:
                out.add(int(item))
    return out


def _open_output(path: str | None, stack: ExitStack):
    if path and path != "-":
        return stack.enter_context(open(path, "w", newline=""))
    return sys.stdout


def _load_raster(path: str):
    if path.lower().endswith((".tif", ".tiff")):
        return load_geotiff(path)
    return load_ascii_grid(path)


# ----------------------------------------------------------------- commands

def cmd_import(args) -> int:
    total = SourceStats()
    with open_storage(args.db) as handle:
        merged = {"dynamic_rows": 0, "static_rows": 0, "duplicates_skipped": 0, "unsupported_skipped": 0}
        for path in args.files:
            fmt = args.format if args.format != "auto" else guess_format(path)
            stats = SourceStats()
            default_ts = _parse_time_arg(args.default_ts) if args.default_ts else None
            msgs = decode_source(path, fmt, stats=stats, default_ts=default_ts)
            report = handle.insert_messages(msgs)
            total.lines_seen += stats.lines_seen
            total.lines_malformed += stats.lines_malformed
            total.messages_decoded += stats.messages_decoded
            merged["dynamic_rows"] += report.dynamic_rows
            merged["static_rows"] += report.static_rows
            merged["duplicates_skipped"] += report.duplicates_skipped
            merged["unsupported_skipped"] += report.unsupported_skipped
            print(
                f"{path}: {stats.messages_decoded} messages "
                f"({report.dynamic_rows} dynamic, {report.static_rows} static, "
                f"{report.duplicates_skipped} duplicate, {stats.lines_malformed} malformed)",
                file=sys.stderr,
            )
        aggregated = []
        if not args.no_aggregate:
            for month in handle.list_partitions():
                handle.aggregate_statics(month)
                aggregated.append(month)
    summary = dict(
        merged,
        lines_seen=total.lines_seen,
        lines_malformed=total.lines_malformed,
        messages_decoded=total.messages_decoded,
        aggregated_months=aggregated,
    )
    print(json.dumps(summary, sort_keys=True))
    return 0


def _build_spec(args) -> QuerySpec:
    return QuerySpec(
        start=_parse_time_arg(args.start),
        end=_parse_time_arg(args.end),
        bbox=args.bbox,
        mmsi_filter=_parse_mmsi_list(args.mmsi) if args.mmsi else None,
        validity="valid_only" if args.valid_only else "all",
    )


def _apply_pipeline(tracks: Iterable[Track], args) -> Iterable[Track]:
    if args.split_gap is not None:
        tracks = split_timedelta(tracks, args.split_gap)
    if args.distance_threshold is not None or args.speed_threshold is not None:
        tracks = encode_greatcircledistance(
            tracks,
            distance_threshold=args.distance_threshold if args.distance_threshold is not None else 200_000.0,
            speed_threshold=args.speed_threshold if args.speed_threshold is not None else 50.0,
        )
    if args.interp_step is not None:
        tracks = interp_time_all(tracks, args.interp_step)
    if args.decimate_epsilon is not None:
        tracks = decimate_all(tracks, args.decimate_epsilon)
    return tracks


def _pipeline_requested(args) -> bool:
    return any(
        getattr(args, name) is not None
        for name in ("split_gap", "distance_threshold", "speed_threshold", "interp_step", "decimate_epsilon")
    )


def _tracks_to_rows(tracks: Iterable[Track]) -> Iterator[DynamicRow]:
    for track in tracks:
        for i in range(len(track)):
            sog = float(track.sog[i])
            cog = float(track.cog[i])
            yield DynamicRow(
                mmsi=int(track.mmsi),
                time=int(track.t[i]),
                lon=float(track.x[i]),
                lat=float(track.y[i]),
                sog=None if math.isnan(sog) else sog,
                cog=None if math.isnan(cog) else cog,
                heading=None,
                nav_status=None,
                source=None,
            )


def cmd_query(args) -> int:
    spec = _build_spec(args)
    with ExitStack() as stack:
        out = _open_output(args.output, stack)
        handle = stack.enter_context(open_storage(args.db, read_only=True))
        if args.format == "csv" and not _pipeline_requested(args):
            n = rows_to_csv(run_query(handle, spec), out)
            print(f"{n} rows", file=sys.stderr)
            return 0
        tracks = _apply_pipeline(track_gen(run_query(handle, spec)), args)
        if args.format == "csv":
            n = rows_to_csv(_tracks_to_rows(tracks), out)
            print(f"{n} rows", file=sys.stderr)
        else:
            doc = tracks_to_feature_collection(with_metadata(tracks, handle))
            dump_geojson(doc, out)
            print(f"{len(doc['features'])} tracks", file=sys.stderr)
    return 0


def cmd_graph(args) -> int:
    zones = load_zones(args.zones)
    spec = _build_spec(args)
    with ExitStack() as stack:
        out = _open_output(args.output, stack)
        handle = stack.enter_context(open_storage(args.db, read_only=True))
        graph = build_graph(track_gen(run_query(handle, spec)), zones)
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["from", "to", "transit_count", "vessel_count"])
        for (src, dst), stat in sorted(graph.edges.items()):
            writer.writerow([src, dst, stat.transit_count, len(stat.vessels)])
        print(f"{graph.total_transits()} transits", file=sys.stderr)
    return 0


def cmd_sample(args) -> int:
    grid = _load_raster(args.raster)
    with ExitStack() as stack:
        out = _open_output(args.output, stack)
        writer = csv.writer(out, lineterminator="\n")
        if args.csv:
            with open(args.csv, newline="") as fh:
                reader = csv.DictReader(fh)
                if not reader.fieldnames or "lon" not in reader.fieldnames or "lat" not in reader.fieldnames:
                    print("input CSV needs lon and lat columns", file=sys.stderr)
                    return 1
                writer.writerow(list(reader.fieldnames) + [args.column])
                for row in reader:
                    v = float(grid.sample(float(row["lon"]), float(row["lat"]), method=args.method))
                    cell = "" if math.isnan(v) else repr(v)
                    writer.writerow([row[f] for f in reader.fieldnames] + [cell])
        else:
            spec = _build_spec(args)
            handle = stack.enter_context(open_storage(args.db, read_only=True))
            writer.writerow(["mmsi", "time", "lon", "lat", args.column])
            for track in track_gen(run_query(handle, spec)):
                values = grid.sample(track.x, track.y, method=args.method)
                for i, v in enumerate(values):
                    cell = "" if math.isnan(v) else repr(float(v))
                    writer.writerow(
                        [
                            track.mmsi,
                            epoch_to_text(int(track.t[i])),
                            repr(float(track.x[i])),
                            repr(float(track.y[i])),
                            cell,
                        ]
                    )
    return 0


def _run_stream(lines, args) -> int:
    stats = stream_mod.StreamStats()
    stop = threading.Event()

    def report_loop():
        while not stop.wait(args.stats_interval):
            print(json.dumps(stats.snapshot(), sort_keys=True), file=sys.stderr)

    reporter = threading.Thread(target=report_loop, daemon=True)
    reporter.start()
    try:
        with open_storage(args.db) as handle:
            stream_mod.run_pipeline(
                lines,
                handle,
                queue_size=args.queue_size,
                batch_size=args.batch_size,
                stats=stats,
            )
    except KeyboardInterrupt:
        pass
    finally:
        stop.set()
    print(json.dumps(stats.snapshot(), sort_keys=True))
    return 0


def cmd_replay(args) -> int:
    speed = float("inf") if args.speed in ("inf", "max") else float(args.speed)
    return _run_stream(stream_mod.replay_lines(args.source, speed), args)


def cmd_listen(args) -> int:
    stop = threading.Event()
    lines = stream_mod.connect_lines(args.host, args.port, stop=stop)
    try:
        return _run_stream(lines, args)
    finally:
        stop.set()


def cmd_serve(args) -> int:
    server = serve(
        args.db,
        host=args.host,
        port=args.port,
        zones_path=args.zones,
        static_dir=args.static_dir,
        quiet=not args.verbose,
    )
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# -------------------------------------------------------------- arg parsing

def _add_window_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--start", required=True, help="window start, ISO-8601 or epoch seconds")
    p.add_argument("--end", required=True, help="window end, ISO-8601 or epoch seconds")
    p.add_argument("--bbox", type=_parse_bbox, default=None, help="xmin,ymin,xmax,ymax (xmin>xmax wraps the antimeridian)")
    p.add_argument("--mmsi", action="append", default=None, help="restrict to these MMSIs (repeatable, comma-separable)")
    p.add_argument("--valid-only", action="store_true", help="drop rows outside the national MMSI block")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aistk", description="AIS track toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="decode files into a store")
    p.add_argument("--db", required=True)
    p.add_argument("files", nargs="+")
    p.add_argument("--format", choices=["auto", "nm4", "csv", "zip"], default="auto")
    p.add_argument("--default-ts", default=None, help="timestamp for NM4 lines without tag blocks")
    p.add_argument("--no-aggregate", action="store_true", help="skip rebuilding static aggregates")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("query", help="export tracks as CSV or GeoJSON")
    p.add_argument("--db", required=True)
    _add_window_args(p)
    p.add_argument("--split-gap", type=float, default=None, help="cut tracks at time gaps over this many seconds")
    p.add_argument("--distance-threshold", type=float, default=None, help="cleaning distance gate, meters")
    p.add_argument("--speed-threshold", type=float, default=None, help="cleaning speed gate, knots")
    p.add_argument("--interp-step", type=float, default=None, help="resample on a uniform grid, seconds")
    p.add_argument("--decimate-epsilon", type=float, default=None, help="simplify with this tolerance, meters")
    p.add_argument("--format", choices=["csv", "geojson"], default="csv")
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("graph", help="zone-transition edge list")
    p.add_argument("--db", required=True)
    p.add_argument("--zones", required=True, help="GeoJSON FeatureCollection of named polygons")
    _add_window_args(p)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("sample", help="annotate points with raster values")
    p.add_argument("--raster", required=True, help=".tif/.tiff or ESRI ASCII grid")
    p.add_argument("--method", choices=["nearest", "bilinear"], default="nearest")
    p.add_argument("--column", default="value", help="name of the appended column")
    p.add_argument("--csv", default=None, help="annotate a CSV with lon/lat columns")
    p.add_argument("--db", default=None, help="or annotate query results from a store")
    p.add_argument("--start", default=None)
    p.add_argument("--end", default=None)
    p.add_argument("--bbox", type=_parse_bbox, default=None)
    p.add_argument("--mmsi", action="append", default=None)
    p.add_argument("--valid-only", action="store_true")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("replay", help="replay a capture file into a store")
    p.add_argument("--db", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--speed", default="1", help="pace multiplier, or 'inf' to drain")
    p.add_argument("--queue-size", type=int, default=stream_mod.DEFAULT_QUEUE_SIZE)
    p.add_argument("--batch-size", type=int, default=stream_mod.DEFAULT_BATCH_SIZE)
    p.add_argument("--stats-interval", type=float, default=10.0)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("listen", help="ingest a live TCP feed")
    p.add_argument("--db", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--queue-size", type=int, default=stream_mod.DEFAULT_QUEUE_SIZE)
    p.add_argument("--batch-size", type=int, default=stream_mod.DEFAULT_BATCH_SIZE)
    p.add_argument("--stats-interval", type=float, default=10.0)
    p.set_defaults(func=cmd_listen)

    p = sub.add_parser("serve", help="read-only HTTP track API")
    p.add_argument("--db", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8737)
    p.add_argument("--zones", default=None)
    p.add_argument("--static-dir", default=None, help="also serve viewer assets from this directory")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sample" and not args.csv:
        for required in ("db", "start", "end"):
            if getattr(args, required) in (None, ""):
                print(f"sample needs --csv or (--db --start --end); missing --{required}", file=sys.stderr)
                return 2
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (OSError, ValueError, StorageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
