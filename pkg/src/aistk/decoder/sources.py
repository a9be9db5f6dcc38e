"""File ingestion: NM4 archives, dynamic-row CSVs, and zips of either."""

import csv
import io
import zipfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .messages import DecodedMessage, PositionReportA
from .nmea import StreamDecoder

CSV_COLUMNS = ["mmsi", "time", "lon", "lat", "sog", "cog", "heading", "nav_status", "source"]


@dataclass
class SourceStats:
    lines_seen: int = 0
    lines_malformed: int = 0
    messages_decoded: int = 0


class SourceError(ValueError):
    """Unreadable file or unknown format tag."""


def _parse_time(text: str) -> int:
    from ..query import text_to_epoch

    text = text.strip()
    if text.lstrip("-").isdigit():
        return int(text)
    return text_to_epoch(text)


def _iter_nm4(lines, stats: SourceStats, default_ts: int | None) -> Iterator[DecodedMessage]:
    dec = StreamDecoder()
    for line in lines:
        msg = dec.feed_line(line, default_ts=default_ts)
        if msg is not None:
            yield msg
    stats.lines_seen += dec.stats.lines_seen
    stats.lines_malformed += dec.stats.lines_malformed
    stats.messages_decoded += dec.stats.messages_decoded


def _iter_csv(fh, stats: SourceStats) -> Iterator[DecodedMessage]:
    reader = csv.DictReader(fh)
    for row in reader:
        stats.lines_seen += 1
        try:
            msg = PositionReportA(
                message_type=1,
                mmsi=int(row["mmsi"]),
                lon=float(row["lon"]),
                lat=float(row["lat"]),
                sog=float(row["sog"]) if row.get("sog") else None,
                cog=float(row["cog"]) if row.get("cog") else None,
                heading=int(float(row["heading"])) if row.get("heading") else None,
                nav_status=int(row["nav_status"]) if row.get("nav_status") else 15,
                ts=_parse_time(row["time"]),
                station=row.get("source") or None,
            )
        except (KeyError, ValueError, TypeError):
            stats.lines_malformed += 1
            continue
        stats.messages_decoded += 1
        yield msg


def decode_source(
    path: str | Path,
    fmt: str = "nm4",
    *,
    stats: SourceStats | None = None,
    default_ts: int | None = None,
) -> Iterator[DecodedMessage]:
    """Lazily decode a file into messages; malformed lines are skipped and counted.

    fmt is one of "nm4", "csv", "zip".  Zip members are decoded by their
    own extension (.csv as CSV, everything else as NM4 text).
    """
    path = Path(path)
    if stats is None:
        stats = SourceStats()
    if not path.exists():
        raise SourceError(f"no such file: {path}")
    if fmt == "nm4":
        with open(path, errors="replace") as fh:
            yield from _iter_nm4(fh, stats, default_ts)
    elif fmt == "csv":
        with open(path, newline="") as fh:
            yield from _iter_csv(fh, stats)
    elif fmt == "zip":
        with zipfile.ZipFile(path) as zf:
            for name in sorted(zf.namelist()):
                if name.endswith("/"):
                    continue
                with zf.open(name) as raw:
                    text = io.TextIOWrapper(raw, errors="replace", newline="")
                    if name.lower().endswith(".csv"):
                        yield from _iter_csv(text, stats)
                    else:
                        yield from _iter_nm4(text, stats, default_ts)
    else:
        raise SourceError(f"unknown format tag: {fmt!r}")


def guess_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".zip":
        return "zip"
    if suffix == ".csv":
        return "csv"
    return "nm4"
