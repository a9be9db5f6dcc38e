"""Spatiotemporal queries over the store and per-vessel track grouping."""

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Iterator

import numpy as np

from .storage import DynamicRow, StorageHandle, month_of
from .tracks import Track

# ITU national-vessel allocation block: MID-prefixed 9-digit identities
VALID_MMSI_MIN = 201_000_000
VALID_MMSI_MAX = 775_999_999


def valid_mmsi(mmsi: int) -> bool:
    """True iff the MMSI falls in the national vessel allocation block."""
    return VALID_MMSI_MIN <= mmsi <= VALID_MMSI_MAX


def epoch_to_text(t: int) -> str:
    """Unix seconds to ISO-8601 UTC text, second resolution."""
    return datetime.fromtimestamp(int(t), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def text_to_epoch(text: str) -> int:
    """Inverse of epoch_to_text; also accepts a space separator or no Z."""
    text = text.strip().replace(" ", "T")
    if text.endswith("Z"):
        text = text[:-1]
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


@dataclass
class QuerySpec:
    """Composable filter: time window, optional bbox, MMSI constraints.

    A bbox with xmin > xmax is legal and wraps the antimeridian.  All
    bbox edges are closed.
    """

    start: int
    end: int
    bbox: tuple[float, float, float, float] | None = None
    mmsi_filter: set[int] | None = None
    validity: str = "all"  # valid_only | invalid_only | all

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError("start must precede end")
        if self.bbox is not None:
            xmin, ymin, xmax, ymax = self.bbox
            if ymin >= ymax:
                raise ValueError("bbox ymin must be below ymax")
            for x in (xmin, xmax):
                if not -180.0 <= x <= 180.0:
                    raise ValueError("bbox longitudes must be within [-180, 180]")
            for y in (ymin, ymax):
                if not -90.0 <= y <= 90.0:
                    raise ValueError("bbox latitudes must be within [-90, 90]")
        if self.validity not in ("valid_only", "invalid_only", "all"):
            raise ValueError(f"bad validity {self.validity!r}")

    def matches(self, row: DynamicRow) -> bool:
        """Row-level predicate; the storage push-down must agree with this."""
        if not self.start <= row.time <= self.end:
            return False
        if self.bbox is not None:
            xmin, ymin, xmax, ymax = self.bbox
            if not ymin <= row.lat <= ymax:
                return False
            if xmin <= xmax:
                if not xmin <= row.lon <= xmax:
                    return False
            elif not (row.lon >= xmin or row.lon <= xmax):
                return False
        if self.mmsi_filter is not None and row.mmsi not in self.mmsi_filter:
            return False
        if self.validity == "valid_only" and not valid_mmsi(row.mmsi):
            return False
        if self.validity == "invalid_only" and valid_mmsi(row.mmsi):
            return False
        return True


def months_in_range(start: int, end: int) -> list[str]:
    months = []
    dt = datetime.fromtimestamp(start, tz=timezone.utc).replace(
        day=1, hour=0, minute=0, second=0, microsecond=0
    )
    while int(dt.timestamp()) <= end:
        months.append(f"{dt.year:04d}{dt.month:02d}")
        dt = dt.replace(year=dt.year + 1, month=1) if dt.month == 12 else dt.replace(month=dt.month + 1)
    return months


def run_query(handle: StorageHandle, spec: QuerySpec) -> Iterator[DynamicRow]:
    """Stream exactly the rows matching the spec, ordered by (mmsi, time).

    Predicates push down into the storage scan; a residual in-memory
    filter re-applies them so new callback predicates never require
    schema changes.
    """
    months = [m for m in months_in_range(spec.start, spec.end) if m in set(handle.list_partitions())]
    mmsi_range = None
    invert = False
    if spec.validity == "valid_only":
        mmsi_range = (VALID_MMSI_MIN, VALID_MMSI_MAX)
    elif spec.validity == "invalid_only":
        mmsi_range = (VALID_MMSI_MIN, VALID_MMSI_MAX)
        invert = True
    rows = handle.scan(
        months,
        time_range=(spec.start, spec.end),
        bbox=spec.bbox,
        mmsi_set=spec.mmsi_filter,
        mmsi_range=mmsi_range,
        invert_mmsi_range=invert,
    )
    for row in rows:
        if spec.matches(row):
            yield row


def track_gen(rows: Iterable[DynamicRow]) -> Iterator[Track]:
    """Group (mmsi, time)-ordered rows into per-vessel tracks.

    One track per maximal run of equal MMSI; duplicate timestamps within
    a run collapse to their first occurrence.  Out-of-order input is a
    contract violation.
    """
    current: list[DynamicRow] = []

    def flush() -> Track:
        return Track(
            mmsi=current[0].mmsi,
            x=np.array([r.lon for r in current]),
            y=np.array([r.lat for r in current]),
            t=np.array([r.time for r in current], dtype=float),
            sog=np.array([np.nan if r.sog is None else r.sog for r in current]),
            cog=np.array([np.nan if r.cog is None else r.cog for r in current]),
        )

    for row in rows:
        if current and row.mmsi == current[-1].mmsi:
            if row.time < current[-1].time:
                raise ValueError("rows not ordered by (mmsi, time)")
            if row.time == current[-1].time:
                continue  # duplicate timestamp: keep the first occurrence
            current.append(row)
        else:
            if current:
                if row.mmsi < current[-1].mmsi:
                    raise ValueError("rows not ordered by (mmsi, time)")
                yield flush()
            current = [row]
    if current:
        yield flush()


def with_metadata(tracks: Iterable[Track], handle: StorageHandle) -> Iterator[Track]:
    """Attach aggregate-table vessel metadata to each track."""
    cache: dict[int, dict | None] = {}
    for track in tracks:
        if track.mmsi not in cache:
            cache[track.mmsi] = handle.vessel_info(track.mmsi)
        info = cache[track.mmsi]
        if info:
            track.meta = dict(info)
        yield track


__all__ = [
    "QuerySpec",
    "epoch_to_text",
    "months_in_range",
    "run_query",
    "text_to_epoch",
    "track_gen",
    "valid_mmsi",
    "with_metadata",
    "month_of",
]
