"""Embedded relational store with monthly partitioned AIS tables.

Each calendar month gets three tables: ais_<YYYYMM>_dynamic for position
rows, ais_<YYYYMM>_static for vessel/voyage reports, and
static_<YYYYMM>_aggregate holding one consolidated row per MMSI.  The
StorageHandle seam hides the backend so a server-backed store can slot in
later without touching callers; the single implemented backend is SQLite.

Concurrency: one writer at a time per store, any number of readers, one
handle per thread.
"""

import re
import sqlite3
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .decoder.messages import (
    DecodedMessage,
    PositionReportA,
    PositionReportB,
    StaticDataReportA,
    StaticDataReportB,
    StaticVoyage,
)
from .shiptypes import SHIP_TYPES

SCHEMA_VERSION = 1

_MONTH_RE = re.compile(r"^\d{6}$")

STATIC_FIELDS = (
    "imo",
    "callsign",
    "ship_name",
    "ship_type",
    "dim_bow",
    "dim_stern",
    "dim_port",
    "dim_starboard",
    "draught",
    "destination",
    "eta_month",
    "eta_day",
    "eta_hour",
    "eta_minute",
)

AGGREGATE_FIELDS = (
    "ship_name",
    "ship_type",
    "imo",
    "callsign",
    "dim_bow",
    "dim_stern",
    "dim_port",
    "dim_starboard",
    "draught",
)


class StorageError(RuntimeError):
    pass


@dataclass
class DynamicRow:
    mmsi: int
    time: int
    lon: float
    lat: float
    sog: float | None
    cog: float | None
    heading: int | None
    nav_status: int | None
    source: str | None


@dataclass
class IngestReport:
    dynamic_rows: int = 0
    static_rows: int = 0
    duplicates_skipped: int = 0
    unsupported_skipped: int = 0

    def merged(self, other: "IngestReport") -> "IngestReport":
        return IngestReport(
            self.dynamic_rows + other.dynamic_rows,
            self.static_rows + other.static_rows,
            self.duplicates_skipped + other.duplicates_skipped,
            self.unsupported_skipped + other.unsupported_skipped,
        )


def month_of(ts: int) -> str:
    dt = datetime.fromtimestamp(ts, tz=timezone.utc)
    return f"{dt.year:04d}{dt.month:02d}"


def _dyn_table(month: str) -> str:
    return f"ais_{month}_dynamic"


def _static_table(month: str) -> str:
    return f"ais_{month}_static"


def _agg_table(month: str) -> str:
    return f"static_{month}_aggregate"


class StorageHandle:
    """Connection to one on-disk store.  Open one handle per thread."""

    def __init__(self, location: str | Path, *, read_only: bool = False):
        self.location = str(location)
        self.read_only = read_only
        if read_only:
            uri = f"file:{self.location}?mode=ro"
            try:
                self.conn = sqlite3.connect(uri, uri=True)
            except sqlite3.OperationalError as e:
                raise StorageError(f"cannot open store at {self.location}: {e}") from None
        else:
            try:
                self.conn = sqlite3.connect(self.location)
            except sqlite3.OperationalError as e:
                raise StorageError(f"cannot open store at {self.location}: {e}") from None
            self._ensure_meta()
        self._check_version()

    def close(self):
        self.conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- schema ----------------------------------------------------------

    def _ensure_meta(self):
        cur = self.conn.cursor()
        cur.execute("CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT)")
        cur.execute(
            "INSERT OR IGNORE INTO meta (key, value) VALUES ('schema_version', ?)",
            (str(SCHEMA_VERSION),),
        )
        cur.execute(
            "CREATE TABLE IF NOT EXISTS coarsetype_ref (coarse_type INTEGER PRIMARY KEY, coarse_type_txt TEXT)"
        )
        cur.executemany(
            "INSERT OR IGNORE INTO coarsetype_ref (coarse_type, coarse_type_txt) VALUES (?, ?)",
            sorted(SHIP_TYPES.items()),
        )
        self.conn.commit()

    def _check_version(self):
        try:
            row = self.conn.execute(
                "SELECT value FROM meta WHERE key = 'schema_version'"
            ).fetchone()
        except sqlite3.OperationalError:
            return  # empty or pre-schema store
        if row and int(row[0]) > SCHEMA_VERSION:
            raise StorageError(
                f"store schema version {row[0]} is newer than supported {SCHEMA_VERSION}"
            )

    def _table_exists(self, name: str) -> bool:
        row = self.conn.execute(
            "SELECT 1 FROM sqlite_master WHERE type = 'table' AND name = ?", (name,)
        ).fetchone()
        return row is not None

    def _ensure_month(self, month: str):
        cur = self.conn.cursor()
        dyn = _dyn_table(month)
        cur.execute(
            f"""CREATE TABLE IF NOT EXISTS {dyn} (
                mmsi INTEGER NOT NULL,
                time INTEGER NOT NULL,
                lon REAL NOT NULL,
                lat REAL NOT NULL,
                sog REAL,
                cog REAL,
                heading INTEGER,
                nav_status INTEGER,
                source TEXT,
                PRIMARY KEY (mmsi, time, lon, lat)
            ) WITHOUT ROWID"""
        )
        cur.execute(f"CREATE INDEX IF NOT EXISTS idx_{dyn}_tpos ON {dyn} (time, lon, lat)")
        sta = _static_table(month)
        columns = ", ".join(f"{c}" for c in STATIC_FIELDS)
        cur.execute(
            f"""CREATE TABLE IF NOT EXISTS {sta} (
                mmsi INTEGER NOT NULL,
                time INTEGER NOT NULL,
                {columns}
            )"""
        )
        cur.execute(f"CREATE INDEX IF NOT EXISTS idx_{sta}_mmsi ON {sta} (mmsi, time)")

    # -- ingest ----------------------------------------------------------

    def insert_messages(self, batch: Iterable[DecodedMessage]) -> IngestReport:
        """Insert decoded messages, partitioning by UTC month.

        Position variants land in the dynamic table, static variants in
        the static table; duplicate dynamic keys are skipped and counted.
        The whole batch commits in one transaction.
        """
        if self.read_only:
            raise StorageError("store opened read-only")
        report = IngestReport()
        dyn_rows: dict[str, list[tuple]] = {}
        sta_rows: dict[str, list[tuple]] = {}
        for msg in batch:
            if isinstance(msg, (PositionReportA, PositionReportB)):
                if msg.lon is None or msg.lat is None:
                    report.unsupported_skipped += 1
                    continue
                nav = msg.nav_status if isinstance(msg, PositionReportA) else None
                hdg = msg.heading
                dyn_rows.setdefault(month_of(msg.ts), []).append(
                    (msg.mmsi, msg.ts, msg.lon, msg.lat, msg.sog, msg.cog, hdg, nav, msg.station)
                )
            elif isinstance(msg, StaticVoyage):
                sta_rows.setdefault(month_of(msg.ts), []).append(
                    (
                        msg.mmsi, msg.ts, msg.imo, msg.callsign, msg.ship_name, msg.ship_type,
                        msg.dim_bow, msg.dim_stern, msg.dim_port, msg.dim_starboard,
                        msg.draught, msg.destination,
                        msg.eta_month, msg.eta_day, msg.eta_hour, msg.eta_minute,
                    )
                )
            elif isinstance(msg, StaticDataReportA):
                sta_rows.setdefault(month_of(msg.ts), []).append(
                    (msg.mmsi, msg.ts, None, None, msg.ship_name, None,
                     None, None, None, None, None, None, None, None, None, None)
                )
            elif isinstance(msg, StaticDataReportB):
                sta_rows.setdefault(month_of(msg.ts), []).append(
                    (msg.mmsi, msg.ts, None, msg.callsign, None, msg.ship_type,
                     msg.dim_bow, msg.dim_stern, msg.dim_port, msg.dim_starboard,
                     None, None, None, None, None, None)
                )
            else:
                report.unsupported_skipped += 1
        cur = self.conn.cursor()
        try:
            for month in sorted(set(dyn_rows) | set(sta_rows)):
                self._ensure_month(month)
            for month, rows in sorted(dyn_rows.items()):
                before = self._count(_dyn_table(month))
                cur.executemany(
                    f"INSERT OR IGNORE INTO {_dyn_table(month)} VALUES (?,?,?,?,?,?,?,?,?)", rows
                )
                inserted = self._count(_dyn_table(month)) - before
                report.dynamic_rows += inserted
                report.duplicates_skipped += len(rows) - inserted
            for month, rows in sorted(sta_rows.items()):
                placeholders = ",".join("?" * (2 + len(STATIC_FIELDS)))
                cur.executemany(
                    f"INSERT INTO {_static_table(month)} VALUES ({placeholders})", rows
                )
                report.static_rows += len(rows)
        except sqlite3.Error:
            self.conn.rollback()
            raise
        self.conn.commit()
        return report

    def _count(self, table: str) -> int:
        return self.conn.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]

    # -- aggregation -----------------------------------------------------

    def aggregate_statics(self, month: str) -> int:
        """Consolidate the month's static reports into one row per MMSI.

        Per field the most frequent non-null value wins; ties go to the
        value seen most recently.  Replaces any existing aggregate.
        """
        if self.read_only:
            raise StorageError("store opened read-only")
        cur = self.conn.cursor()
        agg = _agg_table(month)
        cur.execute(f"DROP TABLE IF EXISTS {agg}")
        columns = ", ".join(AGGREGATE_FIELDS)
        cur.execute(f"CREATE TABLE {agg} (mmsi INTEGER PRIMARY KEY, {columns})")
        if not self._table_exists(_static_table(month)):
            self.conn.commit()
            return 0
        sel = ", ".join(AGGREGATE_FIELDS)
        rows = cur.execute(
            f"SELECT mmsi, time, {sel} FROM {_static_table(month)} ORDER BY mmsi, time"
        ).fetchall()
        by_mmsi: dict[int, list] = {}
        for row in rows:
            by_mmsi.setdefault(row[0], []).append(row)
        out = []
        for mmsi, reports in by_mmsi.items():
            consolidated = [mmsi]
            for fi, _ in enumerate(AGGREGATE_FIELDS):
                votes = Counter()
                last_seen = {}
                for row in reports:
                    value = row[2 + fi]
                    if value is None or value == "":
                        continue
                    votes[value] += 1
                    last_seen[value] = row[1]
                if not votes:
                    consolidated.append(None)
                else:
                    best = max(votes, key=lambda v: (votes[v], last_seen[v], str(v)))
                    consolidated.append(best)
            out.append(tuple(consolidated))
        placeholders = ",".join("?" * (1 + len(AGGREGATE_FIELDS)))
        cur.executemany(f"INSERT INTO {agg} VALUES ({placeholders})", out)
        self.conn.commit()
        return len(out)

    # -- reads -----------------------------------------------------------

    def list_partitions(self) -> list[str]:
        """Sorted months (YYYYMM) having a dynamic or static table."""
        months = set()
        for (name,) in self.conn.execute("SELECT name FROM sqlite_master WHERE type = 'table'"):
            m = re.match(r"^ais_(\d{6})_(?:dynamic|static)$", name)
            if m:
                months.add(m.group(1))
        return sorted(months)

    def scan(
        self,
        months: list[str],
        *,
        time_range: tuple[int, int] | None = None,
        bbox: tuple[float, float, float, float] | None = None,
        mmsi_set: set[int] | None = None,
        mmsi_range: tuple[int, int] | None = None,
        invert_mmsi_range: bool = False,
    ) -> Iterator[DynamicRow]:
        """Stream dynamic rows from the given months, ordered by (mmsi, time).

        Predicates push down into SQL; every emitted row satisfies all of
        them.  An antimeridian-crossing bbox (xmin > xmax) matches
        longitudes on either side of the wrap.
        """
        selects = []
        params: list = []
        for month in months:
            if not _MONTH_RE.match(month):
                raise StorageError(f"bad month {month!r}")
            if not self._table_exists(_dyn_table(month)):
                continue
            where = ["1=1"]
            month_params: list = []
            if time_range is not None:
                where.append("time >= ? AND time <= ?")
                month_params.extend(time_range)
            if bbox is not None:
                xmin, ymin, xmax, ymax = bbox
                where.append("lat >= ? AND lat <= ?")
                month_params.extend([ymin, ymax])
                if xmin <= xmax:
                    where.append("lon >= ? AND lon <= ?")
                    month_params.extend([xmin, xmax])
                else:  # wraps the antimeridian
                    where.append("(lon >= ? OR lon <= ?)")
                    month_params.extend([xmin, xmax])
            if mmsi_set is not None:
                placeholders = ",".join("?" * len(mmsi_set))
                where.append(f"mmsi IN ({placeholders})")
                month_params.extend(sorted(mmsi_set))
            if mmsi_range is not None:
                clause = "mmsi >= ? AND mmsi <= ?"
                if invert_mmsi_range:
                    clause = f"NOT ({clause})"
                where.append(clause)
                month_params.extend(mmsi_range)
            selects.append(
                f"SELECT mmsi, time, lon, lat, sog, cog, heading, nav_status, source "
                f"FROM {_dyn_table(month)} WHERE {' AND '.join(where)}"
            )
            params.extend(month_params)
        if not selects:
            return
        sql = " UNION ALL ".join(selects) + " ORDER BY mmsi, time, lon, lat"
        for row in self.conn.execute(sql, params):
            yield DynamicRow(*row)

    def partition_counts(self) -> list[dict]:
        """Row counts per month, for the stats endpoint and CLI summaries."""
        out = []
        for month in self.list_partitions():
            dyn = self._count(_dyn_table(month)) if self._table_exists(_dyn_table(month)) else 0
            sta = self._count(_static_table(month)) if self._table_exists(_static_table(month)) else 0
            agg = self._count(_agg_table(month)) if self._table_exists(_agg_table(month)) else 0
            out.append({"month": month, "dynamic_rows": dyn, "static_rows": sta, "aggregate_rows": agg})
        return out

    def vessel_info(self, mmsi: int) -> dict | None:
        """Consolidated static metadata for one vessel, newest aggregate first."""
        months = [
            m for m in self.list_partitions() if self._table_exists(_agg_table(m))
        ]
        for month in reversed(months):
            row = self.conn.execute(
                f"SELECT mmsi, {', '.join(AGGREGATE_FIELDS)} FROM {_agg_table(month)} WHERE mmsi = ?",
                (mmsi,),
            ).fetchone()
            if row:
                info = dict(zip(("mmsi",) + AGGREGATE_FIELDS, row))
                info["month"] = month
                return info
        return None

    def type_name(self, code: int | None) -> str:
        if code is None:
            return "Unknown"
        row = self.conn.execute(
            "SELECT coarse_type_txt FROM coarsetype_ref WHERE coarse_type = ?", (code,)
        ).fetchone()
        if row:
            return row[0]
        row = self.conn.execute(
            "SELECT coarse_type_txt FROM coarsetype_ref WHERE coarse_type = ?",
            ((code // 10) * 10,),
        ).fetchone()
        return row[0] if row else "Other type"


def open_storage(location: str | Path, *, read_only: bool = False) -> StorageHandle:
    """Open (and if needed initialize) a store at the given path."""
    return StorageHandle(location, read_only=read_only)
