"""Shared fixtures: deterministic message generators and store builders.

Generators emit only quantization-exact field values (raw integer grids
for lon/lat/sog/cog) so encode-decode round trips can assert equality
instead of tolerances.
"""

import random
from pathlib import Path

import numpy as np
import pytest

from aistk.decoder import (
    PositionReportA,
    PositionReportB,
    StaticDataReportA,
    StaticDataReportB,
    StaticVoyage,
)
from aistk.storage import open_storage
from aistk.tracks import Track

REPO_ROOT = Path(__file__).resolve().parent.parent

# printable AIS six-bit text, avoiding '@' (padding) and trailing blanks
TEXT_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .-"


def rand_text(rng: random.Random, maxlen: int) -> str:
    n = rng.randint(0, maxlen)
    s = "".join(rng.choice(TEXT_ALPHABET) for _ in range(n)).strip()
    return s


def rand_lon(rng: random.Random) -> float:
    return rng.randint(-107_999_999, 108_000_000) / 600000.0


def rand_lat(rng: random.Random) -> float:
    return rng.randint(-54_000_000, 54_000_000) / 600000.0


def rand_sog(rng: random.Random) -> float | None:
    return None if rng.random() < 0.1 else rng.randint(0, 1022) / 10.0


def rand_cog(rng: random.Random) -> float | None:
    return None if rng.random() < 0.1 else rng.randint(0, 3599) / 10.0


def rand_hdg(rng: random.Random) -> int | None:
    return None if rng.random() < 0.1 else rng.randint(0, 359)


def random_position_a(rng: random.Random, **over) -> PositionReportA:
    fields = dict(
        message_type=rng.choice((1, 2, 3)),
        mmsi=rng.randint(1, 999_999_999),
        lon=rand_lon(rng),
        lat=rand_lat(rng),
        sog=rand_sog(rng),
        cog=rand_cog(rng),
        heading=rand_hdg(rng),
        nav_status=rng.randint(0, 15),
        ts=rng.randint(1_500_000_000, 1_800_000_000),
    )
    fields.update(over)
    return PositionReportA(**fields)


def random_position_b(rng: random.Random, **over) -> PositionReportB:
    fields = dict(
        message_type=rng.choice((18, 19)),
        mmsi=rng.randint(1, 999_999_999),
        lon=rand_lon(rng),
        lat=rand_lat(rng),
        sog=rand_sog(rng),
        cog=rand_cog(rng),
        heading=rand_hdg(rng),
        ts=rng.randint(1_500_000_000, 1_800_000_000),
    )
    fields.update(over)
    return PositionReportB(**fields)


def random_static_voyage(rng: random.Random, **over) -> StaticVoyage:
    fields = dict(
        mmsi=rng.randint(1, 999_999_999),
        imo=rng.randint(0, 2**30 - 1),
        callsign=rand_text(rng, 7),
        ship_name=rand_text(rng, 20),
        ship_type=rng.randint(0, 255),
        dim_bow=rng.randint(0, 511),
        dim_stern=rng.randint(0, 511),
        dim_port=rng.randint(0, 63),
        dim_starboard=rng.randint(0, 63),
        draught=rng.randint(0, 255) / 10.0,
        destination=rand_text(rng, 20),
        eta_month=rng.randint(0, 12),
        eta_day=rng.randint(0, 31),
        eta_hour=rng.randint(0, 24),
        eta_minute=rng.randint(0, 60),
        ts=rng.randint(1_500_000_000, 1_800_000_000),
    )
    fields.update(over)
    return StaticVoyage(**fields)


def random_static_a(rng: random.Random, **over) -> StaticDataReportA:
    fields = dict(
        mmsi=rng.randint(1, 999_999_999),
        ship_name=rand_text(rng, 20),
        ts=rng.randint(1_500_000_000, 1_800_000_000),
    )
    fields.update(over)
    return StaticDataReportA(**fields)


def random_static_b(rng: random.Random, **over) -> StaticDataReportB:
    fields = dict(
        mmsi=rng.randint(1, 999_999_999),
        ship_type=rng.randint(0, 255),
        callsign=rand_text(rng, 7),
        dim_bow=rng.randint(0, 511),
        dim_stern=rng.randint(0, 511),
        dim_port=rng.randint(0, 63),
        dim_starboard=rng.randint(0, 63),
        ts=rng.randint(1_500_000_000, 1_800_000_000),
    )
    fields.update(over)
    return StaticDataReportB(**fields)


RANDOM_MESSAGE_MAKERS = (
    random_position_a,
    random_position_b,
    random_static_voyage,
    random_static_a,
    random_static_b,
)


def make_track(xs, ys, ts, mmsi: int = 316000000, sog=None, cog=None) -> Track:
    n = len(ts)
    return Track(
        mmsi=mmsi,
        x=np.asarray(xs, dtype=float),
        y=np.asarray(ys, dtype=float),
        t=np.asarray(ts, dtype=float),
        sog=np.full(n, np.nan) if sog is None else np.asarray(sog, dtype=float),
        cog=np.full(n, np.nan) if cog is None else np.asarray(cog, dtype=float),
    )


@pytest.fixture
def rng():
    return random.Random(0xA15)


@pytest.fixture
def store(tmp_path):
    with open_storage(tmp_path / "store.db") as handle:
        yield handle


@pytest.fixture
def sample_archive() -> Path:
    path = REPO_ROOT / "data" / "sample.nm4"
    if not path.exists():
        pytest.skip("bundled sample archive missing; run scripts/make_sample_archive.py")
    return path


@pytest.fixture
def zones_file() -> Path:
    path = REPO_ROOT / "data" / "halifax_zones.geojson"
    if not path.exists():
        pytest.skip("bundled zones fixture missing")
    return path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion after the run."""
    lines = []
    for status, outcomes in (("PASS", "passed"), ("FAIL", "failed"),
                             ("FAIL", "error"), ("SKIP", "skipped")):
        for report in terminalreporter.stats.get(outcomes, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if outcomes in ("passed", "failed") and report.when != "call":
                continue
            name = nodeid.split("::")[-1]
            lines.append((name, status))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(lines):
        terminalreporter.write_line(f"{status} {name}")
