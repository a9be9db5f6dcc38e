"""Generate the bundled sample capture (data/sample.nm4) and zone fixture.

The archive is fully deterministic (fixed seed) so tests that hash its
pipeline output stay reproducible.  It models a day of Halifax harbour
traffic: class A and class B vessels, two-fragment voyage reports,
duplicated lines, a couple of orphaned fragments, and a sprinkling of
malformed lines.  Every decodable message carries coordinates or is a
static report, so ingest accounting closes exactly (stored = decoded -
duplicates).
"""

import argparse
import json
import math
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from aistk.decoder import (  # noqa: E402
    PositionReportA,
    PositionReportB,
    StaticDataReportA,
    StaticDataReportB,
    StaticVoyage,
    encode_nm4_line,
)

T0 = 1_718_064_000  # 2024-06-11T00:00:00Z
SPAN_HOURS = 21
KNOT_DEG_MIN = 1.0 / 60.0 / 60.0  # rough degrees of latitude per knot-minute

FLEET = [
    # (mmsi, class, ship_type, name, callsign, start lon, lat, base knots)
    (316001201, "A", 70, "ACADIA TRADER", "CFA2201", -63.645, 44.640, 9.0),
    (316001202, "A", 71, "SCOTIA CARRIER", "CFA2202", -63.560, 44.610, 10.5),
    (316001203, "A", 80, "FUNDY SPIRIT", "CFB2203", -63.520, 44.590, 8.0),
    (316001204, "A", 81, "BLUENOSE ENERGY", "CFB2204", -63.660, 44.700, 7.0),
    (316001205, "A", 30, "EASTERN DAWN", "CFC2205", -63.430, 44.575, 6.5),
    (316001206, "A", 60, "HARBOUR QUEEN", "CFD2206", -63.590, 44.650, 11.0),
    (316001207, "A", 52, "POINT VIM", "CFE2207", -63.570, 44.665, 5.0),
    (316001208, "B", 30, "LITTLE GULL", "VC9208", -63.480, 44.580, 5.5),
    (999000210, "A", None, None, None, -63.400, 44.600, 12.0),  # outside the valid block
]

NOISY_VESSELS = {316001202, 316001205, 999000210}
DESTINATIONS = ["HALIFAX", "SAINT JOHN", "SYDNEY NS", "BOSTON", "SEA"]

ZONES = {
    "type": "FeatureCollection",
    "features": [
        {
            "type": "Feature",
            "properties": {"name": "bedford_basin"},
            "geometry": {
                "type": "Polygon",
                "coordinates": [[
                    [-63.70, 44.68], [-63.60, 44.68], [-63.60, 44.75],
                    [-63.70, 44.75], [-63.70, 44.68],
                ]],
            },
        },
        {
            "type": "Feature",
            "properties": {"name": "inner_harbour"},
            "geometry": {
                "type": "Polygon",
                "coordinates": [[
                    [-63.62, 44.62], [-63.54, 44.62], [-63.54, 44.68],
                    [-63.62, 44.68], [-63.62, 44.62],
                ]],
            },
        },
        {
            "type": "Feature",
            "properties": {"name": "approaches"},
            "geometry": {
                "type": "Polygon",
                "coordinates": [[
                    [-63.58, 44.55], [-63.30, 44.55], [-63.30, 44.62],
                    [-63.58, 44.62], [-63.58, 44.55],
                ]],
            },
        },
    ],
}


def quant(v, scale):
    return round(v * scale) / scale


def clamp(v, lo, hi):
    return max(lo, min(hi, v))


def vessel_events(rng, mmsi, klass, ship_type, name, callsign, lon, lat, knots):
    """(ts, message) tuples for one vessel across the whole span."""
    events = []
    heading = rng.uniform(0.0, 360.0)
    ts = T0 + rng.randint(0, 480)
    end = T0 + SPAN_HOURS * 3600
    last_static = T0 - 10_000
    seq = rng.randint(0, 9)
    noise_times = set()
    if mmsi in NOISY_VESSELS:
        noise_times = {T0 + rng.randint(3600, SPAN_HOURS * 3600 - 3600) for _ in range(4)}

    while ts < end:
        step = rng.randint(60, 240)
        heading = (heading + rng.uniform(-25.0, 25.0)) % 360.0
        sog = clamp(knots + rng.uniform(-1.5, 1.5), 0.2, 30.0)
        dist_deg = sog * (step / 60.0) * KNOT_DEG_MIN
        lat += dist_deg * math.cos(math.radians(heading))
        lon += dist_deg * math.sin(math.radians(heading)) / math.cos(math.radians(lat))
        # keep the walk inside the harbour box by bouncing the heading
        if not (-63.75 < lon < -63.25):
            heading = (360.0 - heading) % 360.0
            lon = clamp(lon, -63.75, -63.25)
        if not (44.50 < lat < 44.78):
            heading = (180.0 - heading) % 360.0
            lat = clamp(lat, 44.50, 44.78)

        fields = dict(
            mmsi=mmsi,
            lon=quant(lon, 600_000),
            lat=quant(lat, 600_000),
            sog=quant(sog, 10),
            cog=quant(heading, 10) % 360.0,
            heading=int(heading) % 360,
            ts=ts,
            station="XHFX1",
        )
        if klass == "A":
            events.append((ts, PositionReportA(message_type=rng.choice((1, 3)), nav_status=0, **fields)))
        else:
            events.append((ts, PositionReportB(message_type=18, **fields)))

        spikes = [t for t in noise_times if abs(t - ts) < step]
        for t in spikes:
            noise_times.discard(t)
            wild = dict(
                fields,
                lon=quant(clamp(lon + rng.choice((-1, 1)) * rng.uniform(2.0, 5.0), -179.9, 179.9), 600_000),
                lat=quant(clamp(lat + rng.choice((-1, 1)) * rng.uniform(1.5, 4.0), -89.0, 89.0), 600_000),
                ts=ts + rng.randint(5, 30),
            )
            if klass == "A":
                events.append((wild["ts"], PositionReportA(message_type=1, nav_status=0, **wild)))
            else:
                events.append((wild["ts"], PositionReportB(message_type=18, **wild)))

        if name is not None and ts - last_static > 3 * 3600:
            last_static = ts
            sts = ts + 1
            if klass == "A":
                events.append(
                    (
                        sts,
                        StaticVoyage(
                            mmsi=mmsi,
                            imo=9_000_000 + mmsi % 100_000,
                            callsign=callsign,
                            ship_name=name,
                            ship_type=ship_type,
                            dim_bow=rng.randint(20, 180),
                            dim_stern=rng.randint(10, 60),
                            dim_port=rng.randint(3, 20),
                            dim_starboard=rng.randint(3, 20),
                            eta_month=6,
                            eta_day=rng.randint(11, 20),
                            eta_hour=rng.randint(0, 23),
                            eta_minute=rng.randint(0, 59),
                            draught=quant(rng.uniform(3.0, 12.0), 10),
                            destination=rng.choice(DESTINATIONS),
                            ts=sts,
                            station="XHFX1",
                        ),
                    )
                )
            else:
                events.append(
                    (sts, StaticDataReportA(mmsi=mmsi, ship_name=name, ts=sts, station="XHFX1"))
                )
                events.append(
                    (
                        sts + 2,
                        StaticDataReportB(
                            mmsi=mmsi,
                            ship_type=ship_type,
                            callsign=callsign,
                            dim_bow=rng.randint(3, 20),
                            dim_stern=rng.randint(2, 10),
                            dim_port=rng.randint(1, 5),
                            dim_starboard=rng.randint(1, 5),
                            ts=sts + 2,
                            station="XHFX1",
                        ),
                    )
                )
        ts += step
    return events, seq


def corrupt(rng, line):
    """Break a valid line in one of several ways."""
    kind = rng.randint(0, 3)
    if kind == 0:  # flip a checksum digit
        digit = "0" if line[-1] != "0" else "7"
        return line[:-1] + digit
    if kind == 1:  # truncate mid-payload
        return line[: rng.randint(10, max(11, len(line) - 8))]
    if kind == 2:  # non-NMEA noise
        return rng.choice(["$GPGGA,junk,without,checksum", "telnet> connection reset", "#" * 30])
    return "!AIVDM,1,1,,A,," + line[-3:]  # empty payload, stale checksum


def build_lines(rng):
    tagged = []  # (ts, line)
    seq_counter = 0
    for mmsi, klass, ship_type, name, callsign, lon, lat, kn in FLEET:
        events, _ = vessel_events(rng, mmsi, klass, ship_type, name, callsign, lon, lat, kn)
        for ts, msg in events:
            seq_counter = (seq_counter + 1) % 10
            for line in encode_nm4_line(msg, seq=seq_counter):
                tagged.append((ts, line))

    # two orphaned first fragments that never complete
    for k in range(2):
        voyage = StaticVoyage(
            mmsi=316001201,
            imo=9_111_111,
            callsign="CFA2201",
            ship_name="ACADIA TRADER",
            ship_type=70,
            dim_bow=100, dim_stern=30, dim_port=10, dim_starboard=10,
            eta_month=6, eta_day=12, eta_hour=6, eta_minute=0,
            draught=8.5,
            destination="HALIFAX",
            ts=T0 + 7200 + k * 9000,
            station="XHFX1",
        )
        first_fragment = encode_nm4_line(voyage, seq=k)[0]
        tagged.append((voyage.ts, first_fragment))

    tagged.sort(key=lambda p: p[0])
    lines = [line for _, line in tagged]

    # duplicated lines: immediate repeats plus a few late echoes
    for idx in sorted(rng.sample(range(len(lines)), max(1, len(lines) // 50)), reverse=True):
        lines.insert(idx + 1, lines[idx])
    for idx in sorted(rng.sample(range(len(lines)), 12)):
        lines.append(lines[idx])

    # malformed lines sprinkled through the capture
    for _ in range(18):
        at = rng.randint(0, len(lines) - 1)
        lines.insert(at, corrupt(rng, lines[at]))
    return lines


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default=str(Path(__file__).resolve().parents[1] / "data"))
    ap.add_argument("--seed", type=int, default=20_240_611)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    lines = build_lines(rng)
    archive = out_dir / "sample.nm4"
    archive.write_text("\n".join(lines) + "\n", encoding="ascii")

    zones = out_dir / "halifax_zones.geojson"
    zones.write_text(json.dumps(ZONES, indent=2) + "\n")

    print(f"{archive}: {len(lines)} lines over {SPAN_HOURS} h starting at {T0}")
    print(f"{zones}: {len(ZONES['features'])} zones")
    return 0


if __name__ == "__main__":
    sys.exit(main())
