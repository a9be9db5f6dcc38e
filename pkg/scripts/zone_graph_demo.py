"""Zone-transition graph from the bundled capture.

Decodes data/sample.nm4 straight into tracks, labels each position
against the harbour zone fixture, and prints the movement graph as an
edge list with transit and distinct-vessel counts.
"""

import argparse
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from aistk.decoder import decode_source  # noqa: E402
from aistk.gis import build_graph, load_zones  # noqa: E402
from aistk.query import QuerySpec, run_query, track_gen  # noqa: E402
from aistk.storage import open_storage  # noqa: E402
from aistk.trajectory import encode_greatcircledistance, split_timedelta  # noqa: E402

ARCHIVE_T0 = 1_718_064_000


def main(argv=None) -> int:
    repo = Path(__file__).resolve().parents[1]
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--archive", default=str(repo / "data" / "sample.nm4"))
    ap.add_argument("--zones", default=str(repo / "data" / "halifax_zones.geojson"))
    args = ap.parse_args(argv)

    zones = load_zones(args.zones)
    print(f"zones    {', '.join(z.name for z in zones)}")

    with tempfile.TemporaryDirectory() as tmp:
        with open_storage(Path(tmp) / "graph.db") as handle:
            handle.insert_messages(decode_source(args.archive))
            rows = run_query(handle, QuerySpec(start=ARCHIVE_T0, end=ARCHIVE_T0 + 86_400))
            tracks = track_gen(rows)
            tracks = split_timedelta(tracks, 21_600)
            tracks = encode_greatcircledistance(
                tracks, distance_threshold=200_000.0, speed_threshold=50.0)
            graph = build_graph(tracks, zones)

    print(f"total    {graph.total_transits()} transitions")
    for (src, dst), stat in sorted(graph.edges.items()):
        print(f"{src:>16} -> {dst:<16} {stat.transit_count:4d} transits, "
              f"{len(stat.vessels)} vessels")
    return 0


if __name__ == "__main__":
    sys.exit(main())
