"""Raster grid tests: sampling semantics, ASCII grid IO, GeoTIFF subset IO."""

import struct

import numpy as np
import pytest

from conftest import make_track

from aistk.raster import (
    RasterError,
    RasterGrid,
    annotate_track,
    load_ascii_grid,
    load_geotiff,
    write_ascii_grid,
    write_geotiff,
)


def demo_grid(nrows=4, ncols=5, x0=-64.0, y0=45.0, dx=0.25, dy=0.25, nodata=None, seed=7):
    rng = np.random.default_rng(seed)
    data = np.round(rng.uniform(0.0, 100.0, size=(nrows, ncols)), 3)
    return RasterGrid(data=data, x0=x0, y0=y0, dx=dx, dy=dy, nodata=nodata)


def center(grid, r, c):
    return (grid.x0 + (c + 0.5) * grid.dx, grid.y0 - (r + 0.5) * grid.dy)


# ------------------------------------------------------------- construction


def test_grid_requires_2d_data():
    with pytest.raises(RasterError):
        RasterGrid(data=np.arange(4.0), x0=0, y0=1, dx=1, dy=1)


def test_grid_requires_positive_cells():
    with pytest.raises(RasterError):
        RasterGrid(data=np.zeros((2, 2)), x0=0, y0=2, dx=0.0, dy=1.0)


def test_bounds_are_outer_edges():
    grid = demo_grid(nrows=4, ncols=5, x0=-64.0, y0=45.0, dx=0.25, dy=0.25)
    assert grid.bounds == (-64.0, 44.0, -62.75, 45.0)


# ------------------------------------------------------------------ nearest


def test_nearest_exact_at_cell_centers():
    grid = demo_grid()
    for r in range(grid.nrows):
        for c in range(grid.ncols):
            lon, lat = center(grid, r, c)
            assert float(grid.sample_nearest(lon, lat)) == grid.data[r, c]


def test_nearest_outer_edges_count_as_inside():
    grid = demo_grid()
    xmin, ymin, xmax, ymax = grid.bounds
    vals = grid.sample_nearest([xmin, xmax, xmin, xmax], [ymin, ymin, ymax, ymax])
    assert not np.any(np.isnan(vals))


def test_nearest_out_of_extent_is_nan():
    grid = demo_grid()
    xmin, ymin, xmax, ymax = grid.bounds
    lons = [xmin - 1e-9, xmax + 1e-9, (xmin + xmax) / 2, (xmin + xmax) / 2]
    lats = [(ymin + ymax) / 2, (ymin + ymax) / 2, ymin - 1e-9, ymax + 1e-9]
    assert np.all(np.isnan(grid.sample_nearest(lons, lats)))


def test_nearest_nodata_cell_is_nan():
    grid = demo_grid(nodata=-9999.0)
    grid.data[1, 2] = -9999.0
    lon, lat = center(grid, 1, 2)
    assert np.isnan(float(grid.sample_nearest(lon, lat)))
    lon2, lat2 = center(grid, 0, 0)
    assert not np.isnan(float(grid.sample_nearest(lon2, lat2)))


def test_nearest_vector_matches_scalar():
    grid = demo_grid()
    lons = np.array([center(grid, r, c)[0] for r in range(4) for c in range(5)])
    lats = np.array([center(grid, r, c)[1] for r in range(4) for c in range(5)])
    vals = grid.sample_nearest(lons, lats)
    assert np.array_equal(vals.reshape(4, 5), grid.data)


# ----------------------------------------------------------------- bilinear


def test_bilinear_exact_at_cell_centers():
    grid = demo_grid()
    for r in range(grid.nrows):
        for c in range(grid.ncols):
            lon, lat = center(grid, r, c)
            assert float(grid.sample_bilinear(lon, lat)) == pytest.approx(grid.data[r, c], abs=1e-12)


def test_bilinear_midpoint_of_two_by_two():
    grid = RasterGrid(data=np.array([[0.0, 0.0], [10.0, 10.0]]), x0=0.0, y0=2.0, dx=1.0, dy=1.0)
    assert float(grid.sample_bilinear(1.0, 1.0)) == pytest.approx(5.0, abs=1e-12)
    # along the top cell-center row the field is flat zero
    assert float(grid.sample_bilinear(1.0, 1.5)) == pytest.approx(0.0, abs=1e-12)


def test_bilinear_agrees_with_separable_interpolation():
    grid = demo_grid(nrows=8, ncols=9, seed=11)
    rng = np.random.default_rng(3)
    xmin, ymin, xmax, ymax = grid.bounds
    lons = rng.uniform(xmin, xmax, size=1000)
    lats = rng.uniform(ymin, ymax, size=1000)
    got = grid.sample_bilinear(lons, lats)
    u = np.clip((lons - grid.x0) / grid.dx - 0.5, 0.0, grid.ncols - 1.0)
    v = np.clip((grid.y0 - lats) / grid.dy - 0.5, 0.0, grid.nrows - 1.0)
    cols = np.arange(grid.ncols, dtype=float)
    rows = np.arange(grid.nrows, dtype=float)
    per_row = np.array([np.interp(u, cols, grid.data[r]) for r in range(grid.nrows)])
    want = np.array([np.interp(v[i], rows, per_row[:, i]) for i in range(len(lons))])
    assert np.allclose(got, want, atol=1e-10)


def test_bilinear_bounded_by_neighbourhood():
    grid = demo_grid(nrows=10, ncols=10, seed=5)
    rng = np.random.default_rng(9)
    xmin, ymin, xmax, ymax = grid.bounds
    lons = rng.uniform(xmin, xmax, size=1000)
    lats = rng.uniform(ymin, ymax, size=1000)
    vals = grid.sample_bilinear(lons, lats)
    assert np.all(vals >= grid.data.min() - 1e-9)
    assert np.all(vals <= grid.data.max() + 1e-9)


def test_bilinear_continuous_across_cell_center_lines():
    grid = demo_grid(nrows=6, ncols=6, x0=0.0, y0=6.0, dx=1.0, dy=1.0, seed=2)
    eps = 1e-12
    for c in range(1, grid.ncols - 1):
        lon = grid.x0 + (c + 0.5) * grid.dx
        for lat in (1.3, 2.7, 4.9):
            lo = float(grid.sample_bilinear(lon - eps, lat))
            hi = float(grid.sample_bilinear(lon + eps, lat))
            assert abs(hi - lo) < 1e-9
    for r in range(1, grid.nrows - 1):
        lat = grid.y0 - (r + 0.5) * grid.dy
        for lon in (1.1, 3.6, 5.2):
            lo = float(grid.sample_bilinear(lon, lat - eps))
            hi = float(grid.sample_bilinear(lon, lat + eps))
            assert abs(hi - lo) < 1e-9


def test_bilinear_continuous_at_random_points():
    grid = demo_grid(nrows=7, ncols=7, seed=13)
    rng = np.random.default_rng(17)
    xmin, ymin, xmax, ymax = grid.bounds
    for _ in range(300):
        lon = rng.uniform(xmin + 1e-6, xmax - 1e-6)
        lat = rng.uniform(ymin + 1e-6, ymax - 1e-6)
        a = float(grid.sample_bilinear(lon, lat))
        b = float(grid.sample_bilinear(lon + 1e-12, lat - 1e-12))
        assert abs(a - b) < 1e-9


def test_bilinear_border_strip_degrades_to_nearest():
    grid = demo_grid(nrows=3, ncols=4, x0=0.0, y0=3.0, dx=1.0, dy=1.0)
    # above the top row of centers, clamping pins v to 0: the value is a
    # pure along-row interpolation of the top row
    lon, lat = 1.5, 2.9
    want = float(grid.sample_bilinear(lon, grid.y0 - 0.5 * grid.dy))
    assert float(grid.sample_bilinear(lon, lat)) == pytest.approx(want, abs=1e-12)
    # a corner strip point equals the corner cell exactly
    assert float(grid.sample_bilinear(0.1, 2.95)) == pytest.approx(grid.data[0, 0], abs=1e-12)


def test_bilinear_out_of_extent_is_nan():
    grid = demo_grid()
    xmin, ymin, xmax, ymax = grid.bounds
    assert np.isnan(float(grid.sample_bilinear(xmin - 0.01, (ymin + ymax) / 2)))
    assert np.isnan(float(grid.sample_bilinear((xmin + xmax) / 2, ymax + 0.01)))


def test_bilinear_nodata_poisons_four_neighbours():
    grid = demo_grid(nrows=5, ncols=5, x0=0.0, y0=5.0, dx=1.0, dy=1.0, nodata=-1.0)
    grid.data[2, 2] = -1.0
    # any query whose 2x2 neighbourhood touches (2,2) goes nan
    assert np.isnan(float(grid.sample_bilinear(2.7, 2.7)))
    assert np.isnan(float(grid.sample_bilinear(2.2, 2.2)))
    # a neighbourhood fully away from the hole is unaffected
    assert not np.isnan(float(grid.sample_bilinear(0.7, 4.3)))


def test_constant_grid_samples_constant_everywhere():
    grid = RasterGrid(data=np.full((6, 8), 42.5), x0=-10.0, y0=10.0, dx=0.5, dy=0.5)
    rng = np.random.default_rng(21)
    xmin, ymin, xmax, ymax = grid.bounds
    lons = rng.uniform(xmin, xmax, size=500)
    lats = rng.uniform(ymin, ymax, size=500)
    assert np.all(grid.sample_nearest(lons, lats) == 42.5)
    assert np.allclose(grid.sample_bilinear(lons, lats), 42.5, atol=1e-12)


def test_sample_dispatch_and_unknown_method():
    grid = demo_grid()
    lon, lat = center(grid, 1, 1)
    assert float(grid.sample(lon, lat)) == grid.data[1, 1]
    assert float(grid.sample(lon, lat, method="bilinear")) == pytest.approx(grid.data[1, 1])
    with pytest.raises(ValueError):
        grid.sample(lon, lat, method="cubic")


# ----------------------------------------------------------- annotate_track


def test_annotate_track_stores_aligned_values():
    grid = RasterGrid(data=np.full((4, 4), 7.25), x0=-64.0, y0=45.0, dx=0.25, dy=0.25)
    tr = make_track([-63.9, -63.6, -63.2], [44.9, 44.5, 44.1], [0, 60, 120])
    out = annotate_track(tr, grid, "depth")
    assert out is tr
    assert len(tr.meta["depth"]) == 3
    assert np.all(tr.meta["depth"] == 7.25)


def test_annotate_track_bilinear_marks_outside_nan():
    grid = RasterGrid(data=np.full((4, 4), 1.0), x0=-64.0, y0=45.0, dx=0.25, dy=0.25)
    tr = make_track([-63.9, 10.0], [44.9, 44.9], [0, 60])
    annotate_track(tr, grid, "v", method="bilinear")
    vals = tr.meta["v"]
    assert vals[0] == pytest.approx(1.0) and np.isnan(vals[1])


# --------------------------------------------------------------- ASCII grid


def test_ascii_round_trip_bit_exact(tmp_path):
    grid = demo_grid(nodata=-9999.0)
    grid.data[0, 0] = -9999.0
    path = tmp_path / "grid.asc"
    write_ascii_grid(grid, path)
    back = load_ascii_grid(path)
    assert np.array_equal(back.data, grid.data)
    assert (back.x0, back.y0, back.dx, back.dy) == (grid.x0, grid.y0, grid.dx, grid.dy)
    assert back.nodata == -9999.0


def test_ascii_corner_header_parses(tmp_path):
    path = tmp_path / "c.asc"
    path.write_text(
        "ncols 3\nnrows 2\nxllcorner 10.0\nyllcorner 20.0\ncellsize 0.5\n"
        "NODATA_value -1\n1 2 3\n4 5 6\n"
    )
    grid = load_ascii_grid(path)
    assert grid.x0 == 10.0
    assert grid.y0 == 21.0  # 20 + 2 rows * 0.5
    assert np.array_equal(grid.data, np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))
    assert grid.nodata == -1.0


def test_ascii_center_header_shifts_origin(tmp_path):
    path = tmp_path / "cc.asc"
    path.write_text(
        "ncols 2\nnrows 2\nxllcenter 10.5\nyllcenter 20.5\ncellsize 1.0\n1 2\n3 4\n"
    )
    grid = load_ascii_grid(path)
    assert grid.x0 == 10.0
    assert grid.y0 == 22.0
    assert grid.nodata is None


def test_ascii_value_count_mismatch_raises(tmp_path):
    path = tmp_path / "bad.asc"
    path.write_text("ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n4 5\n")
    with pytest.raises(RasterError, match="5 values"):
        load_ascii_grid(path)


def test_ascii_missing_header_raises(tmp_path):
    path = tmp_path / "nohdr.asc"
    path.write_text("ncols 2\nnrows 1\ncellsize 1\n1 2\n")
    with pytest.raises(RasterError, match="xllcorner"):
        load_ascii_grid(path)


def test_ascii_write_rejects_rectangular_cells(tmp_path):
    grid = RasterGrid(data=np.zeros((2, 2)), x0=0, y0=2, dx=1.0, dy=0.5)
    with pytest.raises(RasterError):
        write_ascii_grid(grid, tmp_path / "rect.asc")


# ------------------------------------------------------------------ GeoTIFF


def test_geotiff_float32_round_trip(tmp_path):
    grid = RasterGrid(
        data=demo_grid().data.astype(np.float32),
        x0=-64.0, y0=45.0, dx=0.25, dy=0.25, nodata=-9999.0,
    )
    path = tmp_path / "g.tif"
    write_geotiff(grid, path)
    back = load_geotiff(path)
    assert back.data.dtype.kind == "f"
    assert np.array_equal(back.data, grid.data)
    assert (back.x0, back.y0, back.dx, back.dy) == (-64.0, 45.0, 0.25, 0.25)
    assert back.nodata == -9999.0


def test_geotiff_int16_round_trip(tmp_path):
    data = np.array([[-5, 0, 7], [32767, -32768, 12]], dtype=np.int16)
    grid = RasterGrid(data=data, x0=5.0, y0=50.0, dx=0.1, dy=0.1)
    path = tmp_path / "i.tif"
    write_geotiff(grid, path)
    back = load_geotiff(path)
    assert back.data.dtype.kind == "i"
    assert np.array_equal(back.data, data)
    assert back.nodata is None


def test_geotiff_sampling_after_round_trip(tmp_path):
    grid = RasterGrid(data=demo_grid().data.astype(np.float32), x0=0.0, y0=4.0, dx=1.0, dy=1.0)
    path = tmp_path / "s.tif"
    write_geotiff(grid, path)
    back = load_geotiff(path)
    lon, lat = center(back, 2, 3)
    assert float(back.sample_nearest(lon, lat)) == grid.data[2, 3]


def big_endian_tiff() -> bytes:
    """Hand-packed 2x2 int16 big-endian GeoTIFF: values [[1,2],[3,4]],
    west edge 100, north edge 50, half-degree cells."""
    bo = ">"
    entries = []  # (tag, ftype, count, inline-or-None, external payload)

    def short(tag, v):
        entries.append((tag, 3, 1, struct.pack(bo + "H", v).ljust(4, b"\0"), None))

    def long_(tag, v):
        entries.append((tag, 4, 1, struct.pack(bo + "I", v), None))

    def doubles(tag, vals):
        entries.append((tag, 12, len(vals), None, struct.pack(bo + "d" * len(vals), *vals)))

    long_(256, 2)
    long_(257, 2)
    short(258, 16)
    short(259, 1)
    short(262, 1)
    long_(273, 0)  # patched below
    short(277, 1)
    long_(278, 2)
    long_(279, 8)
    short(339, 2)
    doubles(33550, [0.5, 0.5, 0.0])
    doubles(33922, [0.0, 0.0, 0.0, 100.0, 50.0, 0.0])

    ifd_off = 8
    ifd_size = 2 + len(entries) * 12 + 4
    ext_off = ifd_off + ifd_size
    ext = bytearray()
    resolved = []
    for tag, ftype, n, inline, payload in entries:
        if payload is None:
            resolved.append((tag, ftype, n, inline))
        else:
            resolved.append((tag, ftype, n, struct.pack(bo + "I", ext_off + len(ext))))
            ext += payload
    strip_off = ext_off + len(ext)
    pixels = struct.pack(bo + "hhhh", 1, 2, 3, 4)

    out = bytearray()
    out += struct.pack(bo + "2sHI", b"MM", 42, ifd_off)
    out += struct.pack(bo + "H", len(resolved))
    for tag, ftype, n, val in resolved:
        if tag == 273:
            val = struct.pack(bo + "I", strip_off)
        out += struct.pack(bo + "HHI", tag, ftype, n) + val
    out += struct.pack(bo + "I", 0)
    out += ext
    out += pixels
    return bytes(out)


def test_geotiff_reads_big_endian(tmp_path):
    path = tmp_path / "mm.tif"
    path.write_bytes(big_endian_tiff())
    grid = load_geotiff(path)
    assert np.array_equal(grid.data, np.array([[1, 2], [3, 4]]))
    assert (grid.x0, grid.y0, grid.dx, grid.dy) == (100.0, 50.0, 0.5, 0.5)
    assert float(grid.sample_nearest(100.25, 49.75)) == 1.0


def test_geotiff_rejects_tiled(tmp_path):
    grid = RasterGrid(data=np.zeros((2, 2), dtype=np.int16), x0=0, y0=2, dx=1, dy=1)
    clean = tmp_path / "ok.tif"
    write_geotiff(grid, clean)
    # easier than re-laying the IFD: flip the ImageWidth tag id (256) to
    # TileWidth (322); entry stays well-formed and sorted order holds
    buf = bytearray(clean.read_bytes())
    (ifd_off,) = struct.unpack_from("<I", buf, 4)
    (n,) = struct.unpack_from("<H", buf, ifd_off)
    found = False
    for i in range(n):
        off = ifd_off + 2 + i * 12
        tag, = struct.unpack_from("<H", buf, off)
        if tag == 278:  # RowsPerStrip -> TileWidth; 256/257 must survive
            struct.pack_into("<H", buf, off, 322)
            found = True
    assert found
    bad = tmp_path / "tiled.tif"
    bad.write_bytes(bytes(buf))
    with pytest.raises(RasterError, match="TileWidth"):
        load_geotiff(bad)


def test_geotiff_rejects_compression(tmp_path):
    grid = RasterGrid(data=np.zeros((2, 2), dtype=np.int16), x0=0, y0=2, dx=1, dy=1)
    path = tmp_path / "lzw.tif"
    write_geotiff(grid, path)
    buf = bytearray(path.read_bytes())
    (ifd_off,) = struct.unpack_from("<I", buf, 4)
    (n,) = struct.unpack_from("<H", buf, ifd_off)
    for i in range(n):
        off = ifd_off + 2 + i * 12
        tag, = struct.unpack_from("<H", buf, off)
        if tag == 259:
            struct.pack_into("<H", buf, off + 8, 5)  # LZW
    path.write_bytes(bytes(buf))
    with pytest.raises(RasterError, match="Compression=5"):
        load_geotiff(path)


def test_geotiff_rejects_multiband(tmp_path):
    grid = RasterGrid(data=np.zeros((2, 2), dtype=np.int16), x0=0, y0=2, dx=1, dy=1)
    path = tmp_path / "rgb.tif"
    write_geotiff(grid, path)
    buf = bytearray(path.read_bytes())
    (ifd_off,) = struct.unpack_from("<I", buf, 4)
    (n,) = struct.unpack_from("<H", buf, ifd_off)
    for i in range(n):
        off = ifd_off + 2 + i * 12
        tag, = struct.unpack_from("<H", buf, off)
        if tag == 277:
            struct.pack_into("<H", buf, off + 8, 3)
    path.write_bytes(bytes(buf))
    with pytest.raises(RasterError, match="SamplesPerPixel=3"):
        load_geotiff(path)


def test_geotiff_rejects_non_tiff(tmp_path):
    path = tmp_path / "noise.tif"
    path.write_bytes(b"GIF89a not a tiff at all")
    with pytest.raises(RasterError, match="byte-order"):
        load_geotiff(path)
    short = tmp_path / "short.tif"
    short.write_bytes(b"II")
    with pytest.raises(RasterError, match="too short"):
        load_geotiff(short)


def test_geotiff_rejects_bad_magic(tmp_path):
    path = tmp_path / "magic.tif"
    path.write_bytes(b"II" + struct.pack("<H", 43) + struct.pack("<I", 8) + b"\0" * 16)
    with pytest.raises(RasterError, match="magic"):
        load_geotiff(path)


def test_geotiff_rejects_unsupported_depth(tmp_path):
    grid = RasterGrid(data=np.zeros((2, 2), dtype=np.int16), x0=0, y0=2, dx=1, dy=1)
    path = tmp_path / "depth.tif"
    write_geotiff(grid, path)
    buf = bytearray(path.read_bytes())
    (ifd_off,) = struct.unpack_from("<I", buf, 4)
    (n,) = struct.unpack_from("<H", buf, ifd_off)
    for i in range(n):
        off = ifd_off + 2 + i * 12
        tag, = struct.unpack_from("<H", buf, off)
        if tag == 258:
            struct.pack_into("<H", buf, off + 8, 8)
    path.write_bytes(bytes(buf))
    with pytest.raises(RasterError, match="BitsPerSample=8"):
        load_geotiff(path)


def test_geotiff_requires_georeferencing(tmp_path):
    grid = RasterGrid(data=np.zeros((2, 2), dtype=np.int16), x0=0, y0=2, dx=1, dy=1)
    path = tmp_path / "geo.tif"
    write_geotiff(grid, path)
    buf = bytearray(path.read_bytes())
    (ifd_off,) = struct.unpack_from("<I", buf, 4)
    (n,) = struct.unpack_from("<H", buf, ifd_off)
    for i in range(n):
        off = ifd_off + 2 + i * 12
        tag, = struct.unpack_from("<H", buf, off)
        if tag == 33550:
            struct.pack_into("<H", buf, off, 33551)  # some other tag
    path.write_bytes(bytes(buf))
    with pytest.raises(RasterError, match="ModelPixelScale"):
        load_geotiff(path)
