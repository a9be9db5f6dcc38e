"""Georeferenced single-band rasters and track annotation.

Two interchange formats are supported without third-party readers:

* ESRI ASCII grid (``.asc``), the plain-text exchange format.
* A strict GeoTIFF subset: single band, uncompressed strips, int16 or
  float32 samples, either byte order, georeferenced by the
  ModelPixelScale + ModelTiepoint tag pair.  Anything fancier
  (compression, tiling, multiple bands) is rejected by name so the
  failure mode is a clear message instead of garbage pixels.

Grids live in "image" orientation: row 0 is the northern edge and
``origin`` is the top-left *corner* of the top-left cell.
"""

import math
import re
import struct
from dataclasses import dataclass

import numpy as np

from .tracks import Track


class RasterError(ValueError):
    """Unusable raster file or unsupported encoding feature."""


@dataclass
class RasterGrid:
    data: np.ndarray  # (nrows, ncols), north row first
    x0: float  # west edge of the west column
    y0: float  # north edge of the north row
    dx: float
    dy: float
    nodata: float | None = None

    def __post_init__(self):
        self.data = np.asarray(self.data)
        if self.data.ndim != 2 or self.data.size == 0:
            raise RasterError("grid data must be a non-empty 2-D array")
        if self.dx <= 0 or self.dy <= 0:
            raise RasterError("cell sizes must be positive")

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax) of the outer cell edges."""
        return (
            self.x0,
            self.y0 - self.nrows * self.dy,
            self.x0 + self.ncols * self.dx,
            self.y0,
        )

    def _is_nodata(self, v) -> np.ndarray:
        if self.nodata is None:
            return np.zeros(np.shape(v), dtype=bool)
        if math.isnan(self.nodata):
            return np.isnan(v)
        return np.asarray(v) == self.nodata

    def _outside(self, lon: np.ndarray, lat: np.ndarray) -> np.ndarray:
        xmin, ymin, xmax, ymax = self.bounds
        return (lon < xmin) | (lon > xmax) | (lat < ymin) | (lat > ymax)

    def sample_nearest(self, lon, lat) -> np.ndarray:
        """Value of the cell containing the point; the outer cell edges
        count as inside.  Out-of-extent points and nodata cells are nan."""
        lon = np.asarray(lon, dtype=float)
        lat = np.asarray(lat, dtype=float)
        col = np.clip(np.floor((lon - self.x0) / self.dx).astype(int), 0, self.ncols - 1)
        row = np.clip(np.floor((self.y0 - lat) / self.dy).astype(int), 0, self.nrows - 1)
        out = self.data[row, col].astype(float)
        out = np.where(self._is_nodata(out) | self._outside(lon, lat), np.nan, out)
        return out

    def sample_bilinear(self, lon, lat) -> np.ndarray:
        """Bilinear interpolation in cell-center space.

        In-extent coordinates clamp to the lattice of cell centers, so
        the strip between a border cell's center and the physical edge
        degrades to nearest.  Out-of-extent points are nan, and any
        nodata cell among the four neighbours poisons the result to nan.
        """
        lon = np.asarray(lon, dtype=float)
        lat = np.asarray(lat, dtype=float)
        u = np.clip((lon - self.x0) / self.dx - 0.5, 0.0, self.ncols - 1.0)
        v = np.clip((self.y0 - lat) / self.dy - 0.5, 0.0, self.nrows - 1.0)
        c0 = np.floor(u).astype(int)
        r0 = np.floor(v).astype(int)
        c1 = np.minimum(c0 + 1, self.ncols - 1)
        r1 = np.minimum(r0 + 1, self.nrows - 1)
        fu = u - c0
        fv = v - r0
        q00 = self.data[r0, c0].astype(float)
        q01 = self.data[r0, c1].astype(float)
        q10 = self.data[r1, c0].astype(float)
        q11 = self.data[r1, c1].astype(float)
        bad = (
            self._is_nodata(q00)
            | self._is_nodata(q01)
            | self._is_nodata(q10)
            | self._is_nodata(q11)
            | self._outside(lon, lat)
        )
        top = q00 * (1.0 - fu) + q01 * fu
        bot = q10 * (1.0 - fu) + q11 * fu
        out = top * (1.0 - fv) + bot * fv
        return np.where(bad, np.nan, out)

    def sample(self, lon, lat, method: str = "nearest") -> np.ndarray:
        if method == "nearest":
            return self.sample_nearest(lon, lat)
        if method == "bilinear":
            return self.sample_bilinear(lon, lat)
        raise ValueError(f"unknown sampling method {method!r}")


def annotate_track(track: Track, grid: RasterGrid, key: str, method: str = "nearest") -> Track:
    """Sample the grid under every track point and stash the values in
    track.meta[key] (a float array aligned with the points)."""
    track.meta[key] = grid.sample(track.x, track.y, method=method)
    return track


# ---------------------------------------------------------------- ASCII grid

def load_ascii_grid(path: str) -> RasterGrid:
    header: dict[str, float] = {}
    rows: list[list[float]] = []
    with open(path) as fo:
        for line in fo:
            parts = line.split()
            if not parts:
                continue
            if len(parts) == 2 and re.fullmatch(r"[A-Za-z_]+", parts[0]):
                header[parts[0].lower()] = float(parts[1])
            else:
                rows.append([float(p) for p in parts])
    for req in ("ncols", "nrows", "cellsize"):
        if req not in header:
            raise RasterError(f"ASCII grid header missing {req}")
    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    cell = header["cellsize"]
    flat = [v for row in rows for v in row]
    if len(flat) != ncols * nrows:
        raise RasterError(
            f"ASCII grid has {len(flat)} values, expected {ncols * nrows}"
        )
    if "xllcorner" in header:
        xll = header["xllcorner"]
    elif "xllcenter" in header:
        xll = header["xllcenter"] - cell / 2.0
    else:
        raise RasterError("ASCII grid header missing xllcorner/xllcenter")
    if "yllcorner" in header:
        yll = header["yllcorner"]
    elif "yllcenter" in header:
        yll = header["yllcenter"] - cell / 2.0
    else:
        raise RasterError("ASCII grid header missing yllcorner/yllcenter")
    data = np.array(flat, dtype=float).reshape(nrows, ncols)
    return RasterGrid(
        data=data,
        x0=xll,
        y0=yll + nrows * cell,
        dx=cell,
        dy=cell,
        nodata=header.get("nodata_value"),
    )


def write_ascii_grid(grid: RasterGrid, path: str) -> None:
    if abs(grid.dx - grid.dy) > 1e-12:
        raise RasterError("ASCII grids require square cells")
    nodata = grid.nodata if grid.nodata is not None else -9999.0
    with open(path, "w") as fo:
        fo.write(f"ncols {grid.ncols}\n")
        fo.write(f"nrows {grid.nrows}\n")
        fo.write(f"xllcorner {grid.x0!r}\n")
        fo.write(f"yllcorner {grid.y0 - grid.nrows * grid.dy!r}\n")
        fo.write(f"cellsize {grid.dx!r}\n")
        fo.write(f"NODATA_value {nodata!r}\n")
        for row in grid.data:
            fo.write(" ".join(repr(float(v)) for v in row) + "\n")


# ------------------------------------------------------------------- GeoTIFF

_TAG_WIDTH = 256
_TAG_LENGTH = 257
_TAG_BITS = 258
_TAG_COMPRESSION = 259
_TAG_PHOTOMETRIC = 262
_TAG_STRIP_OFFSETS = 273
_TAG_SAMPLES = 277
_TAG_ROWS_PER_STRIP = 278
_TAG_STRIP_COUNTS = 279
_TAG_TILE_WIDTH = 322
_TAG_TILE_LENGTH = 323
_TAG_SAMPLE_FORMAT = 339
_TAG_PIXEL_SCALE = 33550
_TAG_TIEPOINT = 33922
_TAG_GDAL_NODATA = 42113

# TIFF field type -> (struct code, byte size)
_FIELD_TYPES = {
    1: ("B", 1),   # BYTE
    2: ("s", 1),   # ASCII
    3: ("H", 2),   # SHORT
    4: ("I", 4),   # LONG
    11: ("f", 4),  # FLOAT
    12: ("d", 8),  # DOUBLE
}


def _read_entries(buf: bytes, bo: str) -> dict[int, list]:
    (ifd_off,) = struct.unpack_from(bo + "I", buf, 4)
    (count,) = struct.unpack_from(bo + "H", buf, ifd_off)
    tags: dict[int, list] = {}
    for i in range(count):
        off = ifd_off + 2 + i * 12
        tag, ftype, n = struct.unpack_from(bo + "HHI", buf, off)
        if ftype not in _FIELD_TYPES:
            continue  # unknown field type: skip, per TIFF guidance
        code, size = _FIELD_TYPES[ftype]
        total = size * n
        if total <= 4:
            src = off + 8
        else:
            (src,) = struct.unpack_from(bo + "I", buf, off + 8)
        if ftype == 2:
            raw = buf[src : src + n]
            tags[tag] = [raw.split(b"\0")[0].decode("ascii", "replace")]
        else:
            tags[tag] = list(struct.unpack_from(bo + code * n, buf, src))
    return tags


def load_geotiff(path: str) -> RasterGrid:
    with open(path, "rb") as fo:
        buf = fo.read()
    if len(buf) < 8:
        raise RasterError("not a TIFF: file too short")
    if buf[:2] == b"II":
        bo = "<"
    elif buf[:2] == b"MM":
        bo = ">"
    else:
        raise RasterError("not a TIFF: bad byte-order mark")
    (magic,) = struct.unpack_from(bo + "H", buf, 2)
    if magic != 42:
        raise RasterError("not a TIFF: bad magic number")
    tags = _read_entries(buf, bo)

    for tag, name in ((_TAG_TILE_WIDTH, "TileWidth"), (_TAG_TILE_LENGTH, "TileLength")):
        if tag in tags:
            raise RasterError(f"tiled TIFFs are not supported (tag {name})")
    comp = tags.get(_TAG_COMPRESSION, [1])[0]
    if comp != 1:
        raise RasterError(f"compressed TIFFs are not supported (Compression={comp})")
    samples = tags.get(_TAG_SAMPLES, [1])[0]
    if samples != 1:
        raise RasterError(f"only single-band TIFFs are supported (SamplesPerPixel={samples})")

    try:
        width = tags[_TAG_WIDTH][0]
        length = tags[_TAG_LENGTH][0]
        offsets = tags[_TAG_STRIP_OFFSETS]
        counts = tags[_TAG_STRIP_COUNTS]
    except KeyError as exc:
        raise RasterError(f"TIFF missing required tag {exc}") from None

    bits = tags.get(_TAG_BITS, [1])[0]
    sfmt = tags.get(_TAG_SAMPLE_FORMAT, [1])[0]
    if (bits, sfmt) == (16, 2):
        dtype = np.dtype(bo + "i2")
    elif (bits, sfmt) == (32, 3):
        dtype = np.dtype(bo + "f4")
    else:
        raise RasterError(
            f"unsupported sample encoding (BitsPerSample={bits}, SampleFormat={sfmt}); "
            "expected int16 or float32"
        )

    raw = b"".join(buf[o : o + c] for o, c in zip(offsets, counts))
    expect = width * length * dtype.itemsize
    if len(raw) < expect:
        raise RasterError("TIFF strip data shorter than ImageWidth*ImageLength")
    data = np.frombuffer(raw[:expect], dtype=dtype).reshape(length, width)

    if _TAG_PIXEL_SCALE not in tags or _TAG_TIEPOINT not in tags:
        raise RasterError("TIFF lacks ModelPixelScale/ModelTiepoint georeferencing")
    sx, sy = tags[_TAG_PIXEL_SCALE][0], tags[_TAG_PIXEL_SCALE][1]
    ti, tj = tags[_TAG_TIEPOINT][0], tags[_TAG_TIEPOINT][1]
    tx, ty = tags[_TAG_TIEPOINT][3], tags[_TAG_TIEPOINT][4]
    x0 = tx - ti * sx
    y0 = ty + tj * sy

    nodata = None
    if _TAG_GDAL_NODATA in tags:
        txt = tags[_TAG_GDAL_NODATA][0].strip()
        if txt:
            nodata = float(txt)

    return RasterGrid(data=data, x0=x0, y0=y0, dx=sx, dy=sy, nodata=nodata)


def write_geotiff(grid: RasterGrid, path: str) -> None:
    """Emit the little-endian flavor of the subset load_geotiff reads."""
    bo = "<"
    arr = np.asarray(grid.data)
    if arr.dtype == np.int16:
        dtype = np.dtype("<i2")
        bits, sfmt = 16, 2
    else:
        dtype = np.dtype("<f4")
        bits, sfmt = 32, 3
    pixels = np.ascontiguousarray(arr.astype(dtype, copy=False)).tobytes()

    entries: list[tuple[int, int, int, bytes]] = []  # (tag, type, count, payload)

    def add(tag: int, ftype: int, values) -> None:
        code, _ = _FIELD_TYPES[ftype]
        if ftype == 2:
            payload = values  # already bytes, NUL-terminated
            entries.append((tag, ftype, len(payload), payload))
        else:
            entries.append((tag, ftype, len(values), struct.pack(bo + code * len(values), *values)))

    nodata_txt = None
    if grid.nodata is not None:
        nodata_txt = (repr(float(grid.nodata)).encode("ascii")) + b"\0"

    add(_TAG_WIDTH, 4, [grid.ncols])
    add(_TAG_LENGTH, 4, [grid.nrows])
    add(_TAG_BITS, 3, [bits])
    add(_TAG_COMPRESSION, 3, [1])
    add(_TAG_PHOTOMETRIC, 3, [1])
    add(_TAG_STRIP_OFFSETS, 4, [0])  # patched once the layout is known
    add(_TAG_SAMPLES, 3, [1])
    add(_TAG_ROWS_PER_STRIP, 4, [grid.nrows])
    add(_TAG_STRIP_COUNTS, 4, [len(pixels)])
    add(_TAG_SAMPLE_FORMAT, 3, [sfmt])
    add(_TAG_PIXEL_SCALE, 12, [grid.dx, grid.dy, 0.0])
    add(_TAG_TIEPOINT, 12, [0.0, 0.0, 0.0, grid.x0, grid.y0, 0.0])
    if nodata_txt is not None:
        add(_TAG_GDAL_NODATA, 2, nodata_txt)

    entries.sort(key=lambda e: e[0])
    ifd_off = 8
    ifd_size = 2 + len(entries) * 12 + 4
    ext_off = ifd_off + ifd_size
    ext_chunks: list[bytes] = []
    placed: list[tuple[int, int, int, bytes | int]] = []
    for tag, ftype, n, payload in entries:
        if len(payload) <= 4:
            placed.append((tag, ftype, n, payload.ljust(4, b"\0")))
        else:
            if ext_off % 2:
                ext_chunks.append(b"\0")
                ext_off += 1
            placed.append((tag, ftype, n, ext_off))
            ext_chunks.append(payload)
            ext_off += len(payload)
    strip_off = ext_off + (ext_off % 2)

    out = bytearray()
    out += struct.pack(bo + "2sHI", b"II", 42, ifd_off)
    out += struct.pack(bo + "H", len(entries))
    for tag, ftype, n, val in placed:
        if tag == _TAG_STRIP_OFFSETS:
            val = struct.pack(bo + "I", strip_off)
        out += struct.pack(bo + "HHI", tag, ftype, n)
        out += val if isinstance(val, bytes) else struct.pack(bo + "I", val)
    out += struct.pack(bo + "I", 0)  # no next IFD
    for chunk in ext_chunks:
        out += chunk
    while len(out) < strip_off:
        out += b"\0"
    out += pixels
    with open(path, "wb") as fo:
        fo.write(out)


__all__ = [
    "RasterError",
    "RasterGrid",
    "annotate_track",
    "load_ascii_grid",
    "load_geotiff",
    "write_ascii_grid",
    "write_geotiff",
]
