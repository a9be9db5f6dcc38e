"""Trajectory cleaning: time-gap splits, pairwise plausibility scoring with
greedy segment reconstruction, interpolation, and decimation.

The cleaning pipeline composes as lazy stream transformers in the order
split -> encode_greatcircledistance -> interp_time; every operation is
pure on its inputs and tracks may be processed in parallel per vessel.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .gis import haversine
from .tracks import Track, concat_tracks

KNOT_MS = 0.514444  # meters per second per knot, exact for gating


@dataclass
class CleanParams:
    """Thresholds for the pairwise plausibility gate."""

    speed_threshold: float = 50.0  # knots
    distance_threshold: float = 200_000.0  # meters

    def __post_init__(self):
        if self.speed_threshold <= 0 or self.distance_threshold <= 0:
            raise ValueError("thresholds must be strictly positive")


@dataclass
class ScoreBreakdown:
    """Pairwise score with its ingredients.

    meters is the great-circle distance between the two points, knots the
    implied speed over delta_t.  score is -1 exactly when the gate fails
    (speed or distance above threshold); a gate pass with zero distance
    is flagged degenerate and scores 0.
    """

    meters: float
    delta_t: float
    knots: float
    score: float
    degenerate: bool = False


def score(
    x1: float, y1: float, t1: float, x2: float, y2: float, t2: float, params: CleanParams
) -> ScoreBreakdown:
    """Plausibility that two consecutive points belong to the same voyage.

    Higher scores mean tighter reconnections: away from the degenerate
    zero-distance case the score reduces to 1 / delta_t, and the gate
    compares implied speed and inter-point distance to the thresholds.
    """
    dt = t2 - t1
    if dt <= 0:
        raise ValueError(f"points out of order: dt = {dt}")
    m = haversine(x1, y1, x2, y2)
    knots = (m / dt) / KNOT_MS
    if knots <= params.speed_threshold and m <= params.distance_threshold:
        s = m / (max(m, 1.0) * dt)
        return ScoreBreakdown(meters=m, delta_t=dt, knots=knots, score=s, degenerate=(m == 0.0))
    return ScoreBreakdown(meters=m, delta_t=dt, knots=knots, score=-1.0)


def gate_passes(
    x1: float, y1: float, t1: float, x2: float, y2: float, t2: float, params: CleanParams
) -> bool:
    return score(x1, y1, t1, x2, y2, t2, params).score >= 0.0


def split_timedelta(tracks: Iterable[Track], gap_seconds: float) -> Iterator[Track]:
    """Cut tracks wherever consecutive timestamps differ by more than the gap.

    Concatenating the outputs of one input reproduces it exactly.
    """
    if gap_seconds <= 0:
        raise ValueError("gap must be strictly positive")
    for track in tracks:
        cuts = np.flatnonzero(np.diff(track.t) > gap_seconds) + 1
        start = 0
        for cut in cuts:
            yield track.slice(start, int(cut))
            start = int(cut)
        yield track.slice(start, len(track))


@dataclass
class _Segment:
    index: int
    start: int  # inclusive point index in the source track
    stop: int  # exclusive
    prev: "_Segment | None" = None
    next: "_Segment | None" = None


def _clean_one(track: Track, params: CleanParams, min_segment_length: int) -> list[Track]:
    n = len(track)
    x, y, t = track.x, track.y, track.t
    # cut wherever the pairwise score is not strictly positive
    bounds = [0]
    for i in range(n - 1):
        s = score(x[i], y[i], t[i], x[i + 1], y[i + 1], t[i + 1], params)
        if s.score <= 0.0:
            bounds.append(i + 1)
    bounds.append(n)
    segments = [
        _Segment(index=k, start=bounds[k], stop=bounds[k + 1]) for k in range(len(bounds) - 1)
    ]

    # candidate junctions between any earlier-ending and later-starting
    # segment whose joining pair passes the gate, best score first
    candidates = []
    for a in segments:
        for b in segments:
            if a.index >= b.index:
                continue  # segments are disjoint, ordered time ranges
            s = score(
                x[a.stop - 1], y[a.stop - 1], t[a.stop - 1], x[b.start], y[b.start], t[b.start], params
            )
            if s.score >= 0.0:
                candidates.append((-s.score, s.meters, a.index, b.index))
    candidates.sort()
    for _, _, ai, bi in candidates:
        a, b = segments[ai], segments[bi]
        if a.next is None and b.prev is None:
            a.next = b
            b.prev = a

    out = []
    for seg in segments:
        if seg.prev is not None:
            continue
        chain = [seg]
        while chain[-1].next is not None:
            chain.append(chain[-1].next)
        pieces = [track.slice(s.start, s.stop) for s in chain]
        joined = concat_tracks(pieces) if len(pieces) > 1 else pieces[0]
        if len(joined) >= min_segment_length:
            out.append(joined)
        else:
            out.extend(joined.slice(i, i + 1) for i in range(len(joined)))
    out.sort(key=lambda tr: (tr.t[0], tr.x[0], tr.y[0]))
    return out


def encode_greatcircledistance(
    tracks: Iterable[Track],
    *,
    distance_threshold: float = 200_000.0,
    speed_threshold: float = 50.0,
    min_segment_length: int = 1,
) -> Iterator[Track]:
    """Segment and reconstruct tracks with the great-circle distance filter.

    Each track is cut wherever the pairwise score fails, then segments
    are greedily re-joined in descending junction score (ties: smaller
    distance, then earlier segment).  Every consecutive pair in every
    output passes the gate, and the output point multiset equals the
    input's: noise is isolated, never deleted.
    """
    params = CleanParams(speed_threshold=speed_threshold, distance_threshold=distance_threshold)
    for track in tracks:
        yield from _clean_one(track, params, min_segment_length)


def _unwrap_lon(x: np.ndarray) -> np.ndarray:
    return np.unwrap(x, period=360.0)


def _norm_lon(x: np.ndarray) -> np.ndarray:
    x = (x + 180.0) % 360.0 - 180.0
    return np.where(x == -180.0, 180.0, x)


def interp_time(track: Track, step_seconds: float) -> Track:
    """Resample a track on the uniform grid t0, t0+step, ... <= t_last.

    Coordinates interpolate linearly per axis (longitudes on the
    unwrapped branch across the antimeridian); sog/cog carry over from
    the earlier bracketing input point.  Single-point tracks pass through.
    """
    if step_seconds <= 0:
        raise ValueError("step must be strictly positive")
    if len(track) < 2:
        return track
    nsteps = int(math.floor((track.t[-1] - track.t[0]) / step_seconds))
    grid = track.t[0] + step_seconds * np.arange(nsteps + 1)
    xs = _norm_lon(np.interp(grid, track.t, _unwrap_lon(track.x)))
    ys = np.interp(grid, track.t, track.y)
    idx = np.clip(np.searchsorted(track.t, grid, side="right") - 1, 0, len(track) - 1)
    return Track(
        mmsi=track.mmsi,
        x=xs,
        y=ys,
        t=grid,
        sog=track.sog[idx],
        cog=track.cog[idx],
        meta=track.meta,
    )


def interp_time_all(tracks: Iterable[Track], step_seconds: float) -> Iterator[Track]:
    for track in tracks:
        yield interp_time(track, step_seconds)


def interp_equidistant(track: Track, spacing_meters: float) -> Track:
    """Resample a track at points a fixed along-track distance apart.

    Output points sit at cumulative haversine distances 0, s, 2s, ...;
    the final input point is always included.  Positions come from linear
    parameterization of the original polyline.
    """
    if spacing_meters <= 0:
        raise ValueError("spacing must be strictly positive")
    if len(track) < 2:
        return track
    seg = np.array(
        [haversine(track.x[i], track.y[i], track.x[i + 1], track.y[i + 1]) for i in range(len(track) - 1)]
    )
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    # collapse zero-length steps so the distance parameterization is strictly increasing
    keep = np.concatenate([[True], np.diff(cum) > 0])
    cum_k = cum[keep]
    xk = _unwrap_lon(track.x[keep])
    yk = track.y[keep]
    tk = track.t[keep]
    total = cum_k[-1]
    if total == 0.0:  # fully stationary track
        return concat_tracks([track.slice(0, 1), track.slice(len(track) - 1, len(track))])
    marks = np.arange(0.0, total, spacing_meters)
    if total - marks[-1] > 1e-9:
        marks = np.concatenate([marks, [total]])
    else:
        marks[-1] = total
    xs = _norm_lon(np.interp(marks, cum_k, xk))
    ys = np.interp(marks, cum_k, yk)
    ts = np.interp(marks, cum_k, tk)
    idx = np.clip(np.searchsorted(cum_k, marks, side="right") - 1, 0, len(cum_k) - 1)
    return Track(
        mmsi=track.mmsi,
        x=xs,
        y=ys,
        t=ts,
        sog=track.sog[keep][idx],
        cog=track.cog[keep][idx],
        meta=track.meta,
    )


def _perp_distance_m(px, py, ax, ay, bx, by):
    # local equirectangular projection about the segment midpoint
    lat0 = (ay + by) / 2.0
    lon0 = (ax + bx) / 2.0
    kx = math.cos(math.radians(lat0)) * math.pi / 180.0 * 6_371_000.0
    ky = math.pi / 180.0 * 6_371_000.0

    def proj(lon, lat):
        dlon = (lon - lon0 + 180.0) % 360.0 - 180.0
        return dlon * kx, (lat - lat0) * ky

    pxm, pym = proj(px, py)
    axm, aym = proj(ax, ay)
    bxm, bym = proj(bx, by)
    dx, dy = bxm - axm, bym - aym
    ll = dx * dx + dy * dy
    if ll == 0.0:
        return math.hypot(pxm - axm, pym - aym)
    tt = ((pxm - axm) * dx + (pym - aym) * dy) / ll
    tt = min(1.0, max(0.0, tt))
    return math.hypot(pxm - (axm + tt * dx), pym - (aym + tt * dy))


def decimate(track: Track, epsilon_meters: float) -> Track:
    """Ramer-Douglas-Peucker simplification with a metric tolerance.

    Endpoints are always kept; every dropped point lies within epsilon
    meters of the simplified polyline.
    """
    if epsilon_meters <= 0:
        raise ValueError("epsilon must be strictly positive")
    n = len(track)
    if n < 3:
        return track
    x, y = track.x, track.y
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        dmax = -1.0
        imax = lo
        for i in range(lo + 1, hi):
            d = _perp_distance_m(x[i], y[i], x[lo], y[lo], x[hi], y[hi])
            if d > dmax:
                dmax = d
                imax = i
        if dmax > epsilon_meters:
            keep[imax] = True
            stack.append((lo, imax))
            stack.append((imax, hi))
    idx = np.flatnonzero(keep)
    return Track(
        mmsi=track.mmsi,
        x=x[idx],
        y=y[idx],
        t=track.t[idx],
        sog=track.sog[idx],
        cog=track.cog[idx],
        meta=track.meta,
    )


def decimate_all(tracks: Iterable[Track], epsilon_meters: float) -> Iterator[Track]:
    for track in tracks:
        yield decimate(track, epsilon_meters)
