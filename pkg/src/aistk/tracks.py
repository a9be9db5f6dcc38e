"""The Track container: one vessel's time-ordered position series."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Track:
    """Per-vessel arrays of (x=lon, y=lat, t, sog, cog), equal length.

    Timestamps are strictly increasing unix seconds; sog/cog use NaN for
    unavailable values.  `meta` carries static vessel data joined from
    the aggregate table; slices share it rather than copying.
    """

    mmsi: int
    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    sog: np.ndarray
    cog: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        self.sog = np.asarray(self.sog, dtype=float)
        self.cog = np.asarray(self.cog, dtype=float)
        n = len(self.t)
        if n == 0:
            raise ValueError("track must be non-empty")
        for name in ("x", "y", "sog", "cog"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"track array {name} length mismatch")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("track timestamps must be strictly increasing")

    def __len__(self):
        return len(self.t)

    def slice(self, start: int, stop: int) -> "Track":
        return Track(
            mmsi=self.mmsi,
            x=self.x[start:stop],
            y=self.y[start:stop],
            t=self.t[start:stop],
            sog=self.sog[start:stop],
            cog=self.cog[start:stop],
            meta=self.meta,
        )

    def points(self):
        """Iterate (x, y, t, sog, cog) tuples."""
        return zip(self.x, self.y, self.t, self.sog, self.cog)


def concat_tracks(parts: list[Track]) -> Track:
    """Concatenate time-contiguous pieces of the same vessel's track."""
    if not parts:
        raise ValueError("nothing to concatenate")
    return Track(
        mmsi=parts[0].mmsi,
        x=np.concatenate([p.x for p in parts]),
        y=np.concatenate([p.y for p in parts]),
        t=np.concatenate([p.t for p in parts]),
        sog=np.concatenate([p.sog for p in parts]),
        cog=np.concatenate([p.cog for p in parts]),
        meta=parts[0].meta,
    )
