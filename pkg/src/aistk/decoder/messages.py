"""Structured AIS messages and the bit-level codec for the supported types.

Supported types: 1, 2, 3 (class A position), 5 (static and voyage),
18, 19 (class B position), 24 (static data report, parts A and B).
Everything else decodes to an Unsupported record carrying type and MMSI.

Scaling: lon/lat are signed raw integers in 1/600000 degree units, SOG in
0.1 knot, COG in 0.1 degree.  Sentinel raw values (lon 0x6791AC0, lat
0x3412140, sog 1023, cog 3600, heading 511) decode to None, never to 0.
"""

from dataclasses import dataclass

from .armor import BitBuffer, BitWriter, is_text_encodable
from .errors import EncodeError, FieldRangeError, TruncatedMessage

LON_NA_RAW = 0x6791AC0  # 181 degrees
LAT_NA_RAW = 0x3412140  # 91 degrees
SOG_NA_RAW = 1023
COG_NA_RAW = 3600
HDG_NA_RAW = 511

POSITION_TYPES = (1, 2, 3, 18, 19)
STATIC_TYPES = (5, 24)
SUPPORTED_TYPES = (1, 2, 3, 5, 18, 19, 24)


@dataclass
class PositionReportA:
    """Class A position report (types 1, 2, 3)."""

    message_type: int
    mmsi: int
    lon: float | None
    lat: float | None
    sog: float | None
    cog: float | None
    heading: int | None
    nav_status: int
    ts: int
    station: str | None = None


@dataclass
class PositionReportB:
    """Class B position report (types 18, 19)."""

    message_type: int
    mmsi: int
    lon: float | None
    lat: float | None
    sog: float | None
    cog: float | None
    heading: int | None
    ts: int
    station: str | None = None


@dataclass
class StaticVoyage:
    """Static and voyage related data (type 5)."""

    mmsi: int
    imo: int
    callsign: str
    ship_name: str
    ship_type: int
    dim_bow: int
    dim_stern: int
    dim_port: int
    dim_starboard: int
    draught: float
    destination: str
    eta_month: int
    eta_day: int
    eta_hour: int
    eta_minute: int
    ts: int
    station: str | None = None
    message_type: int = 5


@dataclass
class StaticDataReportA:
    """Static data report part A (type 24): ship name only."""

    mmsi: int
    ship_name: str
    ts: int
    station: str | None = None
    message_type: int = 24


@dataclass
class StaticDataReportB:
    """Static data report part B (type 24): type, callsign, dimensions."""

    mmsi: int
    ship_type: int
    callsign: str
    dim_bow: int
    dim_stern: int
    dim_port: int
    dim_starboard: int
    ts: int
    station: str | None = None
    message_type: int = 24


@dataclass
class Unsupported:
    """Record for message types outside the decoder's coverage."""

    message_type: int
    mmsi: int
    ts: int
    station: str | None = None


DecodedMessage = (
    PositionReportA
    | PositionReportB
    | StaticVoyage
    | StaticDataReportA
    | StaticDataReportB
    | Unsupported
)


def _lon(raw: int) -> float | None:
    if raw == LON_NA_RAW:
        return None
    lon = raw / 600000.0
    if not -180.0 <= lon <= 180.0:
        raise FieldRangeError(f"longitude {lon} out of range")
    return 180.0 if lon == -180.0 else lon


def _lat(raw: int) -> float | None:
    if raw == LAT_NA_RAW:
        return None
    lat = raw / 600000.0
    if not -90.0 <= lat <= 90.0:
        raise FieldRangeError(f"latitude {lat} out of range")
    return lat


def _sog(raw: int) -> float | None:
    return None if raw == SOG_NA_RAW else raw / 10.0


def _cog(raw: int) -> float | None:
    if raw == COG_NA_RAW:
        return None
    cog = raw / 10.0
    if cog >= 360.0:
        raise FieldRangeError(f"course {cog} out of range")
    return cog


def _hdg(raw: int) -> int | None:
    if raw == HDG_NA_RAW:
        return None
    if raw >= 360:
        raise FieldRangeError(f"heading {raw} out of range")
    return raw


def _mmsi(bits: BitBuffer) -> int:
    raw = bits.uint(8, 30)
    if raw >= 10**9:
        raise FieldRangeError(f"mmsi {raw} out of range")
    return raw


def decode_message(bits: BitBuffer, ts: int, station: str | None = None) -> DecodedMessage:
    """Decode an assembled payload into a structured message.

    Raises TruncatedMessage when the buffer is too short for the claimed
    type's fields, FieldRangeError for non-sentinel out-of-range values.
    Never raises anything outside the DecodeError hierarchy.
    """
    if bits.length < 38:
        raise TruncatedMessage(f"buffer of {bits.length} bits cannot hold type and mmsi")
    mtype = bits.uint(0, 6)
    mmsi = _mmsi(bits)
    if mtype in (1, 2, 3):
        return PositionReportA(
            message_type=mtype,
            mmsi=mmsi,
            nav_status=bits.uint(38, 4),
            sog=_sog(bits.uint(50, 10)),
            lon=_lon(bits.sint(61, 28)),
            lat=_lat(bits.sint(89, 27)),
            cog=_cog(bits.uint(116, 12)),
            heading=_hdg(bits.uint(128, 9)),
            ts=ts,
            station=station,
        )
    if mtype == 5:
        return StaticVoyage(
            mmsi=mmsi,
            imo=bits.uint(40, 30),
            callsign=bits.text(70, 7),
            ship_name=bits.text(112, 20),
            ship_type=bits.uint(232, 8),
            dim_bow=bits.uint(240, 9),
            dim_stern=bits.uint(249, 9),
            dim_port=bits.uint(258, 6),
            dim_starboard=bits.uint(264, 6),
            eta_month=bits.uint(274, 4),
            eta_day=bits.uint(278, 5),
            eta_hour=bits.uint(283, 5),
            eta_minute=bits.uint(288, 6),
            draught=bits.uint(294, 8) / 10.0,
            destination=bits.text(302, 20),
            ts=ts,
            station=station,
        )
    if mtype in (18, 19):
        return PositionReportB(
            message_type=mtype,
            mmsi=mmsi,
            sog=_sog(bits.uint(46, 10)),
            lon=_lon(bits.sint(57, 28)),
            lat=_lat(bits.sint(85, 27)),
            cog=_cog(bits.uint(112, 12)),
            heading=_hdg(bits.uint(124, 9)),
            ts=ts,
            station=station,
        )
    if mtype == 24:
        part = bits.uint(38, 2)
        if part == 0:
            return StaticDataReportA(
                mmsi=mmsi, ship_name=bits.text(40, 20), ts=ts, station=station
            )
        if part == 1:
            return StaticDataReportB(
                mmsi=mmsi,
                ship_type=bits.uint(40, 8),
                callsign=bits.text(90, 7),
                dim_bow=bits.uint(132, 9),
                dim_stern=bits.uint(141, 9),
                dim_port=bits.uint(150, 6),
                dim_starboard=bits.uint(156, 6),
                ts=ts,
                station=station,
            )
        raise FieldRangeError(f"type 24 part {part} is reserved")
    return Unsupported(message_type=mtype, mmsi=mmsi, ts=ts, station=station)


def _check(cond: bool, what: str):
    if not cond:
        raise EncodeError(what)


def _lon_raw(lon: float | None) -> int:
    if lon is None:
        return LON_NA_RAW
    _check(-180.0 < lon <= 180.0, f"longitude {lon} not in (-180, 180]")
    return round(lon * 600000.0)


def _lat_raw(lat: float | None) -> int:
    if lat is None:
        return LAT_NA_RAW
    _check(-90.0 <= lat <= 90.0, f"latitude {lat} not in [-90, 90]")
    return round(lat * 600000.0)


def _sog_raw(sog: float | None) -> int:
    if sog is None:
        return SOG_NA_RAW
    _check(0.0 <= sog <= 102.2, f"sog {sog} not in [0, 102.2]")
    return round(sog * 10.0)


def _cog_raw(cog: float | None) -> int:
    if cog is None:
        return COG_NA_RAW
    _check(0.0 <= cog < 360.0, f"cog {cog} not in [0, 360)")
    return round(cog * 10.0)


def _hdg_raw(hdg: int | None) -> int:
    if hdg is None:
        return HDG_NA_RAW
    _check(0 <= hdg <= 359, f"heading {hdg} not in [0, 359]")
    return hdg


def _check_mmsi(mmsi: int):
    _check(0 <= mmsi < 10**9, f"mmsi {mmsi} not a 9-digit value")


def _check_text(s: str, maxlen: int, what: str):
    _check(len(s) <= maxlen, f"{what} longer than {maxlen} characters")
    _check(is_text_encodable(s), f"{what} contains characters outside the AIS table")


def _check_dims(msg):
    _check(0 <= msg.dim_bow <= 511, "dim_bow not in [0, 511]")
    _check(0 <= msg.dim_stern <= 511, "dim_stern not in [0, 511]")
    _check(0 <= msg.dim_port <= 63, "dim_port not in [0, 63]")
    _check(0 <= msg.dim_starboard <= 63, "dim_starboard not in [0, 63]")


def encode_bits(msg: DecodedMessage) -> BitBuffer:
    """Encode a structured message back into its payload bits.

    The inverse of decode_message up to quantization; unkept fields
    (rate of turn, radio status, ...) encode as zeros or defaults.
    """
    if isinstance(msg, PositionReportA):
        _check(msg.message_type in (1, 2, 3), f"bad type {msg.message_type} for PositionReportA")
        _check_mmsi(msg.mmsi)
        _check(0 <= msg.nav_status <= 15, "nav_status not in [0, 15]")
        w = BitWriter()
        w.put(msg.message_type, 6).put(0, 2).put(msg.mmsi, 30)
        w.put(msg.nav_status, 4).put(-128, 8).put(_sog_raw(msg.sog), 10).put(0, 1)
        w.put(_lon_raw(msg.lon), 28).put(_lat_raw(msg.lat), 27)
        w.put(_cog_raw(msg.cog), 12).put(_hdg_raw(msg.heading), 9)
        w.put(60, 6).put(0, 2).put(0, 3).put(0, 1).put(0, 19)
        return w.finish()
    if isinstance(msg, PositionReportB):
        _check(msg.message_type in (18, 19), f"bad type {msg.message_type} for PositionReportB")
        _check_mmsi(msg.mmsi)
        w = BitWriter()
        w.put(msg.message_type, 6).put(0, 2).put(msg.mmsi, 30)
        w.put(0, 8).put(_sog_raw(msg.sog), 10).put(0, 1)
        w.put(_lon_raw(msg.lon), 28).put(_lat_raw(msg.lat), 27)
        w.put(_cog_raw(msg.cog), 12).put(_hdg_raw(msg.heading), 9).put(60, 6)
        if msg.message_type == 18:
            w.put(0, 2).put(1, 1).put(0, 5).put(0, 1).put(0, 20)
        else:
            w.put(0, 4).put_text("", 20).put(0, 8)
            w.put(0, 9).put(0, 9).put(0, 6).put(0, 6)
            w.put(0, 4).put(0, 1).put(0, 1).put(0, 1).put(0, 4)
        return w.finish()
    if isinstance(msg, StaticVoyage):
        _check_mmsi(msg.mmsi)
        _check(0 <= msg.imo < 2**30, "imo out of range")
        _check_text(msg.callsign, 7, "callsign")
        _check_text(msg.ship_name, 20, "ship_name")
        _check_text(msg.destination, 20, "destination")
        _check(0 <= msg.ship_type <= 255, "ship_type not in [0, 255]")
        _check_dims(msg)
        _check(0 <= msg.eta_month <= 15, "eta_month out of range")
        _check(0 <= msg.eta_day <= 31, "eta_day out of range")
        _check(0 <= msg.eta_hour <= 31, "eta_hour out of range")
        _check(0 <= msg.eta_minute <= 63, "eta_minute out of range")
        _check(0.0 <= msg.draught <= 25.5, "draught not in [0, 25.5] meters")
        w = BitWriter()
        w.put(5, 6).put(0, 2).put(msg.mmsi, 30).put(0, 2)
        w.put(msg.imo, 30).put_text(msg.callsign, 7).put_text(msg.ship_name, 20)
        w.put(msg.ship_type, 8)
        w.put(msg.dim_bow, 9).put(msg.dim_stern, 9).put(msg.dim_port, 6).put(msg.dim_starboard, 6)
        w.put(0, 4)
        w.put(msg.eta_month, 4).put(msg.eta_day, 5).put(msg.eta_hour, 5).put(msg.eta_minute, 6)
        w.put(round(msg.draught * 10.0), 8).put_text(msg.destination, 20).put(0, 1).put(0, 1)
        return w.finish()
    if isinstance(msg, StaticDataReportA):
        _check_mmsi(msg.mmsi)
        _check_text(msg.ship_name, 20, "ship_name")
        w = BitWriter()
        w.put(24, 6).put(0, 2).put(msg.mmsi, 30).put(0, 2)
        w.put_text(msg.ship_name, 20).put(0, 8)
        return w.finish()
    if isinstance(msg, StaticDataReportB):
        _check_mmsi(msg.mmsi)
        _check(0 <= msg.ship_type <= 255, "ship_type not in [0, 255]")
        _check_text(msg.callsign, 7, "callsign")
        _check_dims(msg)
        w = BitWriter()
        w.put(24, 6).put(0, 2).put(msg.mmsi, 30).put(1, 2)
        w.put(msg.ship_type, 8).put_text("", 7).put_text(msg.callsign, 7)
        w.put(msg.dim_bow, 9).put(msg.dim_stern, 9).put(msg.dim_port, 6).put(msg.dim_starboard, 6)
        w.put(0, 6)
        return w.finish()
    raise EncodeError(f"cannot encode {type(msg).__name__}")
