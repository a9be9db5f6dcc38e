"""NMEA 0183 line handling: checksums, tag blocks, fragments, assembly.

Line anatomy::

    \\c:1672531200,s:stn*4A\\!AIVDM,1,1,,A,payload,0*hh
    '-- tag block (optional) --''------ sentence -------'

The tag block checksum covers the characters between the backslashes and
before the ``*``; the sentence checksum covers the bytes strictly between
the leading ``!``/``$`` and its ``*``.
"""

import time
from dataclasses import dataclass, field

from .armor import _CHAR_VAL, BitBuffer, sixbit_decode, sixbit_encode
from .errors import (
    ChecksumMismatch,
    DecodeError,
    FragmentIndexError,
    PayloadCharError,
    SentenceFormatError,
    TagBlockError,
    UnterminatedSentence,
)
from .messages import DecodedMessage, decode_message, encode_bits


def nmea_checksum(body: str) -> int:
    """XOR of the character values of body."""
    acc = 0
    for b in body.encode("latin-1", errors="replace"):
        acc ^= b
    return acc


def validate_checksum(line: str) -> bool:
    """True iff the sentence checksum matches its `*hh` suffix.

    Raises UnterminatedSentence when the line has no parseable suffix;
    a mismatch returns False, never raises.
    """
    if not line or line[0] not in "!$":
        raise UnterminatedSentence("sentence does not start with '!' or '$'")
    star = line.rfind("*")
    if star < 0 or len(line) < star + 3:
        raise UnterminatedSentence("no '*hh' checksum suffix")
    try:
        want = int(line[star + 1 : star + 3], 16)
    except ValueError:
        raise UnterminatedSentence("checksum suffix is not two hex digits") from None
    return nmea_checksum(line[1:star]) == want


@dataclass
class TagBlock:
    """Parsed NM4 tag block prefix."""

    receiver_timestamp: int | None
    source_station: str | None
    raw: str


def parse_tag_block(line: str) -> tuple[TagBlock | None, str]:
    """Split an optional leading tag block from the sentence that follows.

    Lines without a leading backslash pass through as (None, line).
    """
    if not line.startswith("\\"):
        return None, line
    end = line.find("\\", 1)
    if end < 0:
        raise TagBlockError("tag block has no closing backslash")
    inner = line[1:end]
    star = inner.rfind("*")
    if star < 0 or len(inner) < star + 3:
        raise TagBlockError("tag block has no checksum suffix")
    try:
        want = int(inner[star + 1 : star + 3], 16)
    except ValueError:
        raise TagBlockError("tag block checksum is not hex") from None
    if nmea_checksum(inner[:star]) != want:
        raise TagBlockError("tag block checksum mismatch")
    ts = None
    station = None
    for pair in inner[:star].split(","):
        if ":" not in pair:
            continue
        key, value = pair.split(":", 1)
        if key == "c":
            try:
                ts = int(value)
            except ValueError:
                raise TagBlockError(f"tag block timestamp {value!r} is not an integer") from None
            if ts >= 40_000_000_000:  # feeds occasionally stamp in milliseconds
                ts //= 1000
            if ts <= 0:
                raise TagBlockError(f"tag block timestamp {ts} not positive")
        elif key == "s":
            station = value
    return TagBlock(receiver_timestamp=ts, source_station=station, raw=line[: end + 1]), line[end + 1 :]


@dataclass
class SentenceFragment:
    """One AIVDM/AIVDO sentence, possibly a fragment of a longer payload."""

    fragment_count: int
    fragment_index: int
    sequence_id: int | None
    channel: str | None
    payload: str
    fill_bits: int


def parse_sentence(line: str) -> SentenceFragment:
    """Parse a checksum-validated sentence into a SentenceFragment."""
    star = line.rfind("*")
    body = line[1:star] if star >= 0 else line[1:]
    fields = body.split(",")
    if len(fields) != 7:
        raise SentenceFormatError(f"expected 7 fields, got {len(fields)}")
    talker = fields[0]
    if not (talker.endswith("VDM") or talker.endswith("VDO")):
        raise SentenceFormatError(f"not an AIVDM/AIVDO sentence: {talker!r}")
    try:
        count = int(fields[1])
        index = int(fields[2])
        fill = int(fields[6])
    except ValueError:
        raise SentenceFormatError("non-numeric count, index, or fill field") from None
    if not 1 <= count <= 9:
        raise FragmentIndexError(f"fragment count {count} not in 1..9")
    if not 1 <= index <= count:
        raise FragmentIndexError(f"fragment index {index} not in 1..{count}")
    seq = None
    if fields[3]:
        try:
            seq = int(fields[3])
        except ValueError:
            raise SentenceFormatError(f"sequence id {fields[3]!r} not an integer") from None
        if not 0 <= seq <= 9:
            raise SentenceFormatError(f"sequence id {seq} not in 0..9")
    channel = fields[4] or None
    payload = fields[5]
    for i, ch in enumerate(payload):
        o = ord(ch)
        if o >= 256 or _CHAR_VAL[o] < 0:
            raise PayloadCharError(ch, i)
    if not 0 <= fill <= 5:
        raise SentenceFormatError(f"fill bits {fill} not in 0..5")
    return SentenceFragment(
        fragment_count=count,
        fragment_index=index,
        sequence_id=seq,
        channel=channel,
        payload=payload,
        fill_bits=fill,
    )


@dataclass
class _Group:
    parts: dict  # index -> SentenceFragment
    ts_by_index: dict
    born: float


class FragmentAssembler:
    """Reassembles multi-fragment payload groups keyed by (sequence_id, channel).

    Holds mutable state: one assembler per stream, never shared across
    threads.  Incomplete groups expire after `window` seconds of stream
    time (the timestamps passed to add); duplicate fragment indexes
    discard the whole group.
    """

    def __init__(self, window: float = 30.0):
        self.window = window
        self._groups: dict[tuple, _Group] = {}
        self._clock = 0.0
        self.fragments_expired = 0
        self.groups_discarded = 0

    def add(self, frag: SentenceFragment, ts: float | None = None) -> tuple[BitBuffer, float | None] | None:
        """Feed one fragment; returns (bits, group timestamp) when a payload completes."""
        if ts is not None:
            self._clock = max(self._clock, float(ts))
        self._expire()
        if frag.fragment_count == 1:
            return sixbit_decode(frag.payload, frag.fill_bits), ts
        key = (frag.sequence_id, frag.channel)
        group = self._groups.get(key)
        if group is None:
            group = self._groups[key] = _Group(parts={}, ts_by_index={}, born=self._clock)
        if frag.fragment_index in group.parts:
            self.groups_discarded += 1
            self.fragments_expired += len(group.parts)
            del self._groups[key]
            return None
        group.parts[frag.fragment_index] = frag
        group.ts_by_index[frag.fragment_index] = ts
        if len(group.parts) < frag.fragment_count:
            return None
        del self._groups[key]
        acc = 0
        length = 0
        for idx in sorted(group.parts):
            piece = sixbit_decode(group.parts[idx].payload, group.parts[idx].fill_bits)
            acc = (acc << piece.length) | piece.value
            length += piece.length
        group_ts = next(
            (group.ts_by_index[i] for i in sorted(group.ts_by_index) if group.ts_by_index[i] is not None),
            None,
        )
        return BitBuffer(acc, length), group_ts

    def _expire(self):
        cutoff = self._clock - self.window
        stale = [k for k, g in self._groups.items() if g.born < cutoff]
        for k in stale:
            self.fragments_expired += len(self._groups[k].parts)
            self.groups_discarded += 1
            del self._groups[k]

    def flush(self) -> int:
        """Drop all pending groups, returning how many fragments were discarded."""
        n = sum(len(g.parts) for g in self._groups.values())
        self.fragments_expired += n
        self.groups_discarded += len(self._groups)
        self._groups.clear()
        return n


MAX_PAYLOAD_CHARS = 62


def encode_message(msg: DecodedMessage, *, seq: int = 0, channel: str = "A") -> list[str]:
    """Render a message as checksummed AIVDM sentence(s).

    Payloads longer than MAX_PAYLOAD_CHARS armored characters split into
    a fragment group sharing `seq`.
    """
    payload, fill = sixbit_encode(encode_bits(msg))
    chunks = [payload[i : i + MAX_PAYLOAD_CHARS] for i in range(0, len(payload), MAX_PAYLOAD_CHARS)] or [""]
    count = len(chunks)
    lines = []
    for idx, chunk in enumerate(chunks, start=1):
        seq_field = "" if count == 1 else str(seq)
        chunk_fill = fill if idx == count else 0
        body = f"AIVDM,{count},{idx},{seq_field},{channel},{chunk},{chunk_fill}"
        lines.append(f"!{body}*{nmea_checksum(body):02X}")
    return lines


def encode_nm4_line(msg: DecodedMessage, *, seq: int = 0, channel: str = "A") -> list[str]:
    """Render a message as NM4 lines: tag block (timestamp, station) + sentence."""
    lines = []
    for sentence in encode_message(msg, seq=seq, channel=channel):
        inner = f"c:{msg.ts}"
        if msg.station:
            inner += f",s:{msg.station}"
        lines.append(f"\\{inner}*{nmea_checksum(inner):02X}\\{sentence}")
    return lines


@dataclass
class LineStats:
    lines_seen: int = 0
    lines_malformed: int = 0
    messages_decoded: int = 0
    tag_blocks_rejected: int = 0


class StreamDecoder:
    """Full line-to-message path with reject counting.

    Single-threaded by design (owns a FragmentAssembler).  Timestamp
    priority: tag block `c:` field, else the caller's default clock,
    else wall time at arrival.
    """

    def __init__(self, assembly_window: float = 30.0):
        self.assembler = FragmentAssembler(window=assembly_window)
        self.stats = LineStats()

    def feed_line(self, line: str, default_ts: int | None = None) -> DecodedMessage | None:
        self.stats.lines_seen += 1
        line = line.strip()
        if not line:
            return None
        try:
            tag, sentence = parse_tag_block(line)
        except TagBlockError:
            self.stats.tag_blocks_rejected += 1
            self.stats.lines_malformed += 1
            return None
        try:
            if not validate_checksum(sentence):
                raise ChecksumMismatch("sentence checksum mismatch")
            frag = parse_sentence(sentence)
            ts = tag.receiver_timestamp if tag and tag.receiver_timestamp else default_ts
            if ts is None:
                ts = int(time.time())
            station = tag.source_station if tag else None
            done = self.assembler.add(frag, ts)
            if done is None:
                return None
            bits, group_ts = done
            msg = decode_message(bits, int(group_ts if group_ts is not None else ts), station)
        except DecodeError:
            self.stats.lines_malformed += 1
            return None
        self.stats.messages_decoded += 1
        return msg
