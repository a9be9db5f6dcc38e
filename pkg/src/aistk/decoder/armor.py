"""Six-bit payload armoring and the bit buffer used by message codecs.

AIS payloads pack the message bits into printable ASCII, six bits per
character.  A character c maps to v = ord(c) - 48, then v -= 8 if v > 40,
giving values 0..63; the valid character ranges are ASCII 48..87 and
96..119.  Fill bits pad the final character and are truncated on decode.
"""

from .errors import PayloadCharError, TruncatedMessage

# char byte -> 6-bit value, or -1 outside the armoring alphabet
_CHAR_VAL = [-1] * 256
for _o in range(48, 88):
    _CHAR_VAL[_o] = _o - 48
for _o in range(96, 120):
    _CHAR_VAL[_o] = _o - 48 - 8

# 6-bit value -> char
_VAL_CHAR = [chr(v + 48) if v < 40 else chr(v + 56) for v in range(64)]

# AIS text table: 0..31 -> '@' + offset, 32..63 -> ASCII as-is
AIS_TEXT_TABLE = [chr(v + 64) if v < 32 else chr(v) for v in range(64)]
_TEXT_VAL = {c: v for v, c in enumerate(AIS_TEXT_TABLE)}


class BitBuffer:
    """Immutable MSB-first bit sequence backed by a Python int."""

    __slots__ = ("value", "length")

    def __init__(self, value: int = 0, length: int = 0):
        self.value = value
        self.length = length

    def __eq__(self, other):
        return (
            isinstance(other, BitBuffer)
            and self.value == other.value
            and self.length == other.length
        )

    def __hash__(self):
        return hash((self.value, self.length))

    def __repr__(self):
        return f"BitBuffer(length={self.length})"

    def uint(self, start: int, width: int) -> int:
        if start + width > self.length:
            raise TruncatedMessage(
                f"need bits [{start}, {start + width}) but buffer has {self.length}"
            )
        return (self.value >> (self.length - start - width)) & ((1 << width) - 1)

    def sint(self, start: int, width: int) -> int:
        v = self.uint(start, width)
        if v >= 1 << (width - 1):
            v -= 1 << width
        return v

    def text(self, start: int, nchars: int) -> str:
        """Decode an AIS six-bit text field, stripping trailing '@' and spaces."""
        chars = [AIS_TEXT_TABLE[self.uint(start + 6 * i, 6)] for i in range(nchars)]
        return "".join(chars).rstrip("@ ")


class BitWriter:
    """Accumulates MSB-first fields into a BitBuffer."""

    __slots__ = ("value", "length")

    def __init__(self):
        self.value = 0
        self.length = 0

    def put(self, value: int, width: int) -> "BitWriter":
        self.value = (self.value << width) | (value & ((1 << width) - 1))
        self.length += width
        return self

    def put_text(self, text: str, nchars: int) -> "BitWriter":
        # pad with '@' (value 0) to the field width
        for i in range(nchars):
            c = text[i] if i < len(text) else "@"
            self.put(_TEXT_VAL[c], 6)
        return self

    def finish(self) -> BitBuffer:
        return BitBuffer(self.value, self.length)


def sixbit_decode(payload: str, fill_bits: int) -> BitBuffer:
    """Unarmor a payload string into a BitBuffer, truncating fill bits."""
    if not 0 <= fill_bits <= 5:
        raise PayloadCharError(str(fill_bits), -1)
    acc = 0
    for i, ch in enumerate(payload):
        o = ord(ch)
        v = _CHAR_VAL[o] if o < 256 else -1
        if v < 0:
            raise PayloadCharError(ch, i)
        acc = (acc << 6) | v
    length = 6 * len(payload) - fill_bits
    if length < 0:
        length = 0
        acc = 0
    else:
        acc >>= fill_bits
    return BitBuffer(acc, length)


def sixbit_encode(bits: BitBuffer) -> tuple[str, int]:
    """Armor a BitBuffer into (payload, fill_bits)."""
    fill = (6 - bits.length % 6) % 6
    acc = bits.value << fill
    nchars = (bits.length + fill) // 6
    chars = []
    for i in range(nchars - 1, -1, -1):
        chars.append(_VAL_CHAR[(acc >> (6 * i)) & 0x3F])
    return "".join(chars), fill


def is_text_encodable(s: str) -> bool:
    return all(c in _TEXT_VAL for c in s)
