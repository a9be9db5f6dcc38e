"""Exception taxonomy for the AIS line and payload decoders.

Every malformed input maps to a distinct subclass of DecodeError so that
ingest code can count and classify rejects without string matching.
"""


class DecodeError(ValueError):
    """Base class for all decode-side failures."""


class UnterminatedSentence(DecodeError):
    """Line has no `*hh` checksum suffix."""


class ChecksumMismatch(DecodeError):
    """Sentence checksum does not match its suffix."""


class TagBlockError(DecodeError):
    """Tag block is malformed or fails its checksum."""


class SentenceFormatError(DecodeError):
    """Sentence has the wrong field count or non-numeric numeric fields."""


class FragmentIndexError(DecodeError):
    """Fragment index is outside 1..fragment_count."""


class PayloadCharError(DecodeError):
    """Payload contains a character outside the armoring alphabet."""

    def __init__(self, char: str, offset: int):
        super().__init__(f"invalid armoring character {char!r} at offset {offset}")
        self.char = char
        self.offset = offset


class TruncatedMessage(DecodeError):
    """Bit buffer too short for the claimed message type."""


class FieldRangeError(DecodeError):
    """Decoded field value outside its representable range (not a sentinel)."""


class EncodeError(ValueError):
    """Field value outside the encodable range."""
