"""AIS transport decoding: NMEA sentences, NM4 tag blocks, payload codecs."""

from .armor import AIS_TEXT_TABLE, BitBuffer, BitWriter, sixbit_decode, sixbit_encode
from .errors import (
    ChecksumMismatch,
    DecodeError,
    EncodeError,
    FieldRangeError,
    FragmentIndexError,
    PayloadCharError,
    SentenceFormatError,
    TagBlockError,
    TruncatedMessage,
    UnterminatedSentence,
)
from .messages import (
    DecodedMessage,
    PositionReportA,
    PositionReportB,
    StaticDataReportA,
    StaticDataReportB,
    StaticVoyage,
    SUPPORTED_TYPES,
    Unsupported,
    decode_message,
    encode_bits,
)
from .nmea import (
    FragmentAssembler,
    SentenceFragment,
    StreamDecoder,
    TagBlock,
    encode_message,
    encode_nm4_line,
    nmea_checksum,
    parse_sentence,
    parse_tag_block,
    validate_checksum,
)
from .sources import SourceError, SourceStats, decode_source, guess_format

__all__ = [
    "AIS_TEXT_TABLE",
    "BitBuffer",
    "BitWriter",
    "ChecksumMismatch",
    "DecodeError",
    "DecodedMessage",
    "EncodeError",
    "FieldRangeError",
    "FragmentAssembler",
    "FragmentIndexError",
    "PayloadCharError",
    "PositionReportA",
    "PositionReportB",
    "SentenceFormatError",
    "SentenceFragment",
    "SourceError",
    "SourceStats",
    "StaticDataReportA",
    "StaticDataReportB",
    "StaticVoyage",
    "StreamDecoder",
    "SUPPORTED_TYPES",
    "TagBlock",
    "TagBlockError",
    "TruncatedMessage",
    "Unsupported",
    "UnterminatedSentence",
    "decode_message",
    "decode_source",
    "encode_bits",
    "encode_message",
    "encode_nm4_line",
    "guess_format",
    "nmea_checksum",
    "parse_sentence",
    "parse_tag_block",
    "sixbit_decode",
    "sixbit_encode",
    "validate_checksum",
]
