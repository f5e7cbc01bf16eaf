"""Bit-exact Lempel-Ziv code lengths.

Two fixed grammars are provided:

* ``LZ78``: each phrase is the longest known dictionary phrase plus one new
  byte; phrase ``k`` costs ``ceil(log2 k)`` index bits plus an 8-bit literal.
  A trailing phrase that is already in the dictionary costs
  ``ceil(log2(T + 1))`` bits where ``T`` is the number of complete phrases.
* ``LZ77``: greedy longest match over a 4095-byte window.  A literal costs
  9 bits (flag + byte), a match 19 bits (flag + 12-bit offset + 6-bit
  length, lengths 3..66).  Ties go to the smallest offset; offsets above 4095
  are never used.

The code lengths are upper bounds on description length; the encoders also
produce a real bitstream so the grammar can be checked by decoding.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from ._compat import StrEnum

from .errors import ContractViolation

__all__ = [
    "LITERAL_BITS",
    "MATCH_BITS",
    "MAX_MATCH",
    "SEPARATOR",
    "Bitstream",
    "CompressorId",
    "Literal",
    "Match",
    "Phrase",
    "compressed_bits",
    "cond_complexity_estimate",
    "decode",
    "encode",
    "joint_bits",
    "joint_complexity_estimate",
    "lz77_tokens",
    "lz78_phrases",
    "ncd",
]

SEPARATOR = 0xFF
_SEPARATOR_BYTES = bytes([SEPARATOR])

LITERAL_BITS = 9
MATCH_BITS = 19
OFFSET_BITS = 12
LENGTH_BITS = 6
MIN_MATCH = 3
MAX_MATCH = MIN_MATCH + (1 << LENGTH_BITS) - 1
MAX_OFFSET = (1 << OFFSET_BITS) - 1


class CompressorId(StrEnum):
    """Supported compressor grammars."""

    LZ78 = "lz78"
    LZ77 = "lz77"


@dataclass(slots=True, frozen=True)
class Literal:
    """LZ77 literal token."""

    byte: int


@dataclass(slots=True, frozen=True)
class Match:
    """LZ77 back-reference token."""

    offset: int
    length: int


@dataclass(slots=True, frozen=True)
class Phrase:
    """LZ78 phrase: dictionary index plus a new byte (``None`` for a trailing phrase)."""

    index: int
    byte: int | None


@dataclass(slots=True, frozen=True)
class Bitstream:
    """Serialized code: big-endian bits, zero padded to whole bytes."""

    data: bytes
    bit_length: int


class _BitWriter:
    def __init__(self) -> None:
        self._value = 0
        self._length = 0

    def write(self, value: int, width: int) -> None:
        if width == 0:
            return
        self._value = (self._value << width) | value
        self._length += width

    def getvalue(self) -> Bitstream:
        padding = (-self._length) % 8
        size = (self._length + padding) // 8
        data = (self._value << padding).to_bytes(size, "big")
        return Bitstream(data=data, bit_length=self._length)


class _BitReader:
    def __init__(self, stream: Bitstream) -> None:
        padding = len(stream.data) * 8 - stream.bit_length
        if padding < 0 or padding > 7:
            raise ContractViolation("bit length does not match the payload size")
        self._value = int.from_bytes(stream.data, "big") >> padding
        self.remaining = stream.bit_length

    def read(self, width: int) -> int:
        if width > self.remaining:
            raise ContractViolation("truncated bitstream")
        self.remaining -= width
        return (self._value >> self.remaining) & ((1 << width) - 1)


def _as_bytes(value: bytes | bytearray | str) -> bytes:
    if isinstance(value, str):
        return value.encode("utf-8")
    return bytes(value)


def _check_payload(*payloads: bytes) -> None:
    for payload in payloads:
        if SEPARATOR in payload:
            raise ContractViolation("payload contains the reserved separator byte 0xFF")


def lz77_tokens(data: bytes | bytearray | str) -> list[Literal | Match]:
    """Greedy LZ77 parse of ``data``."""

    payload = _as_bytes(data)
    size = len(payload)
    # 3-byte prefix -> starting positions, ascending.
    positions: dict[bytes, list[int]] = {}
    indexed = 0
    tokens: list[Literal | Match] = []
    cursor = 0
    while cursor < size:
        while indexed < cursor:
            key = payload[indexed : indexed + MIN_MATCH]
            if len(key) == MIN_MATCH:
                positions.setdefault(key, []).append(indexed)
            indexed += 1

        best_length = 0
        best_offset = 0
        limit = min(MAX_MATCH, size - cursor)
        if limit >= MIN_MATCH:
            for start in reversed(positions.get(payload[cursor : cursor + MIN_MATCH], ())):
                offset = cursor - start
                if offset > MAX_OFFSET:
                    break
                length = MIN_MATCH
                while length < limit and payload[start + length] == payload[cursor + length]:
                    length += 1
                if length > best_length:
                    best_length, best_offset = length, offset
                    if length == limit:
                        break

        if best_length >= MIN_MATCH:
            tokens.append(Match(offset=best_offset, length=best_length))
            cursor += best_length
        else:
            tokens.append(Literal(byte=payload[cursor]))
            cursor += 1
    return tokens


def lz78_phrases(data: bytes | bytearray | str) -> list[Phrase]:
    """LZ78 parse of ``data``."""

    dictionary: dict[bytes, int] = {b"": 0}
    phrases: list[Phrase] = []
    current = b""
    for byte in _as_bytes(data):
        candidate = current + bytes((byte,))
        if candidate in dictionary:
            current = candidate
            continue
        phrases.append(Phrase(index=dictionary[current], byte=byte))
        dictionary[candidate] = len(dictionary)
        current = b""
    if current:
        phrases.append(Phrase(index=dictionary[current], byte=None))
    return phrases


def _index_width(phrase_number: int) -> int:
    # ceil(log2 k) for the k-th phrase, which chooses among k dictionary entries.
    return (phrase_number - 1).bit_length()


def _lz78_bits(phrases: list[Phrase]) -> int:
    total = 0
    for number, phrase in enumerate(phrases, start=1):
        total += _index_width(number)
        if phrase.byte is not None:
            total += 8
    return total


def compressed_bits(s: bytes | bytearray | str, c: CompressorId | str = CompressorId.LZ77) -> int:
    """Return the code length of ``s`` in bits under compressor ``c``."""

    compressor = CompressorId(c)
    if compressor is CompressorId.LZ78:
        return _lz78_bits(lz78_phrases(s))
    return sum(
        LITERAL_BITS if isinstance(token, Literal) else MATCH_BITS for token in lz77_tokens(s)
    )


def encode(s: bytes | bytearray | str, c: CompressorId | str = CompressorId.LZ77) -> Bitstream:
    """Serialize ``s`` under compressor ``c``."""

    compressor = CompressorId(c)
    writer = _BitWriter()
    if compressor is CompressorId.LZ78:
        for number, phrase in enumerate(lz78_phrases(s), start=1):
            writer.write(phrase.index, _index_width(number))
            if phrase.byte is not None:
                writer.write(phrase.byte, 8)
        return writer.getvalue()

    for token in lz77_tokens(s):
        if isinstance(token, Literal):
            writer.write(0, 1)
            writer.write(token.byte, 8)
        else:
            writer.write(1, 1)
            writer.write(token.offset, OFFSET_BITS)
            writer.write(token.length - MIN_MATCH, LENGTH_BITS)
    return writer.getvalue()


def _decode_lz77(reader: _BitReader) -> bytes:
    output = bytearray()
    while reader.remaining:
        if reader.read(1) == 0:
            output.append(reader.read(8))
            continue
        offset = reader.read(OFFSET_BITS)
        length = reader.read(LENGTH_BITS) + MIN_MATCH
        if offset == 0 or offset > len(output):
            raise ContractViolation(f"invalid back-reference offset {offset}")
        for _ in range(length):
            output.append(output[-offset])
    return bytes(output)


def _decode_lz78(reader: _BitReader) -> bytes:
    entries = [b""]
    output = bytearray()
    number = 1
    while reader.remaining:
        width = _index_width(number)
        index = reader.read(width)
        if index >= len(entries):
            raise ContractViolation(f"invalid dictionary index {index}")
        if reader.remaining < 8:
            # trailing phrase already present in the dictionary
            output += entries[index]
            break
        entry = entries[index] + bytes((reader.read(8),))
        entries.append(entry)
        output += entry
        number += 1
    return bytes(output)


def decode(stream: Bitstream, c: CompressorId | str = CompressorId.LZ77) -> bytes:
    """Invert :func:`encode`."""

    reader = _BitReader(stream)
    if CompressorId(c) is CompressorId.LZ78:
        return _decode_lz78(reader)
    return _decode_lz77(reader)


def joint_bits(
    a: bytes | bytearray | str,
    b: bytes | bytearray | str,
    c: CompressorId | str = CompressorId.LZ77,
) -> int:
    """Return ``compressed_bits(a ⧺ 0xFF ⧺ b)``."""

    left, right = _as_bytes(a), _as_bytes(b)
    _check_payload(left, right)
    return compressed_bits(left + _SEPARATOR_BYTES + right, c)


def cond_complexity_estimate(
    x: bytes | bytearray | str,
    ctx: bytes | bytearray | str,
    c: CompressorId | str = CompressorId.LZ77,
) -> int:
    """Estimate the conditional complexity of ``x`` given ``ctx`` in bits.

    ``R(ctx ⧺ 0xFF ⧺ x) − R(ctx ⧺ 0xFF)`` clamped at zero; an empty context
    reduces to ``R(x)``.
    """

    payload, context = _as_bytes(x), _as_bytes(ctx)
    _check_payload(payload, context)
    if not context:
        return max(0, compressed_bits(payload, c))
    prefix = context + _SEPARATOR_BYTES
    return max(0, compressed_bits(prefix + payload, c) - compressed_bits(prefix, c))


def joint_complexity_estimate(
    parts: Sequence[bytes | bytearray | str],
    ctx: bytes | bytearray | str = b"",
    c: CompressorId | str = CompressorId.LZ77,
) -> int:
    """Complexity estimate of the 0xFF-joined ``parts`` given ``ctx``."""

    payloads = [_as_bytes(part) for part in parts]
    context = _as_bytes(ctx)
    _check_payload(context, *payloads)
    joined = _SEPARATOR_BYTES.join(payloads)
    if not context:
        return compressed_bits(joined, c)
    prefix = context + _SEPARATOR_BYTES
    return max(0, compressed_bits(prefix + joined, c) - compressed_bits(prefix, c))


def ncd(
    a: bytes | bytearray | str,
    b: bytes | bytearray | str,
    c: CompressorId | str = CompressorId.LZ77,
) -> float:
    """Normalized compression distance of ``a`` and ``b`` under the same grammar."""

    left, right = _as_bytes(a), _as_bytes(b)
    left_bits = compressed_bits(left, c)
    right_bits = compressed_bits(right, c)
    largest = max(left_bits, right_bits)
    if largest == 0:
        return 0.0
    return (joint_bits(left, right, c) - min(left_bits, right_bits)) / largest
