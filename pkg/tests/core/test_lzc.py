"""Tests for the bit-exact LZ77/LZ78 code lengths."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from src.core.errors import ContractViolation
from src.core.lzc import (
    LITERAL_BITS,
    MATCH_BITS,
    MAX_MATCH,
    CompressorId,
    Literal,
    Match,
    Phrase,
    compressed_bits,
    cond_complexity_estimate,
    decode,
    encode,
    joint_bits,
    joint_complexity_estimate,
    lz77_tokens,
    lz78_phrases,
    ncd,
)

GOLDEN = Path(__file__).resolve().parents[1] / "golden" / "lzc"
EXPECTED = json.loads((GOLDEN / "expected.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("name", sorted(EXPECTED))
@pytest.mark.parametrize("compressor", list(CompressorId))
def test_golden_code_lengths(name: str, compressor: CompressorId) -> None:
    payload = (GOLDEN / name).read_bytes()
    assert compressed_bits(payload, compressor) == EXPECTED[name][compressor.value]


@pytest.mark.parametrize("name", sorted(EXPECTED))
@pytest.mark.parametrize("compressor", list(CompressorId))
def test_golden_bitstreams_decode_and_match_length(name: str, compressor: CompressorId) -> None:
    payload = (GOLDEN / name).read_bytes()
    stream = encode(payload, compressor)
    assert stream.bit_length == compressed_bits(payload, compressor)
    assert len(stream.data) == (stream.bit_length + 7) // 8
    assert decode(stream, compressor) == payload


def test_lz77_tokens_for_repeated_byte() -> None:
    assert lz77_tokens(b"AAAA") == [Literal(byte=0x41), Match(offset=1, length=3)]


def test_lz77_caps_match_length() -> None:
    tokens = lz77_tokens(b"a" * 70)
    assert tokens == [Literal(byte=0x61), Match(offset=1, length=66), Match(offset=1, length=3)]


def test_lz77_prefers_smallest_offset_on_ties() -> None:
    assert lz77_tokens(b"abcXabcYabc")[-1] == Match(offset=4, length=3)


def test_lz77_never_reaches_beyond_window() -> None:
    payload = b"xyz" + b"\x00" * 5000 + b"xyz"
    tokens = lz77_tokens(payload)
    assert max(token.offset for token in tokens if isinstance(token, Match)) <= 4095
    assert tokens[-3:] == [Literal(byte=0x78), Literal(byte=0x79), Literal(byte=0x7A)]
    assert compressed_bits(payload) == 7 * 9 + 76 * 19


def test_lz78_phrases_with_trailing_known_phrase() -> None:
    assert lz78_phrases(b"AAAA") == [
        Phrase(index=0, byte=0x41),
        Phrase(index=1, byte=0x41),
        Phrase(index=1, byte=None),
    ]


def test_string_input_is_utf8() -> None:
    assert compressed_bits("AAAA") == compressed_bits(b"AAAA")


def test_unknown_compressor_is_rejected() -> None:
    with pytest.raises(ValueError):
        compressed_bits(b"abc", "gzip")


def test_joint_bits_use_separator() -> None:
    assert joint_bits("AAAA", "AAAA") == 56
    with pytest.raises(ContractViolation):
        joint_bits(b"\xff", b"a")


def test_cond_complexity_estimate() -> None:
    assert cond_complexity_estimate("AAAA", "") == 28
    assert cond_complexity_estimate("AAAA", "AAAA") == 19
    with pytest.raises(ContractViolation):
        cond_complexity_estimate(b"a\xff", b"ctx")


def test_cond_complexity_estimate_never_negative() -> None:
    for compressor in CompressorId:
        assert cond_complexity_estimate(b"", b"some context", compressor) >= 0


def test_joint_complexity_estimate() -> None:
    assert joint_complexity_estimate(["AAAA", "AAAA"]) == joint_bits("AAAA", "AAAA")
    assert joint_complexity_estimate(["AAAA"], "AAAA") == cond_complexity_estimate("AAAA", "AAAA")


def test_ncd() -> None:
    assert ncd("", "") == 0.0
    assert ncd("AAAA", "AAAA") == pytest.approx(1.0)
    similar = ncd("0.1234567890", "0.1234567891")
    different = ncd("0.1234567890", "zyxwvutsrqpo")
    assert similar < different


def test_decode_rejects_bad_offset() -> None:
    stream = encode(b"AAAA")
    corrupt = type(stream)(data=b"\x80" + stream.data[1:], bit_length=stream.bit_length)
    with pytest.raises(ContractViolation):
        decode(corrupt)


def _random_payloads(count: int, seed: int) -> list[bytes]:
    rng = np.random.default_rng(seed)
    payloads = []
    for _ in range(count):
        size = int(rng.integers(0, 200))
        alphabet = int(rng.integers(2, 256))
        payloads.append(bytes(rng.integers(0, alphabet, size=size, dtype=np.uint8)))
    return payloads


@pytest.mark.parametrize("compressor", list(CompressorId))
def test_random_strings_round_trip(compressor: CompressorId) -> None:
    for payload in _random_payloads(500, seed=17):
        stream = encode(payload, compressor)
        assert stream.bit_length == compressed_bits(payload, compressor)
        assert decode(stream, compressor) == payload


@pytest.mark.slow
@pytest.mark.parametrize("compressor", list(CompressorId))
def test_many_random_strings_round_trip(compressor: CompressorId) -> None:
    for payload in _random_payloads(10_000, seed=29):
        assert decode(encode(payload, compressor), compressor) == payload


def _random_digits(rng: np.random.Generator, max_size: int) -> bytes:
    size = int(rng.integers(0, max_size + 1))
    return "".join(map(str, rng.integers(0, 10, size=size))).encode()


def _digit_pairs(count: int, seed: int) -> list[tuple[bytes, bytes]]:
    rng = np.random.default_rng(seed)
    return [(_random_digits(rng, 40), _random_digits(rng, 40)) for _ in range(count)]


def _golden_pairs() -> list[tuple[bytes, bytes]]:
    payloads = [(GOLDEN / name).read_bytes() for name in sorted(EXPECTED)]
    return [(left, right) for left in payloads for right in payloads]


def test_lz77_joint_bits_are_subadditive_up_to_two_tokens() -> None:
    for left, right in _digit_pairs(1000, seed=1) + _golden_pairs():
        bound = compressed_bits(left) + compressed_bits(right) + LITERAL_BITS + MATCH_BITS
        assert joint_bits(left, right) <= bound


def test_lz78_joint_bits_can_exceed_the_two_token_allowance() -> None:
    left, right = b"194954499461145552", b"3053210165751048605801206"
    separate = compressed_bits(left, CompressorId.LZ78) + compressed_bits(right, CompressorId.LZ78)
    assert separate == 117 + 165
    assert joint_bits(left, right, CompressorId.LZ78) == separate + 38


@pytest.mark.parametrize("size", [6, 7, 66, 67, 68, 69, 70, 133, 134, 500, 4096, 5000])
def test_lz77_run_cost_bound(size: int) -> None:
    for byte in (b"a", b"\x00"):
        assert compressed_bits(byte * size) <= LITERAL_BITS + MATCH_BITS * math.ceil(
            (size - 1) / MAX_MATCH
        )


def test_lz77_run_cost_bound_sweep() -> None:
    for size in range(6, 700):
        expected = LITERAL_BITS + MATCH_BITS * math.ceil((size - 1) / MAX_MATCH)
        assert compressed_bits(b"7" * size) <= expected


def test_cond_complexity_of_random_digits_given_unrelated_context() -> None:
    rng = np.random.default_rng(4)
    letters = np.array(list("abcdefghijklmnopqrstuvwxyz"))
    for _ in range(200):
        x = "".join(map(str, rng.integers(0, 10, size=10)))
        ctx = "".join(rng.choice(letters, size=int(rng.integers(1, 40))))
        bits = compressed_bits(x)
        assert bits - MATCH_BITS <= cond_complexity_estimate(x, ctx) <= bits
