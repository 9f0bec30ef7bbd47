"""Hamming(15,11) protection of a PCM16 bitstream.

Codeword bit ``i`` (0-based) sits at Hamming position ``i + 1``. Parity bits
occupy positions 1, 2, 4 and 8; data fills the rest in ascending order. With
this layout the syndrome of a received word is the position of a single
flipped bit.

Stream layout produced by :func:`protect`::

    [ 3 blocks: 32-bit big-endian payload bit count, 1 pad bit ]  45 bits
    [ ceil(count / 11) blocks of payload, zero padded ]            15 bits each

On disk the stream is packed MSB-first into bytes with a zero-padded tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import BadBlockSize, MalformedStream
from .signal_io import PcmBuffer

N_CODE = 15
K_DATA = 11
HEADER_BITS = 32
HEADER_BLOCKS = 3
HEADER_CODE_BITS = HEADER_BLOCKS * N_CODE

_POSITIONS = np.arange(1, N_CODE + 1)
PARITY_POSITIONS = (1, 2, 4, 8)
DATA_POSITIONS = tuple(int(p) for p in _POSITIONS if p & (p - 1))
_DATA_IDX = np.asarray(DATA_POSITIONS) - 1

# row r of the check matrix: which positions have bit r set
CHECK_MATRIX = np.array([(_POSITIONS >> r) & 1 for r in range(4)], dtype=np.uint8)


def _generator() -> np.ndarray:
    g = np.zeros((K_DATA, N_CODE), dtype=np.uint8)
    for row, pos in enumerate(DATA_POSITIONS):
        g[row, pos - 1] = 1
        for r, p in enumerate(PARITY_POSITIONS):
            if pos & p:
                g[row, p - 1] = 1
    return g


GENERATOR = _generator()


@dataclass(eq=False)
class BitStream:
    bits: np.ndarray  # uint8 values 0/1
    origin: Literal["pcm16-msb-first", "raw"] = "raw"

    def __post_init__(self):
        bits = np.asarray(self.bits).ravel()
        if bits.size and not np.isin(bits, (0, 1)).all():
            raise ValueError("bit values must be 0 or 1")
        self.bits = bits.astype(np.uint8)
        if self.origin == "pcm16-msb-first" and self.bits.size % 16:
            raise ValueError("PCM16 bitstream length must be a multiple of 16")

    def __len__(self):
        return self.bits.size

    def __eq__(self, other):
        if not isinstance(other, BitStream):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)


# --------- block code ---------

def encode_blocks(data: np.ndarray) -> np.ndarray:
    """Encode a (k, 11) array of data bits into a (k, 15) codeword array."""
    data = np.asarray(data, dtype=np.uint8)
    if data.ndim != 2 or data.shape[1] != K_DATA:
        raise BadBlockSize(f"expected rows of {K_DATA} bits, got shape {data.shape}")
    return (data.astype(np.int64) @ GENERATOR % 2).astype(np.uint8)


def syndromes(codewords: np.ndarray) -> np.ndarray:
    """Error position (1..15) per row, 0 for a valid codeword."""
    checks = codewords.astype(np.int64) @ CHECK_MATRIX.T % 2
    return checks @ (1 << np.arange(4))


def decode_blocks(codewords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Correct up to one error per row; returns (data bits, corrected positions)."""
    cw = np.array(codewords, dtype=np.uint8)
    if cw.ndim != 2 or cw.shape[1] != N_CODE:
        raise BadBlockSize(f"expected rows of {N_CODE} bits, got shape {cw.shape}")
    pos = syndromes(cw)
    rows = np.nonzero(pos)[0]
    cw[rows, pos[rows] - 1] ^= 1
    return cw[:, _DATA_IDX], pos


def hamming_encode_block(data) -> list[int]:
    bits = np.asarray(data).ravel()
    if bits.size != K_DATA:
        raise BadBlockSize(f"expected {K_DATA} data bits, got {bits.size}")
    return encode_blocks(bits[None, :])[0].tolist()


def hamming_decode_block(codeword) -> tuple[list[int], int]:
    bits = np.asarray(codeword).ravel()
    if bits.size != N_CODE:
        raise BadBlockSize(f"expected {N_CODE} code bits, got {bits.size}")
    data, pos = decode_blocks(bits[None, :])
    return data[0].tolist(), int(pos[0])


# --------- PCM <-> bits ---------

def words_to_bits(words) -> np.ndarray:
    raw = np.asarray(words, dtype=np.int16).astype(">i2").view(np.uint8)
    return np.unpackbits(raw)


def bits_to_words(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % 16:
        raise MalformedStream("bit count is not a multiple of 16")
    return np.packbits(bits).view(">i2").astype(np.int16)


def _blocks(bits: np.ndarray) -> np.ndarray:
    k = -(-bits.size // K_DATA)
    padded = np.zeros(k * K_DATA, dtype=np.uint8)
    padded[:bits.size] = bits
    return padded.reshape(k, K_DATA)


def _header_bits(count: int) -> np.ndarray:
    return np.array([(count >> (HEADER_BITS - 1 - i)) & 1 for i in range(HEADER_BITS)],
                    dtype=np.uint8)


def protect(buf: PcmBuffer) -> BitStream:
    payload = words_to_bits(buf.words)
    header = encode_blocks(_blocks(_header_bits(payload.size)))
    body = encode_blocks(_blocks(payload)) if payload.size else np.zeros((0, N_CODE), np.uint8)
    return BitStream(np.concatenate([header.ravel(), body.ravel()]), "raw")


@dataclass(frozen=True)
class DecodeStats:
    corrected_blocks: int
    total_blocks: int


def unprotect_with_stats(stream: BitStream, sample_rate: int = 44100) -> tuple[PcmBuffer, DecodeStats]:
    bits = stream.bits
    if bits.size < HEADER_CODE_BITS or (bits.size - HEADER_CODE_BITS) % N_CODE:
        raise MalformedStream(
            f"stream length {bits.size} is not {HEADER_CODE_BITS} + 15k")
    k = (bits.size - HEADER_CODE_BITS) // N_CODE
    head, head_pos = decode_blocks(bits[:HEADER_CODE_BITS].reshape(HEADER_BLOCKS, N_CODE))
    count = 0
    for b in head.ravel()[:HEADER_BITS]:
        count = (count << 1) | int(b)
    if -(-count // K_DATA) != k or count % 16:
        raise MalformedStream(
            f"header announces {count} payload bits but the stream holds {k} blocks")
    if k:
        data, pos = decode_blocks(bits[HEADER_CODE_BITS:].reshape(k, N_CODE))
        payload = data.ravel()[:count]
    else:
        pos = np.zeros(0, dtype=np.int64)
        payload = np.zeros(0, dtype=np.uint8)
    stats = DecodeStats(int(np.count_nonzero(head_pos)) + int(np.count_nonzero(pos)),
                        HEADER_BLOCKS + k)
    return PcmBuffer(bits_to_words(payload), sample_rate), stats


def unprotect(stream: BitStream, sample_rate: int = 44100) -> PcmBuffer:
    return unprotect_with_stats(stream, sample_rate)[0]


# --------- on-disk packing ---------

def stream_to_bytes(stream: BitStream) -> bytes:
    return np.packbits(stream.bits).tobytes()


def stream_from_bytes(data: bytes) -> BitStream:
    """Recover a protected stream from packed bytes.

    The stream length is 45 + 15k and the tail pad is under 8 bits, so at
    most one k fits a given byte count.
    """
    total = 8 * len(data)
    if total < HEADER_CODE_BITS:
        raise MalformedStream("file too short for a protected stream header")
    k = (total - HEADER_CODE_BITS) // N_CODE
    length = HEADER_CODE_BITS + N_CODE * k
    if total - length >= 8:
        raise MalformedStream(f"{len(data)} bytes cannot hold a 45 + 15k bit stream")
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:length]
    return BitStream(bits, "raw")
