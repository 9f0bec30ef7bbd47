"""Carrier file formats: PCM16 mono WAV, binary PGM and the float-grid file.

All math in the toolkit runs on normalized floats; this module owns the
conversion to and from 16-bit PCM words.
"""

from __future__ import annotations

import os
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import IoFailure, MalformedFile, UnsupportedFormat

PathLike = Union[str, "os.PathLike[str]"]

PCM_SCALE = 32768.0
WAV_HEADER_SIZE = 44
GRID_MAGIC = b"DCTF"
GRID_HEADER = struct.Struct("<4sIII")  # magic, width, height, reserved

_UMASK = os.umask(0)
os.umask(_UMASK)


@dataclass(eq=False)
class PcmBuffer:
    words: np.ndarray  # int16
    sample_rate: int

    def __post_init__(self):
        words = np.asarray(self.words)
        if words.size and (words.min() < -32768 or words.max() > 32767):
            raise ValueError("PCM word outside the signed 16-bit range")
        self.words = words.astype(np.int16).ravel()
        if int(self.sample_rate) <= 0:
            raise ValueError("sample_rate must be positive")
        self.sample_rate = int(self.sample_rate)

    def __len__(self):
        return self.words.size

    def __eq__(self, other):
        if not isinstance(other, PcmBuffer):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(self.words, other.words)


@dataclass(eq=False)
class AudioClip:
    samples: np.ndarray  # float64, nominally in [-1, 1]
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64).ravel()
        if int(self.sample_rate) <= 0:
            raise ValueError("sample_rate must be positive")
        self.sample_rate = int(self.sample_rate)

    def __len__(self):
        return self.samples.size

    def __eq__(self, other):
        if not isinstance(other, AudioClip):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(self.samples, other.samples)


@dataclass(eq=False)
class GrayImage:
    width: int
    height: int
    pixels: np.ndarray  # uint8, row-major, length width*height

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")
        pixels = np.asarray(self.pixels)
        if pixels.size != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {pixels.size}")
        if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
            raise ValueError("pixel value outside [0, 255]")
        self.pixels = pixels.astype(np.uint8).ravel()

    @classmethod
    def from_array(cls, grid) -> "GrayImage":
        grid = np.asarray(grid)
        if grid.ndim != 2:
            raise ValueError("expected a 2-D pixel array")
        return cls(width=grid.shape[1], height=grid.shape[0], pixels=grid.ravel())

    def to_array(self) -> np.ndarray:
        """Pixels as a (height, width) uint8 array."""
        return self.pixels.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and np.array_equal(
            self.pixels, other.pixels)


# --------- conversions ---------

def pcm_to_float(buf: PcmBuffer) -> AudioClip:
    return AudioClip(buf.words.astype(np.float64) / PCM_SCALE, buf.sample_rate)


def float_to_pcm(clip: AudioClip) -> PcmBuffer:
    # np.rint rounds half to even; ties are rare enough not to matter here
    words = np.clip(np.rint(clip.samples * PCM_SCALE), -32768, 32767)
    return PcmBuffer(words.astype(np.int16), clip.sample_rate)


def quantize(clip: AudioClip) -> AudioClip:
    """Project a clip onto the PCM16 grid (clamp and round)."""
    return pcm_to_float(float_to_pcm(clip))


# --------- atomic file output ---------

def atomic_write(path: PathLike, data: bytes) -> None:
    """Write ``data`` to a temp file next to ``path`` and rename it into place."""
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.chmod(tmp, 0o666 & ~_UMASK)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_bytes(path: PathLike) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror or exc}") from exc


# --------- WAV ---------

def parse_wav(data: bytes) -> PcmBuffer:
    """Parse an in-memory RIFF/WAVE file holding PCM16 mono samples.

    Chunks other than ``fmt `` and ``data`` are skipped. The RIFF size field
    is not trusted, since many writers get it wrong; chunk sizes are.
    """
    if len(data) < 12:
        raise MalformedFile("file too short for a RIFF header")
    riff, _, wave = struct.unpack_from("<4sI4s", data, 0)
    if riff != b"RIFF" or wave != b"WAVE":
        raise MalformedFile("missing RIFF/WAVE magic")

    fmt = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id, size = struct.unpack_from("<4sI", data, pos)
        body = pos + 8
        if body + size > len(data):
            raise MalformedFile(f"chunk {chunk_id!r} runs past end of file")
        if chunk_id == b"fmt ":
            if size < 16:
                raise MalformedFile("fmt chunk shorter than 16 bytes")
            fmt = struct.unpack_from("<HHIIHH", data, body)
        elif chunk_id == b"data":
            if fmt is None:
                raise MalformedFile("data chunk precedes fmt chunk")
            code, channels, rate, _, _, bits = fmt
            if code != 1:
                raise UnsupportedFormat(f"format code {code} is not integer PCM")
            if channels != 1:
                raise UnsupportedFormat(f"{channels} channels; only mono is supported")
            if bits != 16:
                raise UnsupportedFormat(f"{bits} bits/sample; only 16 is supported")
            if rate == 0:
                raise MalformedFile("sample rate is zero")
            if size % 2:
                raise MalformedFile("data chunk holds a partial sample")
            words = np.frombuffer(data, dtype="<i2", count=size // 2, offset=body)
            return PcmBuffer(words.astype(np.int16), rate)
        pos = body + size + (size & 1)
    if fmt is None:
        raise MalformedFile("no fmt chunk")
    raise MalformedFile("no data chunk")


def serialize_wav(buf: PcmBuffer) -> bytes:
    """Canonical 44-byte-header PCM16 mono encoding of ``buf``."""
    payload = buf.words.astype("<i2").tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(payload), b"WAVE",
        b"fmt ", 16, 1, 1, buf.sample_rate, buf.sample_rate * 2, 2, 16,
        b"data", len(payload),
    )
    return header + payload


def read_wav(path: PathLike) -> PcmBuffer:
    return parse_wav(read_bytes(path))


def write_wav(buf: PcmBuffer, path: PathLike) -> None:
    atomic_write(path, serialize_wav(buf))


def read_audio(path: PathLike) -> AudioClip:
    return pcm_to_float(read_wav(path))


def write_audio(clip: AudioClip, path: PathLike) -> None:
    write_wav(float_to_pcm(clip), path)


# --------- PGM ---------

def _pgm_tokens(data: bytes, count: int, pos: int):
    """Pull ``count`` whitespace-separated header tokens, skipping comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and (data[pos:pos + 1].isspace() or data[pos:pos + 1] == b"#"):
            if data[pos:pos + 1] == b"#":
                while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise MalformedFile("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def parse_pgm(data: bytes) -> GrayImage:
    """Parse a binary (P5) PGM with maxval 255."""
    magic = data[:2]
    if magic == b"P2":
        raise UnsupportedFormat("ASCII PGM (P2) is not supported")
    if magic != b"P5":
        raise MalformedFile("missing P5 magic")
    tokens, pos = _pgm_tokens(data, 3, 2)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise MalformedFile("non-numeric PGM header field") from None
    if maxval != 255:
        raise UnsupportedFormat(f"maxval {maxval}; only 255 is supported")
    if width <= 0 or height <= 0:
        raise MalformedFile("non-positive image dimensions")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise MalformedFile("missing raster separator")
    pos += 1
    count = width * height
    if len(data) - pos < count:
        raise MalformedFile(f"raster holds {len(data) - pos} of {count} bytes")
    pixels = np.frombuffer(data, dtype=np.uint8, count=count, offset=pos)
    return GrayImage(width, height, pixels.copy())


def serialize_pgm(img: GrayImage) -> bytes:
    return b"P5\n%d %d\n255\n" % (img.width, img.height) + img.pixels.tobytes()


def read_pgm(path: PathLike) -> GrayImage:
    return parse_pgm(read_bytes(path))


def write_pgm(img: GrayImage, path: PathLike) -> None:
    atomic_write(path, serialize_pgm(img))


# --------- float grid ---------

def parse_grid(data: bytes) -> np.ndarray:
    """Decode a ``DCTF`` float64 grid into a (height, width) array."""
    if len(data) < GRID_HEADER.size:
        raise MalformedFile("file too short for a float-grid header")
    magic, width, height, _ = GRID_HEADER.unpack_from(data, 0)
    if magic != GRID_MAGIC:
        raise MalformedFile("missing DCTF magic")
    if width == 0 or height == 0:
        raise MalformedFile("non-positive grid dimensions")
    expected = GRID_HEADER.size + 8 * width * height
    if len(data) != expected:
        raise MalformedFile(f"grid payload is {len(data)} bytes, expected {expected}")
    grid = np.frombuffer(data, dtype="<f8", count=width * height, offset=GRID_HEADER.size)
    return grid.astype(np.float64).reshape(height, width)


def serialize_grid(grid) -> bytes:
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2 or grid.size == 0:
        raise ValueError("expected a non-empty 2-D grid")
    height, width = grid.shape
    return GRID_HEADER.pack(GRID_MAGIC, width, height, 0) + grid.astype("<f8").tobytes()


def read_grid(path: PathLike) -> np.ndarray:
    return parse_grid(read_bytes(path))


def write_grid(grid, path: PathLike) -> None:
    atomic_write(path, serialize_grid(grid))
