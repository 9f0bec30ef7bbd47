"""Seeded corruption models for the transmission channel.

Randomness comes from numpy's PCG64 bit generator seeded with the given
64-bit integer, so a (input, spec) pair always yields the same output.
Bit flips draw one uniform double per bit and flip where it falls below
``p``; AWGN draws one standard normal per sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .fec import BitStream
from .signal_io import AudioClip

Model = Literal["bitflip", "awgn", "lossless"]


@dataclass(frozen=True)
class ChannelSpec:
    model: Model
    seed: int
    p: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.model not in ("bitflip", "awgn", "lossless"):
            raise ValueError(f"unknown channel model {self.model!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if not self.sigma >= 0.0:
            raise ValueError("sigma must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def flip_mask(n: int, p: float, seed: int) -> np.ndarray:
    if p <= 0.0:
        return np.zeros(n, dtype=bool)
    if p >= 1.0:
        return np.ones(n, dtype=bool)
    return _rng(seed).random(n) < p


def apply_bitflip(stream: BitStream, spec: ChannelSpec) -> BitStream:
    if spec.model == "lossless":
        return BitStream(stream.bits.copy(), stream.origin)
    if spec.model != "bitflip":
        raise ValueError(f"bit channel cannot apply model {spec.model!r}")
    mask = flip_mask(stream.bits.size, spec.p, spec.seed)
    return BitStream(stream.bits ^ mask.astype(np.uint8), stream.origin)


def apply_awgn(clip: AudioClip, spec: ChannelSpec) -> AudioClip:
    if spec.model == "lossless" or (spec.model == "awgn" and spec.sigma == 0.0):
        return AudioClip(clip.samples.copy(), clip.sample_rate)
    if spec.model != "awgn":
        raise ValueError(f"sample channel cannot apply model {spec.model!r}")
    noise = _rng(spec.seed).standard_normal(clip.samples.size) * spec.sigma
    return AudioClip(np.clip(clip.samples + noise, -1.0, 1.0), clip.sample_rate)
