"""Embed/extract pairs for the four watermarking schemes.

* ``interleave``: watermark samples are inserted between cover samples at a
  fixed stride.
* ``dct_audio_audio``: the top ``wm_len`` DCT coefficients of the cover audio
  are replaced by ``alpha`` times the DCT of the watermark audio.
* ``audio_in_image``: the last ``wm_len`` zigzag-ordered 2-D DCT
  coefficients of the cover image (pixel scale 0..255) are replaced by
  ``alpha`` times the DCT of the watermark audio.
* ``image_in_audio``: the top ``W*H`` DCT coefficients of the cover audio are
  replaced by ``alpha`` times the zigzag-scanned 2-D DCT of the watermark
  image, with pixels normalized to [0, 1].

Extraction is cover-free but needs the :class:`EmbedKey` produced by the
embed call.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from .errors import KeyMismatch, WatermarkTooLong
from .metrics import FidelityReport, fidelity, mse
from .signal_io import AudioClip, GrayImage
from .transform import dct1d, dct2d, idct1d, idct2d, zigzag_scan, zigzag_unscan

SCHEMES = ("interleave", "dct_audio_audio", "audio_in_image", "image_in_audio")


def _format_alpha(alpha: float) -> str:
    return np.format_float_positional(alpha, unique=True, trim="0")


@dataclass(frozen=True)
class EmbedKey:
    """Geometry needed to pull a watermark back out of a marked carrier.

    ``sample_rate`` is the watermark's rate for audio watermarks and the
    cover's rate for ``image_in_audio``. Image dimensions are 0 for schemes
    without an image.
    """

    scheme: str
    cover_len: int
    wm_len: int
    stride: int
    alpha: float = 1.0
    img_width: int = 0
    img_height: int = 0
    sample_rate: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise KeyMismatch(f"unknown scheme {self.scheme!r}")
        if self.cover_len < 1 or self.wm_len < 1:
            raise KeyMismatch("key lengths must be positive")
        if self.wm_len > self.cover_len:
            raise KeyMismatch("key wm_len exceeds cover_len")
        if self.stride != self.cover_len // self.wm_len:
            raise KeyMismatch("key stride is inconsistent with cover_len / wm_len")
        if not self.alpha > 0 or not np.isfinite(self.alpha):
            raise KeyMismatch("key alpha must be a positive finite number")
        if self.sample_rate < 0:
            raise KeyMismatch("key sample_rate must be non-negative")
        pixels = self.img_width * self.img_height
        if self.scheme == "audio_in_image" and (pixels != self.cover_len or self.img_width < 1):
            raise KeyMismatch("image dimensions do not match cover_len")
        if self.scheme == "image_in_audio" and (pixels != self.wm_len or self.img_width < 1):
            raise KeyMismatch("image dimensions do not match wm_len")
        if self.scheme in ("interleave", "dct_audio_audio") and (self.img_width or self.img_height):
            raise KeyMismatch(f"{self.scheme} key carries image dimensions")

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name}={_format_alpha(value) if f.name == 'alpha' else value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EmbedKey":
        names = [f.name for f in fields(cls)]
        values = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            name, sep, value = line.partition("=")
            name, value = name.strip(), value.strip()
            if not sep:
                raise KeyMismatch(f"key line {lineno} is not name=value")
            if name not in names:
                raise KeyMismatch(f"unknown key field {name!r}")
            if name in values:
                raise KeyMismatch(f"duplicate key field {name!r}")
            values[name] = value
        missing = [n for n in names if n not in values]
        if missing:
            raise KeyMismatch(f"key is missing {', '.join(missing)}")
        try:
            parsed = {n: values[n] if n == "scheme" else
                      float(values[n]) if n == "alpha" else int(values[n]) for n in names}
        except ValueError as exc:
            raise KeyMismatch(f"bad key value: {exc}") from None
        return cls(**parsed)


def _require(key: EmbedKey, scheme: str):
    if key.scheme != scheme:
        raise KeyMismatch(f"key is for scheme {key.scheme!r}, not {scheme!r}")


def _check_capacity(wm_len: int, bound: int, what: str):
    if wm_len < 1:
        raise WatermarkTooLong("watermark is empty")
    if wm_len > bound:
        raise WatermarkTooLong(
            f"watermark has {wm_len} {what} but the cover holds at most {bound}")


def _check_alpha(alpha: float):
    if not alpha > 0 or not np.isfinite(alpha):
        raise ValueError("alpha must be a positive finite number")


# --------- interleaving ---------

def interleave_positions(cover_len: int, wm_len: int) -> np.ndarray:
    """Indices in the marked signal that hold watermark samples."""
    k = cover_len // wm_len
    j = np.arange(wm_len)
    return (j + 1) * k + j


def embed_interleave(cover: AudioClip, wm: AudioClip) -> tuple[AudioClip, EmbedKey]:
    nc, nw = len(cover), len(wm)
    _check_capacity(nw, nc, "samples")
    key = EmbedKey("interleave", nc, nw, nc // nw, sample_rate=wm.sample_rate)
    marked = np.empty(nc + nw)
    is_wm = np.zeros(nc + nw, dtype=bool)
    is_wm[interleave_positions(nc, nw)] = True
    marked[is_wm] = wm.samples
    marked[~is_wm] = cover.samples
    return AudioClip(marked, cover.sample_rate), key


def extract_interleave(marked: AudioClip, key: EmbedKey) -> tuple[AudioClip, AudioClip]:
    """Split a marked clip into (watermark, cover)."""
    _require(key, "interleave")
    if len(marked) != key.cover_len + key.wm_len:
        raise KeyMismatch(
            f"marked clip has {len(marked)} samples, key expects {key.cover_len + key.wm_len}")
    is_wm = np.zeros(len(marked), dtype=bool)
    is_wm[interleave_positions(key.cover_len, key.wm_len)] = True
    wm_rate = key.sample_rate or marked.sample_rate
    return (AudioClip(marked.samples[is_wm], wm_rate),
            AudioClip(marked.samples[~is_wm], marked.sample_rate))


# --------- DCT audio in audio ---------

def embed_dct_aa(cover: AudioClip, wm: AudioClip, alpha: float = 1.0) -> tuple[AudioClip, EmbedKey]:
    nc, nw = len(cover), len(wm)
    _check_capacity(nw, nc, "samples")
    _check_alpha(alpha)
    spec = dct1d(cover.samples)
    spec[nc - nw:] = alpha * dct1d(wm.samples)
    key = EmbedKey("dct_audio_audio", nc, nw, nc // nw, alpha, sample_rate=wm.sample_rate)
    return AudioClip(idct1d(spec), cover.sample_rate), key


def extract_dct_aa(marked: AudioClip, key: EmbedKey) -> AudioClip:
    _require(key, "dct_audio_audio")
    if len(marked) != key.cover_len:
        raise KeyMismatch(f"marked clip has {len(marked)} samples, key expects {key.cover_len}")
    tail = dct1d(marked.samples)[key.cover_len - key.wm_len:] / key.alpha
    return AudioClip(idct1d(tail), key.sample_rate or marked.sample_rate)


# --------- audio in image ---------

def embed_audio_in_image(cover: GrayImage, wm: AudioClip,
                         alpha: float = 1.0) -> tuple[np.ndarray, EmbedKey]:
    """Returns the marked image as a float grid of shape (height, width).

    The grid is not rounded: 8-bit rendering (:func:`render_grid`) is a
    separate, lossy step.
    """
    n_pixels = cover.width * cover.height
    nw = len(wm)
    _check_capacity(nw, n_pixels, "samples")
    _check_alpha(alpha)
    z = zigzag_scan(dct2d(cover.to_array().astype(np.float64)))
    z[n_pixels - nw:] = alpha * dct1d(wm.samples)
    grid = idct2d(zigzag_unscan(z, cover.height, cover.width))
    key = EmbedKey("audio_in_image", n_pixels, nw, n_pixels // nw, alpha,
                   cover.width, cover.height, wm.sample_rate)
    return grid, key


def render_grid(grid) -> GrayImage:
    """Round and clamp a float grid to an 8-bit image."""
    g = np.clip(np.rint(np.asarray(grid, dtype=np.float64)), 0, 255)
    return GrayImage.from_array(g.astype(np.uint8))


def extract_audio_in_image(marked: Union[np.ndarray, GrayImage], key: EmbedKey) -> AudioClip:
    _require(key, "audio_in_image")
    if isinstance(marked, GrayImage):
        marked = marked.to_array()
    grid = np.asarray(marked, dtype=np.float64)
    if grid.shape != (key.img_height, key.img_width):
        raise KeyMismatch(
            f"marked grid is {grid.shape}, key expects {(key.img_height, key.img_width)}")
    tail = zigzag_scan(dct2d(grid))[key.cover_len - key.wm_len:] / key.alpha
    return AudioClip(idct1d(tail), key.sample_rate or 1)


# --------- image in audio ---------

def embed_image_in_audio(cover: AudioClip, wm: GrayImage,
                         alpha: float = 1.0) -> tuple[AudioClip, EmbedKey]:
    nc = len(cover)
    nw = wm.width * wm.height
    _check_capacity(nw, nc, "pixels")
    _check_alpha(alpha)
    coeffs = zigzag_scan(dct2d(wm.to_array() / 255.0))
    spec = dct1d(cover.samples)
    spec[nc - nw:] = alpha * coeffs
    key = EmbedKey("image_in_audio", nc, nw, nc // nw, alpha,
                   wm.width, wm.height, cover.sample_rate)
    return AudioClip(idct1d(spec), cover.sample_rate), key


def extract_image_in_audio(marked: AudioClip, key: EmbedKey) -> GrayImage:
    _require(key, "image_in_audio")
    if len(marked) != key.cover_len:
        raise KeyMismatch(f"marked clip has {len(marked)} samples, key expects {key.cover_len}")
    tail = dct1d(marked.samples)[key.cover_len - key.wm_len:] / key.alpha
    normalized = idct2d(zigzag_unscan(tail, key.img_height, key.img_width))
    return render_grid(normalized * 255.0)


# --------- dispatch and distortion ---------

def embed(scheme: str, cover, wm, alpha: float = 1.0):
    if scheme == "interleave":
        return embed_interleave(cover, wm)
    if scheme == "dct_audio_audio":
        return embed_dct_aa(cover, wm, alpha)
    if scheme == "audio_in_image":
        return embed_audio_in_image(cover, wm, alpha)
    if scheme == "image_in_audio":
        return embed_image_in_audio(cover, wm, alpha)
    raise ValueError(f"unknown scheme {scheme!r}")


def extract(marked, key: EmbedKey):
    """Recover the watermark alone, whatever the scheme."""
    if key.scheme == "interleave":
        return extract_interleave(marked, key)[0]
    return {
        "dct_audio_audio": extract_dct_aa,
        "audio_in_image": extract_audio_in_image,
        "image_in_audio": extract_image_in_audio,
    }[key.scheme](marked, key)


def _values(carrier) -> np.ndarray:
    if isinstance(carrier, AudioClip):
        return carrier.samples
    if isinstance(carrier, GrayImage):
        return carrier.to_array().astype(np.float64)
    return np.asarray(carrier, dtype=np.float64)


def embedding_distortion(cover, marked, key: EmbedKey) -> FidelityReport:
    """MSE/SNR of the marked carrier against its cover.

    For interleaving the marked clip is longer than the cover, so the
    comparison drops the inserted positions (MSE 0 by construction); the
    leading-prefix MSE is kept as ``prefix_mse`` for reference.
    """
    c = _values(cover).ravel()
    m = _values(marked).ravel()
    if key.scheme == "interleave":
        if c.size != key.cover_len or m.size != key.cover_len + key.wm_len:
            raise KeyMismatch("cover/marked lengths do not match the interleave key")
        keep = np.ones(m.size, dtype=bool)
        keep[interleave_positions(key.cover_len, key.wm_len)] = False
        return fidelity(c, m[keep], prefix_mse=mse(c, m[:c.size]))
    if c.size != key.cover_len or m.size != key.cover_len:
        raise KeyMismatch("cover/marked sizes do not match the key")
    return fidelity(c, m)
