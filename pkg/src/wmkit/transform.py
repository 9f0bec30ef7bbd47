"""Orthonormal DCT-II / inverse in one and two dimensions, and zigzag ordering.

Forward transform::

    F(u) = sqrt(2/N) * A(u) * sum_i cos(u (2i+1) pi / 2N) * f(i),   A(0) = 1/sqrt(2), else 1

With the normalization tied to the frequency index the transform matrix is
orthogonal, so the inverse is its transpose and energy is preserved.

Two evaluation paths exist. ``method="direct"`` multiplies by the explicit
cosine matrix (O(N^2), the reference). ``method="fast"`` reorders the input
and uses a single complex FFT (O(N log N)). ``"auto"`` picks the direct path
for short inputs.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, EmptyInput

DIRECT_MAX_N = 64


@lru_cache(maxsize=32)
def dct_matrix(n: int) -> np.ndarray:
    """The N x N orthonormal DCT-II matrix; row u holds frequency u."""
    u = np.arange(n, dtype=np.int64)[:, None]
    i = np.arange(n, dtype=np.int64)[None, :]
    # cos has period 4N in the integer phase u(2i+1); reducing it keeps arguments small
    phase = (u * (2 * i + 1)) % (4 * n)
    m = np.sqrt(2.0 / n) * np.cos(np.pi * phase / (2 * n))
    m[0] /= np.sqrt(2.0)
    m.setflags(write=False)
    return m


def _scale(n: int) -> np.ndarray:
    s = np.full(n, np.sqrt(2.0 / n))
    s[0] = np.sqrt(1.0 / n)
    return s


def _fast_forward(x: np.ndarray) -> np.ndarray:
    # Makhoul: even samples ascending, odd samples descending, then one FFT
    n = x.shape[-1]
    v = np.concatenate([x[..., ::2], x[..., 1::2][..., ::-1]], axis=-1)
    spec = np.fft.fft(v, axis=-1)
    k = np.arange(n)
    unnorm = np.real(spec * np.exp(-1j * np.pi * k / (2 * n)))
    return unnorm * _scale(n)


def _fast_inverse(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[-1]
    unnorm = coeffs / _scale(n)
    k = np.arange(n)
    # X_{N-k} for k >= 1, with X_N := 0
    mirrored = np.zeros_like(unnorm)
    mirrored[..., 1:] = unnorm[..., :0:-1]
    spec = np.exp(1j * np.pi * k / (2 * n)) * (unnorm - 1j * mirrored)
    v = np.real(np.fft.ifft(spec, axis=-1))
    x = np.empty_like(v)
    half = (n + 1) // 2
    x[..., ::2] = v[..., :half]
    x[..., 1::2] = v[..., half:][..., ::-1]
    return x


def _apply(a: np.ndarray, axis: int, inverse: bool, method: str) -> np.ndarray:
    a = np.moveaxis(a, axis, -1)
    n = a.shape[-1]
    if method == "auto":
        method = "direct" if n <= DIRECT_MAX_N else "fast"
    if method == "direct":
        m = dct_matrix(n)
        out = a @ m if inverse else a @ m.T
    elif method == "fast":
        out = _fast_inverse(a) if inverse else _fast_forward(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    return np.moveaxis(out, -1, axis)


def _as_1d(signal) -> np.ndarray:
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D sequence, got shape {x.shape}")
    if x.size == 0:
        raise EmptyInput("transform of an empty sequence")
    return x


def _as_2d(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D grid, got shape {g.shape}")
    if g.size == 0:
        raise EmptyInput("transform of an empty grid")
    return g


def dct1d(signal, method: str = "auto") -> np.ndarray:
    return _apply(_as_1d(signal), -1, False, method)


def idct1d(spec, method: str = "auto") -> np.ndarray:
    return _apply(_as_1d(spec), -1, True, method)


def dct2d(grid, method: str = "auto") -> np.ndarray:
    """Separable 2-D DCT: rows of the result index vertical frequency u."""
    g = _as_2d(grid)
    return _apply(_apply(g, 0, False, method), 1, False, method)


def idct2d(spec, method: str = "auto") -> np.ndarray:
    s = _as_2d(spec)
    return _apply(_apply(s, 1, True, method), 0, True, method)


# --------- zigzag ---------

@lru_cache(maxsize=64)
def _zigzag_flat(n_rows: int, n_cols: int) -> np.ndarray:
    order = []
    for d in range(n_rows + n_cols - 1):
        lo = max(0, d - n_cols + 1)
        hi = min(d, n_rows - 1)
        rows = range(lo, hi + 1) if d % 2 else range(hi, lo - 1, -1)
        order.extend(r * n_cols + (d - r) for r in rows)
    flat = np.asarray(order, dtype=np.intp)
    flat.setflags(write=False)
    return flat


def zigzag_order(n_rows: int, n_cols: int) -> list[tuple[int, int]]:
    """JPEG-style anti-diagonal traversal of an ``n_rows`` x ``n_cols`` grid.

    Odd diagonals run top-right to bottom-left, even ones bottom-left to
    top-right, so a 3x3 grid is visited as (0,0) (0,1) (1,0) (2,0) (1,1) ...
    """
    if n_rows < 1 or n_cols < 1:
        raise DimensionMismatch("zigzag dimensions must be positive")
    return [(int(f) // n_cols, int(f) % n_cols) for f in _zigzag_flat(n_rows, n_cols)]


def zigzag_scan(spec) -> np.ndarray:
    s = np.asarray(spec)
    if s.ndim != 2 or s.size == 0:
        raise DimensionMismatch(f"expected a non-empty 2-D grid, got shape {s.shape}")
    return s.ravel()[_zigzag_flat(*s.shape)]


def zigzag_unscan(seq, n_rows: int, n_cols: int) -> np.ndarray:
    seq = np.asarray(seq)
    if n_rows < 1 or n_cols < 1 or seq.ndim != 1 or seq.size != n_rows * n_cols:
        raise DimensionMismatch(
            f"cannot place {seq.size} values on a {n_rows}x{n_cols} grid")
    out = np.empty(n_rows * n_cols, dtype=seq.dtype)
    out[_zigzag_flat(n_rows, n_cols)] = seq
    return out.reshape(n_rows, n_cols)
