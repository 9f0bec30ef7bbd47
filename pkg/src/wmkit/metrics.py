"""Fidelity measures: mean squared error, SNR and bit error rate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyInput, LengthMismatch, ZeroReference


@dataclass(frozen=True)
class FidelityReport:
    mse: float
    snr_db: float  # +inf when mse == 0
    n: int
    # interleave only: MSE over the leading min-length prefix of cover vs marked
    prefix_mse: Optional[float] = None


def _pair(x, y):
    a = np.asarray(x, dtype=np.float64).ravel()
    b = np.asarray(y, dtype=np.float64).ravel()
    if a.size != b.size:
        raise LengthMismatch(f"length mismatch: {a.size} vs {b.size}")
    if a.size == 0:
        raise EmptyInput("empty sequences")
    return a, b


def mse(x, y) -> float:
    a, b = _pair(x, y)
    d = a - b
    return float(np.dot(d, d) / d.size)


def snr_db(reference, test) -> float:
    """10 log10(reference energy / error energy); ``inf`` for an exact match."""
    ref, tst = _pair(reference, test)
    signal = float(np.dot(ref, ref))
    if signal == 0.0:
        raise ZeroReference("reference signal has zero energy")
    d = ref - tst
    noise = float(np.dot(d, d))
    if noise == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / noise)


def ber(sent, received) -> float:
    a = np.asarray(sent).ravel()
    b = np.asarray(received).ravel()
    if a.size != b.size:
        raise LengthMismatch(f"length mismatch: {a.size} vs {b.size}")
    if a.size == 0:
        raise EmptyInput("empty bit streams")
    return float(np.count_nonzero(a != b) / a.size)


def fidelity(reference, test, prefix_mse: Optional[float] = None) -> FidelityReport:
    ref, tst = _pair(reference, test)
    try:
        snr = snr_db(ref, tst)
    except ZeroReference:
        snr = math.nan
    return FidelityReport(mse(ref, tst), snr, ref.size, prefix_mse)
