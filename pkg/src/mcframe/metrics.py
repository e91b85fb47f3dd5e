"""Spectral and envelope metrics for generated waveforms."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy import signal


@dataclass(frozen=True)
class Papr:
    linear: float

    @property
    def db(self) -> float:
        return 10 * np.log10(self.linear)


def papr(x) -> Papr:
    """Peak-to-average power ratio ``max|s|^2 / mean|s|^2``."""
    p = np.abs(np.asarray(x, dtype=complex).ravel()) ** 2
    if p.size == 0:
        raise ValueError("empty waveform")
    mean = p.mean()
    if mean == 0:
        raise ValueError("zero-energy waveform has no PAPR")
    return Papr(float(p.max() / mean))


def psd(x, segment_length: int = 256, overlap: int | None = None):
    """Averaged-periodogram (Welch, Hann window) estimate, peak at 0 dB.

    Returns ``(freq, power_db)`` with normalized frequency in ``[-0.5, 0.5)``.
    """
    x = np.asarray(x, dtype=complex).ravel()
    if x.size == 0 or not np.any(x):
        raise ValueError("PSD of an empty or all-zero waveform is undefined")
    if segment_length > x.size:
        raise ValueError(f"segment length {segment_length} exceeds the waveform ({x.size} samples)")
    if overlap is None:
        overlap = segment_length // 2
    f, pxx = signal.welch(
        x,
        fs=1.0,
        window="hann",
        nperseg=segment_length,
        noverlap=overlap,
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    f, pxx = np.fft.fftshift(f), np.fft.fftshift(pxx)
    with np.errstate(divide="ignore"):
        db = 10 * np.log10(pxx / pxx.max())
    return f, db


def write_psd_csv(path, freq, power_db) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frequency", "power_db"])
        for f, p in zip(freq, power_db):
            w.writerow([repr(float(f)), repr(float(p))])
