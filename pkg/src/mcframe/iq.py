"""IQ sample files and reproducible test data.

IQ files are headerless little-endian float64 pairs, I then Q
(numpy ``<c16``). Metadata goes into a JSON sidecar next to the file.

Test symbols come from a 64-bit linear congruential generator::

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

seeded with the user seed; each symbol consumes one draw and uses its top
bits (2 for QPSK, 4 for 16-QAM) most significant first. QPSK maps bit
pairs ``(b_I, b_Q)`` to ``((1 - 2 b_I) + j (1 - 2 b_Q)) / sqrt(2)``; 16-QAM
Gray-maps each bit pair ``00, 01, 11, 10`` to ``-3, -1, 1, 3`` and scales by
``1/sqrt(10)``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

IQ_DTYPE = np.dtype("<c16")
_MASK = (1 << 64) - 1
_GRAY4 = np.array([-3.0, -1.0, 3.0, 1.0])  # index = 2-bit value


def write_iq(path, samples) -> None:
    np.ascontiguousarray(samples, dtype=IQ_DTYPE).tofile(path)


def read_iq(path) -> np.ndarray:
    return np.fromfile(path, dtype=IQ_DTYPE).astype(complex)


def write_sidecar(path, meta: dict) -> None:
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


class Lcg64:
    MUL = 6364136223846793005
    INC = 1442695040888963407

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.state = seed

    def next(self) -> int:
        self.state = (self.MUL * self.state + self.INC) & _MASK
        return self.state

    def top_bits(self, n: int, bits: int) -> np.ndarray:
        return np.array([self.next() >> (64 - bits) for _ in range(n)], dtype=np.int64)


def prbs_symbols(seed: int, n: int, constellation: str = "qpsk") -> np.ndarray:
    gen = Lcg64(seed)
    if constellation == "qpsk":
        v = gen.top_bits(n, 2)
        return ((1 - 2 * (v >> 1)) + 1j * (1 - 2 * (v & 1))) / np.sqrt(2)
    if constellation == "16qam":
        v = gen.top_bits(n, 4)
        return (_GRAY4[v >> 2] + 1j * _GRAY4[v & 3]) / np.sqrt(10)
    raise ValueError(f"unknown constellation {constellation!r}")
