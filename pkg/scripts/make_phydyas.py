"""Regenerate the shipped PHYDYAS-style prototype coefficient files.

Overlap factor 4, length 4*M + 1 (both end taps are zero to machine
precision). One coefficient per line, written with repr() so the text round
trips to the identical double.

    python scripts/make_phydyas.py
"""

from pathlib import Path

import numpy as np

K = 4
H = [1.0, 0.97195983, 1 / np.sqrt(2), 0.23514695]
OUT = Path(__file__).resolve().parents[1] / "src" / "mcframe" / "data" / "prototypes"


def phydyas(M):
    n = np.arange(K * M + 1)
    h = np.full(n.size, H[0])
    for k in range(1, K):
        h += 2 * (-1) ** k * H[k] * np.cos(2 * np.pi * k * n / (K * M))
    return h


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for M in (4, 8, 16, 32, 64, 128):
        path = OUT / f"phydyas_k4_m{M}.txt"
        path.write_text("".join(f"{float(v)!r}\n" for v in phydyas(M)))
        print(path)
