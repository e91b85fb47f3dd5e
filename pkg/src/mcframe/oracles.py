"""Reference implementations used only for verification.

Nothing here imports the operator builders or the engine: the scalar
reference evaluates the index-form equations with explicit loops, and the
textbook modulators use numpy's FFT. Configurations are read by attribute
only.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np


class RankDeficientError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class OracleReport:
    max_abs_error: float
    max_rel_error: float
    worst_index: tuple
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs_error <= self.tolerance

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] max abs error {self.max_abs_error:.3e} "
            f"(rel {self.max_rel_error:.3e}) at {self.worst_index}, tolerance {self.tolerance:.1e}"
        )


def compare(actual, expected, tolerance: float) -> OracleReport:
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    if actual.shape != expected.shape:
        raise ValueError(f"shape mismatch: {actual.shape} vs {expected.shape}")
    err = np.abs(actual - expected)
    if err.size == 0:
        return OracleReport(0.0, 0.0, (), tolerance)
    worst = np.unravel_index(np.argmax(err), err.shape)
    scale = np.max(np.abs(expected))
    rel = float(err[worst] / scale) if scale > 0 else float(err[worst])
    return OracleReport(float(err[worst]), rel, tuple(int(i) for i in worst), tolerance)


# --- scalar (index-form) reference ----------------------------------------

def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _period(stage, n_in: int) -> int:
    if stage.period is not None:
        return int(stage.period)
    need = max(stage.up * n_in, len(stage.taps))
    return _ceil_div(need, stage.channels) * stage.channels


def _extend(x, ext):
    """Zero/cyclic prefix and suffix in index form."""
    zp, cp, cs, zs = ext.zero_prefix, ext.cyclic_prefix, ext.cyclic_suffix, ext.zero_suffix
    N = len(x)
    out = []
    for n in range(-zp - cp, N + cs + zs):
        if -cp <= n < N + cs:
            out.append(list(x[n % N]))
        else:
            out.append([0j] * len(x[0]))
    return out


def _filter(x, e, stage, p, taps=None):
    """Upsample, circularly filter, modulate, phase-correct and decimate.

    ``x[u][m]`` is data subchannel ``m``; ``e[m]`` is its filter index.
    ``taps`` may give one filter per filter index (rows), otherwise the
    stage prototype is shared.
    """
    M, L, Q = stage.channels, stage.up, stage.down
    o, a = stage.offsets[p], stage.dec_offsets[p]
    n_s = len(x)
    n_c = _period(stage, n_s)
    if taps is None:
        filters = [list(stage.taps)] * M
    else:
        filters = [list(row) for row in taps]
    K0 = max(len(f) for f in filters)
    sign = -1 if stage.conj else 1

    xbar = [[0j] * M for _ in range(n_c)]
    for m in range(len(e)):
        k = e[m]
        h = filters[k]
        phase = cmath.exp(-2j * cmath.pi * k * (K0 - 1) * int(stage.causal) / (2 * M))
        for n in range(n_c):
            acc = 0j
            # t = 1 picks up the terms that wrap around the circular period
            for t in (0, 1):
                r = (n - o) % n_c + t * n_c
                lo = max(_ceil_div(r - K0 + 1, L), 0)
                hi = min(r // L, n_s - 1)
                for u in range(lo, hi + 1):
                    idx = (n - o - L * u) % n_c
                    if idx < len(h):
                        acc += h[idx] * cmath.exp(sign * 2j * cmath.pi * k * idx / M) * x[u][m]
            xbar[n][k] = phase * acc
    return [xbar[Q * n + a] for n in range(n_c // Q)]


def _stream(xp, config, p, taps1):
    xe = _extend(xp, config.ext1)
    xt = _filter(xe, list(config.commutator), config.stage1, p, taps1)
    y = _extend(xt, config.ext2)
    w = config.window
    if w is not None:
        y = [[(w[n] if n < len(w) else 0) * v for v in row] for n, row in enumerate(y)]
    E2 = config.mux
    r = [
        [sum(E2[m1][m2] * row[m1] for m1 in range(len(row))) for m2 in range(len(E2[0]))]
        for row in y
    ]
    if config.transpose:
        E3 = config.mux_aux
        rt = [list(col) for col in zip(*r)]
        r = [
            [sum(row[q] * E3[q][m2] for q in range(len(row))) for m2 in range(len(E3[0]))]
            for row in rt
        ]
    y2 = _filter(r, list(range(config.stage2.channels)), config.stage2, p)
    y3 = _extend(y2, config.ext3)
    return [sum(row) for row in y3]


def _stride(config):
    s1, s2 = config.stage1, config.stage2
    ext2 = config.ext2
    ext2_total = ext2.zero_prefix + ext2.cyclic_prefix + ext2.cyclic_suffix + ext2.zero_suffix
    e3 = config.ext3
    ext3_total = e3.zero_prefix + e3.cyclic_prefix + e3.cyclic_suffix + e3.zero_suffix
    if config.transpose:
        rows2 = len(config.mux[0])
    else:
        e1 = config.ext1
        n_s1 = config.n_time + e1.zero_prefix + e1.cyclic_prefix + e1.cyclic_suffix + e1.zero_suffix
        rows2 = n_s1 * s1.up / s1.down + ext2_total
    stride = rows2 * s2.up / s2.down + ext3_total
    if stride != int(stride):
        raise ValueError(f"non-integral frame stride {stride}")
    return int(stride)


def scalar_reference(config, frames, *, taps1=None) -> np.ndarray:
    """Whole modulator by direct index loops; returns ``(K, samples)``.

    ``frames`` are ``(P, N, M')`` arrays (or objects with ``.values``).
    ``taps1`` optionally gives distinct first-stage filters per filter index.
    """
    outs = []
    for frame in frames:
        x = np.asarray(getattr(frame, "values", frame), dtype=complex)
        streams = [_stream(x[p].tolist(), config, p, taps1) for p in range(config.n_streams)]
        outs.append(
            [
                [sum(row[p] * streams[p][n] for p in range(len(streams))) for n in range(len(streams[0]))]
                for row in config.combiner
            ]
        )
    length = len(outs[0][0])
    stride = _stride(config) if len(outs) > 1 else length
    total = stride * (len(outs) - 1) + length
    result = np.zeros((len(config.combiner), total), dtype=complex)
    for i, o in enumerate(outs):
        result[:, i * stride : i * stride + length] += np.asarray(o)
    return result


# --- textbook modulators --------------------------------------------------

def ofdm_reference(symbols, cp: int = 32) -> np.ndarray:
    """Unnormalized inverse DFT with the last ``cp`` samples prepended."""
    symbols = np.asarray(symbols, dtype=complex)
    s = np.fft.ifft(symbols) * symbols.size
    return np.concatenate([s[s.size - cp :], s]) if cp else s


def scfdma_reference(symbols, n_fft: int = 128, cp: int = 32, first_bin=None) -> np.ndarray:
    """DFT-spread OFDM with localized mapping onto the top subcarriers.

    A ``len(symbols)``-point DFT is placed on bins ``first_bin ..`` (default:
    the last ``len(symbols)`` bins) of an ``n_fft`` grid, followed by an
    unnormalized inverse DFT and a cyclic prefix.
    """
    symbols = np.asarray(symbols, dtype=complex)
    m = symbols.size
    start = n_fft - m if first_bin is None else first_bin
    grid = np.zeros(n_fft, dtype=complex)
    grid[start : start + m] = np.fft.fft(symbols)
    return ofdm_reference(grid, cp)


def linear_convolution_reference(x, h, L: int = 1, o: int = 0) -> np.ndarray:
    """Upsample by ``L`` (sample ``u`` at ``L*u + o``) then convolve with ``h``."""
    x = np.asarray(x, dtype=complex)
    up = np.zeros(L * x.size, dtype=complex)
    up[o :: L] = x
    return np.convolve(up, np.asarray(h, dtype=complex))


def least_squares_recover(G, waveform, *, real_phase=None, rcond=None) -> np.ndarray:
    """Minimize ``||G x - waveform||``.

    With ``real_phase`` (one unit-modulus factor per column) the unknowns are
    real amplitudes ``r`` and the model is ``G diag(real_phase) r``; the
    returned estimate is ``real_phase * r``.

    Raises:
        RankDeficientError: if the system matrix lacks full column rank.
    """
    G = np.asarray(G, dtype=complex)
    s = np.asarray(waveform, dtype=complex).ravel()
    if real_phase is None:
        A, b = G, s
    else:
        phase = np.asarray(real_phase, dtype=complex).ravel()
        Gp = G * phase
        A = np.vstack([Gp.real, Gp.imag])
        b = np.concatenate([s.real, s.imag])
    sv = np.linalg.svd(A, compute_uv=False)
    tol = sv.max() * max(A.shape) * np.finfo(float).eps if sv.size else 0.0
    rank = int(np.sum(sv > tol))
    if rank < A.shape[1]:
        raise RankDeficientError(f"matrix has rank {rank} < {A.shape[1]} columns")
    est, *_ = np.linalg.lstsq(A, b, rcond=rcond)
    return est if real_phase is None else est * phase
