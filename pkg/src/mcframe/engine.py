"""Generic modulator pipeline.

Per frame and per stream ``p`` the signal goes through::

    X_p -> C1 X_p E1 -> stage 1 -> C2 . -> W . -> multiplex -> stage 2
        -> C3 . -> . 1_M2 -> combine streams (E4) -> overlap-add frames

Each generalized filtering stage computes::

    D_Q^a ( F ∘ ( H ( F* ∘ ( Z U_L^o X ) ) ) ) diag(c)

The Hadamard sandwich is evaluated strictly from the inside out; regrouping
it changes the result.

Frames are placed at an output-rate stride of::

    stride = (N_s1 * L1/Q1 + ext2) * L2/Q2 + ext3          (b_tran = 0)
    stride = cols(E2) * L2/Q2 + ext3                        (b_tran = 1)

where ``ext_t`` is the total prefix/suffix length added at tier ``t``.
Per-frame outputs longer than the stride (filter tails) overlap and add.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import operators as ops
from .config import ConfigError, Extension, FilterStage, Layout, ModulatorConfig, validate


@dataclass(frozen=True)
class DataFrame:
    """One input frame: ``values[p, n, m]`` is the symbol of stream ``p``,
    time ``n`` and occupied subchannel ``m``."""

    index: int
    values: np.ndarray


@dataclass(frozen=True)
class StageSignal:
    """Time x subchannel matrix between pipeline blocks.

    ``rate`` is the sample rate relative to the input symbol rate.
    """

    values: np.ndarray
    rate: Fraction = Fraction(1)
    stream: int = 0

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class Waveform:
    """Complex baseband output, one row per modulator output."""

    samples: np.ndarray
    n_frames: int
    stride: int
    frame_length: int
    rate: Fraction
    config_digest: str
    metadata: dict = field(default_factory=dict)

    @property
    def n_outputs(self) -> int:
        return self.samples.shape[0]

    def __len__(self) -> int:
        return self.samples.shape[1]

    def output(self, k: int = 0) -> np.ndarray:
        return self.samples[k]


def extend(x: np.ndarray, ext: Extension, dense: bool = False) -> np.ndarray:
    C = ops.build_cyclic_extension(
        ext.zero_prefix, ext.cyclic_prefix, x.shape[0], ext.cyclic_suffix, ext.zero_suffix
    )
    return C.entries @ x if dense else C.apply(x)


def _as_signal(x) -> StageSignal:
    if isinstance(x, StageSignal):
        return x
    return StageSignal(np.atleast_2d(np.asarray(x, dtype=complex)))


def stage_filter(signal, stage: FilterStage, stream: int = 0, *, dense: bool = False) -> StageSignal:
    """One generalized filtering stage for stream ``stream``.

    ``signal`` holds ``stage.channels`` columns. The circular period is
    ``stage.period`` or, when unset, the smallest multiple of the channel
    count that holds the upsampled frame.
    """
    sig = _as_signal(signal)
    x = sig.values
    M, L, Q = stage.channels, stage.up, stage.down
    if x.shape[1] != M:
        raise ValueError(f"stage input has {x.shape[1]} columns, expected {M}")
    n_in = x.shape[0]
    n_c = stage.resolved_period(n_in)
    if n_c % M:
        raise ConfigError([f"circular period {n_c} must be a multiple of the channel count {M}"])
    U = ops.build_upsampler(L, stage.offsets[stream], n_in)
    Z = ops.build_zero_stuffer(n_c, L * n_in)
    H = ops.build_circulant_filter(stage.h, n_c)
    F = ops.build_modulation_matrix(n_c, M, stage.conj).entries
    D = ops.build_decimator(Q, stage.dec_offsets[stream], n_c)
    c = ops.build_phase_vector(M, stage.K0, stage.causal)

    if dense:
        v = Z.entries @ (U.entries @ x)
        y = F * (H.entries @ (F.conj() * v))
        y = D.entries @ (y @ np.diag(c))
    else:
        v = Z.apply(U.apply(x))
        y = F * H.apply(F.conj() * v)
        y = D.apply(y * c)
    return StageSignal(y, sig.rate * Fraction(L, Q), sig.stream)


def multiplex(Ybar, E2, E3=None, b_tran: bool = False) -> StageSignal:
    """Route first-stage subchannels to the second stage.

    ``R = Ybar E2`` or, with ``b_tran``, ``R = (Ybar E2)^T E3``.
    """
    sig = _as_signal(Ybar)
    E2 = ops.build_multiplexer(E2).entries
    if E2.shape[0] != sig.cols:
        raise ValueError(f"E2 has {E2.shape[0]} rows but the signal has {sig.cols} columns")
    r = sig.values @ E2
    if not b_tran:
        return StageSignal(r, sig.rate, sig.stream)
    if E3 is None or np.size(E3) == 0:
        raise ValueError("b_tran = 1 requires the auxiliary multiplexer E3")
    E3 = ops.build_multiplexer(E3).entries
    if E3.shape[0] != r.shape[0]:
        raise ValueError(f"E3 has {E3.shape[0]} rows, expected {r.shape[0]}")
    rate = sig.rate * Fraction(r.shape[1], r.shape[0])
    return StageSignal(r.T @ E3, rate, sig.stream)


def frame_input(symbols, config: ModulatorConfig) -> list[DataFrame]:
    """Split a symbol sequence into zero-padded frames.

    Symbols fill each ``(P, N, M')`` frame with the stream index varying
    slowest and the subchannel index fastest.
    """
    symbols = np.asarray(symbols, dtype=complex).ravel()
    cap = config.frame_capacity
    n_frames = -(-symbols.size // cap)
    padded = np.zeros(n_frames * cap, dtype=complex)
    padded[: symbols.size] = symbols
    shape = (config.n_streams, config.n_time, config.n_occupied)
    return [DataFrame(i, padded[i * cap : (i + 1) * cap].reshape(shape)) for i in range(n_frames)]


def _stream_stage1(xp: np.ndarray, config: ModulatorConfig, p: int, dense: bool) -> StageSignal:
    """Tier-1 extension, commutator and first filtering stage."""
    E1 = ops.build_commutator(np.asarray(config.commutator), config.stage1.channels)
    xe = extend(xp, config.ext1, dense)
    x2 = xe @ E1.entries if dense else E1.rapply(xe)
    return stage_filter(StageSignal(x2, Fraction(1), p), config.stage1, p, dense=dense)


def modulate_frame(frame, config: ModulatorConfig, *, layout: Optional[Layout] = None,
                   dense: bool = False) -> np.ndarray:
    """Modulate one ``(P, N, M')`` frame; returns ``(K, N'')`` samples."""
    layout = layout or validate(config)
    x = frame.values if isinstance(frame, DataFrame) else np.asarray(frame, dtype=complex)
    expected = (config.n_streams, config.n_time, config.n_occupied)
    if x.shape != expected:
        raise ValueError(f"frame has shape {x.shape}, expected {expected}")

    w = np.ones(layout.n_s2) if config.window is None else np.asarray(config.window)
    W = ops.build_window(w, layout.n_s2)
    streams = []
    for p in range(config.n_streams):
        xt = _stream_stage1(x[p], config, p, dense)
        y = extend(xt.values, config.ext2, dense)
        y = W.entries @ y if dense else W.apply(y)
        r = multiplex(StageSignal(y, xt.rate, p), config.mux, config.mux_aux, config.transpose)
        y2 = stage_filter(r, config.stage2, p, dense=dense)
        y3 = extend(y2.values, config.ext3, dense)
        streams.append(y3 @ np.ones(config.stage2.channels))
    stacked = np.concatenate(streams)
    E4 = ops.build_stream_combiner(config.combiner, layout.n_double_prime)
    out = E4.entries @ stacked if dense else E4.apply(stacked)
    return out.reshape(config.n_outputs, layout.n_double_prime)


def _integral_stride(layout: Layout) -> int:
    stride = layout.stride
    if stride.denominator != 1 or stride <= 0:
        raise ValueError(f"frame stride {stride} is not a positive integer number of samples")
    return int(stride)


def assemble_frames(outputs: Sequence[np.ndarray], config: ModulatorConfig,
                    layout: Optional[Layout] = None) -> Waveform:
    """Overlap-add per-frame ``(K, N'')`` outputs at the output-rate stride."""
    layout = layout or validate(config)
    outputs = [np.atleast_2d(o) for o in outputs]
    if not outputs:
        raise ValueError("need at least one frame")
    shape = outputs[0].shape
    if any(o.shape != shape for o in outputs):
        raise ValueError("all frame outputs must have the same shape")
    if len(outputs) == 1:
        samples = outputs[0].astype(complex)
        stride = layout.stride
        stride = int(stride) if stride.denominator == 1 and stride > 0 else shape[1]
    else:
        stride = _integral_stride(layout)
        total = stride * (len(outputs) - 1) + shape[1]
        samples = np.zeros((shape[0], total), dtype=complex)
        for i, o in enumerate(outputs):
            samples[:, i * stride : i * stride + shape[1]] += o
    return Waveform(
        samples=samples,
        n_frames=len(outputs),
        stride=stride,
        frame_length=shape[1],
        rate=layout.rate,
        config_digest=config.digest(),
    )


def modulate_frames(frames: Iterable, config: ModulatorConfig, *, dense: bool = False) -> Waveform:
    layout = validate(config)
    outs = [modulate_frame(f, config, layout=layout, dense=dense) for f in frames]
    return assemble_frames(outs, config, layout)


def modulate(config: ModulatorConfig, symbols, *, dense: bool = False) -> Waveform:
    """Frame ``symbols`` and run the full modulator."""
    validate(config)
    frames = frame_input(symbols, config)
    if not frames:
        raise ValueError("no input symbols")
    return modulate_frames(frames, config, dense=dense)


def composite_matrix(config: ModulatorConfig, *, dense: bool = False) -> np.ndarray:
    """Single-frame modulator as a ``(K·N'') x (P·N·M')`` matrix.

    Column ``j`` is the response to a unit symbol at flat frame slot ``j``
    (same ordering as :func:`frame_input`).
    """
    layout = validate(config)
    shape = (config.n_streams, config.n_time, config.n_occupied)
    n_in = config.frame_capacity
    G = np.empty((config.n_outputs * layout.n_double_prime, n_in), dtype=complex)
    for j in range(n_in):
        x = np.zeros(n_in, dtype=complex)
        x[j] = 1.0
        G[:, j] = modulate_frame(x.reshape(shape), config, layout=layout, dense=dense).ravel()
    return G
