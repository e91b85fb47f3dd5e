"""CP-OFDM, FBMC-OQAM and SC-FDMA as parameterizations of the generic modulator."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import engine
from .config import Extension, FilterStage, ModulatorConfig, validate


class InputMapper(enum.Enum):
    IDENTITY = "identity"
    OQAM_STAGGER = "oqam"


@dataclass(frozen=True)
class Preset:
    name: str
    config: ModulatorConfig
    input_mapper: InputMapper = InputMapper.IDENTITY

    @property
    def symbols_per_frame(self) -> int:
        """Number of input (QAM) symbols consumed by one frame."""
        if self.input_mapper is InputMapper.OQAM_STAGGER:
            return self.config.n_time * self.config.n_occupied
        return self.config.frame_capacity

    def frames(self, symbols) -> list[engine.DataFrame]:
        if self.input_mapper is InputMapper.IDENTITY:
            return engine.frame_input(symbols, self.config)
        symbols = np.asarray(symbols, dtype=complex).ravel()
        cap = self.symbols_per_frame
        n_frames = -(-symbols.size // cap)
        padded = np.zeros(n_frames * cap, dtype=complex)
        padded[: symbols.size] = symbols
        shape = (self.config.n_time, self.config.n_occupied)
        return [
            engine.DataFrame(i, oqam_map(padded[i * cap : (i + 1) * cap].reshape(shape)))
            for i in range(n_frames)
        ]

    def modulate(self, symbols, *, dense: bool = False) -> engine.Waveform:
        frames = self.frames(symbols)
        if not frames:
            raise ValueError("no input symbols")
        return engine.modulate_frames(frames, self.config, dense=dense)


def _ones_column(n):
    return tuple((1,) for _ in range(n))


def preset_ofdm(*, subcarriers: Optional[Sequence[int]] = None, m1: int = 128) -> Preset:
    """CP-OFDM: 128 subcarriers, cyclic prefix of a quarter symbol.

    ``subcarriers`` loads only the listed IDFT bins (negative indices wrap);
    the default is the fully loaded configuration.
    """
    e = tuple(range(m1)) if subcarriers is None else tuple(int(k) % m1 for k in subcarriers)
    config = ModulatorConfig(
        n_time=1,
        n_occupied=len(e),
        n_streams=1,
        commutator=e,
        stage1=FilterStage(m1, m1, 1, np.ones(m1), m1, (0,), (0,)),
        ext2=Extension(cyclic_prefix=m1 // 4),
        mux=_ones_column(m1),
        stage2=FilterStage(1, 1, 1, (1.0,), m1 + m1 // 4, (0,), (0,)),
        combiner=((1,),),
    )
    return Preset("cp-ofdm", config)


def preset_scfdma() -> Preset:
    """SC-FDMA: 32-point DFT spread onto the last 32 of 128 subcarriers."""
    m1, m2 = 32, 128
    aux = np.hstack([np.zeros((m1, m2 - m1), dtype=int), np.eye(m1, dtype=int)])
    config = ModulatorConfig(
        n_time=1,
        n_occupied=m1,
        n_streams=1,
        commutator=tuple(range(m1)),
        stage1=FilterStage(m1, m1, 1, np.ones(m1), m1, (0,), (0,), conj=True),
        mux=_ones_column(m1),
        mux_aux=aux,
        transpose=True,
        stage2=FilterStage(m2, m2, 1, np.ones(m2), m2, (0,), (0,)),
        ext3=Extension(cyclic_prefix=m2 // 4),
        combiner=((1,),),
    )
    return Preset("sc-fdma", config)


def load_prototype(path) -> np.ndarray:
    """Read filter coefficients, one real number per line."""
    h = np.loadtxt(path, dtype=float, ndmin=1)
    if h.size == 0:
        raise ValueError(f"{path}: no coefficients")
    return h


def default_prototype(m1: int) -> np.ndarray:
    """Shipped PHYDYAS-style prototype (overlap 4, length ``4*m1 + 1``)."""
    ref = resources.files("mcframe") / "data" / "prototypes" / f"phydyas_k4_m{m1}.txt"
    if not ref.is_file():
        raise FileNotFoundError(f"no shipped prototype for M1 = {m1}; pass one explicitly")
    with resources.as_file(ref) as p:
        return load_prototype(p)


def linear_period(n_in: int, up: int, K0: int, max_offset: int, channels: int) -> int:
    """Smallest multiple of ``channels`` at which circular filtering is linear.

    Never below the upsampled frame length ``up * n_in``, which short
    filters (``K0 < up - max_offset``) would otherwise undercut.
    """
    need = max(up * n_in + K0 - up + max_offset, up * n_in)
    return -(-need // channels) * channels


def preset_fbmc_oqam(prototype=None, *, m1: int = 32, n: int = 200,
                     subchannels: Optional[Sequence[int]] = None) -> Preset:
    """FBMC-OQAM: two staggered real-valued streams, half a symbol apart.

    ``prototype`` is an array or a path to a coefficient file; by default the
    shipped PHYDYAS-style filter for ``m1`` channels is used.
    """
    if m1 % 2:
        raise ValueError("FBMC-OQAM needs an even number of subchannels")
    if prototype is None:
        h = default_prototype(m1)
    elif isinstance(prototype, (str, Path)):
        h = load_prototype(prototype)
    else:
        h = np.asarray(prototype, dtype=float).ravel()
    e = tuple(range(m1)) if subchannels is None else tuple(int(k) % m1 for k in subchannels)
    offsets = (0, m1 // 2)
    n_c = linear_period(n, m1, h.size, max(offsets), m1)
    config = ModulatorConfig(
        n_time=n,
        n_occupied=len(e),
        n_streams=2,
        commutator=e,
        stage1=FilterStage(m1, m1, 1, h, n_c, offsets, (0, 0), causal=True),
        mux=_ones_column(m1),
        stage2=FilterStage(1, 1, 1, (1.0,), n_c, (0, 0), (0, 0)),
        combiner=((1, 1),),
    )
    return Preset("fbmc-oqam", config, InputMapper.OQAM_STAGGER)


PRESETS = {
    "cp-ofdm": preset_ofdm,
    "fbmc-oqam": preset_fbmc_oqam,
    "sc-fdma": preset_scfdma,
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def oqam_map(a) -> np.ndarray:
    """Split an ``N x M'`` QAM frame into two staggered real/imaginary streams.

    Returns the ``(2, N, M')`` input tensor: even subchannels send the real
    part on stream 0 and the imaginary part on stream 1, odd subchannels the
    other way round.
    """
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    even = (np.arange(a.shape[1]) % 2 == 0)[None, :]
    re, im = a.real.astype(complex), 1j * a.imag
    return np.stack([np.where(even, re, im), np.where(even, im, re)])


def oqam_unmap(x) -> np.ndarray:
    x = np.asarray(x)
    even = (np.arange(x.shape[2]) % 2 == 0)[None, :]
    re = np.where(even, x[0].real, x[1].real)
    im = np.where(even, x[1].imag, x[0].imag)
    return re + 1j * im


def oqam_phase(n: int, m: int) -> np.ndarray:
    """Phase (1 or j) of each slot of the ``(2, n, m)`` staggered tensor."""
    return oqam_map(np.full((n, m), 1 + 1j))


def check_all() -> dict:
    """Validate every preset; returns name -> derived layout."""
    return {name: validate(fn().config) for name, fn in PRESETS.items()}
