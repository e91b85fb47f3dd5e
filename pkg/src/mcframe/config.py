"""Modulator configuration, validation and the flat JSON document format.

The JSON keys follow the row labels of the usual parameterization table
(``N``, ``M_prime``, ``M1``, ``L1``, ``Ncp2``, ``E2`` ...); the Python
attributes use descriptive names. :data:`FIELDS` is the one-to-one map.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np


class ConfigError(ValueError):
    """Raised with one diagnostic per violated constraint."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _tuple(x, cast=None):
    if x is None:
        return None
    if isinstance(x, np.ndarray):
        x = x.tolist()
    if isinstance(x, (list, tuple, range)):
        return tuple(_tuple(v, cast) for v in x)
    return cast(x) if cast is not None else x


def _complex_or_real(v):
    v = complex(v)
    return v.real if v.imag == 0 else v


@dataclass(frozen=True)
class Extension:
    """Zero/cyclic prefix and suffix lengths of one cyclic-extension tier."""

    zero_prefix: int = 0
    cyclic_prefix: int = 0
    cyclic_suffix: int = 0
    zero_suffix: int = 0

    @property
    def total(self) -> int:
        return self.zero_prefix + self.cyclic_prefix + self.cyclic_suffix + self.zero_suffix


@dataclass(frozen=True)
class FilterStage:
    """Parameters of one generalized filtering stage.

    ``offsets`` and ``dec_offsets`` hold one entry per parallel stream.
    ``period`` is the circular filtering period; ``None`` picks the smallest
    multiple of ``channels`` that avoids information loss.
    """

    channels: int
    up: int
    down: int
    taps: tuple
    period: Optional[int]
    offsets: tuple
    dec_offsets: tuple
    conj: bool = False
    causal: bool = False

    def __post_init__(self):
        object.__setattr__(self, "taps", _tuple(np.atleast_1d(self.taps), _complex_or_real))
        object.__setattr__(self, "offsets", _tuple(np.atleast_1d(self.offsets), int))
        object.__setattr__(self, "dec_offsets", _tuple(np.atleast_1d(self.dec_offsets), int))
        object.__setattr__(self, "conj", bool(self.conj))
        object.__setattr__(self, "causal", bool(self.causal))

    @property
    def K0(self) -> int:
        return len(self.taps)

    @property
    def h(self) -> np.ndarray:
        return np.asarray(self.taps, dtype=complex)

    def resolved_period(self, n_in: int) -> int:
        if self.period is not None:
            return int(self.period)
        need = max(self.up * n_in, self.K0)
        return -(-need // self.channels) * self.channels


@dataclass(frozen=True)
class ModulatorConfig:
    n_time: int
    n_occupied: int
    n_streams: int
    commutator: tuple
    stage1: FilterStage
    stage2: FilterStage
    ext1: Extension = field(default_factory=Extension)
    ext2: Extension = field(default_factory=Extension)
    ext3: Extension = field(default_factory=Extension)
    mux: tuple = ()
    mux_aux: tuple = ()
    transpose: bool = False
    combiner: tuple = ((1,),)
    window: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "commutator", _tuple(self.commutator, int))
        object.__setattr__(self, "mux", _tuple(self.mux, int))
        object.__setattr__(self, "mux_aux", _tuple(self.mux_aux, int) or ())
        object.__setattr__(self, "combiner", _tuple(self.combiner, _complex_or_real))
        object.__setattr__(self, "window", _tuple(self.window, _complex_or_real))
        object.__setattr__(self, "transpose", bool(self.transpose))

    @property
    def n_outputs(self) -> int:
        return len(self.combiner)

    @property
    def frame_capacity(self) -> int:
        return self.n_streams * self.n_time * self.n_occupied

    def replace(self, **kw) -> "ModulatorConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return to_document(self)

    def digest(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class Layout:
    """Derived lengths of a validated configuration."""

    n_s1: int
    n_c1: int
    n_prime: int
    n_s2: int
    stage2_rows: int
    n_c2: int
    stage2_out: int
    n_double_prime: int
    stride: Fraction
    rate: Fraction

    @property
    def frame_length(self) -> int:
        return self.n_double_prime


def _mat(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.size == 0:
        return np.zeros((0, 0))
    return np.atleast_2d(a)


def _check_stage(stage: FilterStage, s: int, n_streams: int, n_in: int, errors: list) -> Optional[int]:
    ok = True
    for name, v, label in (
        ("channels", stage.channels, "channel count"),
        ("up", stage.up, "upsampling factor"),
        ("down", stage.down, "downsampling factor"),
    ):
        if int(v) != v or v < 1:
            errors.append(f"stage {s}: {label} must be ≥ 1 (got {v})")
            ok = False
    if stage.K0 < 1:
        errors.append(f"stage {s}: filter must have at least one coefficient")
        ok = False
    if len(stage.offsets) != n_streams:
        errors.append(f"stage {s}: need {n_streams} upsampling offsets, got {len(stage.offsets)}")
        ok = False
    if len(stage.dec_offsets) != n_streams:
        errors.append(f"stage {s}: need {n_streams} decimation offsets, got {len(stage.dec_offsets)}")
        ok = False
    if not ok:
        return None
    if any(o < 0 or o >= stage.up for o in stage.offsets):
        errors.append(f"stage {s}: upsampling offsets must lie in [0, {stage.up - 1}]")
    if any(a < 0 or a >= stage.down for a in stage.dec_offsets):
        errors.append(f"stage {s}: decimation offsets must lie in [0, {stage.down - 1}]")
    n_c = stage.resolved_period(n_in)
    if n_c < stage.up * n_in:
        errors.append(
            f"stage {s}: information loss, circular period {n_c} < "
            f"upsampled frame length {stage.up * n_in}"
        )
    if n_c % stage.channels:
        errors.append(
            f"stage {s}: circular period {n_c} must be a multiple of the channel count {stage.channels}"
        )
    if stage.K0 > n_c:
        errors.append(f"stage {s}: filter length {stage.K0} exceeds the circular period {n_c}")
    return n_c


def _check_ext(ext: Extension, t: int, core: int, errors: list):
    for name in ("zero_prefix", "cyclic_prefix", "cyclic_suffix", "zero_suffix"):
        v = getattr(ext, name)
        if int(v) != v or v < 0:
            errors.append(f"tier {t}: {name.replace('_', ' ')} must be a non-negative integer")
    if ext.cyclic_prefix > core:
        errors.append(f"tier {t}: cyclic prefix {ext.cyclic_prefix} longer than the block ({core})")
    if ext.cyclic_suffix > core:
        errors.append(f"tier {t}: cyclic suffix {ext.cyclic_suffix} longer than the block ({core})")


def validate(config: ModulatorConfig) -> Layout:
    """Check every structural constraint and return the derived lengths.

    Raises:
        ConfigError: listing every violated constraint.
    """
    errors: list[str] = []
    for name, v in (("N", config.n_time), ("M_prime", config.n_occupied), ("P", config.n_streams)):
        if int(v) != v or v < 1:
            errors.append(f"{name} must be ≥ 1 (got {v})")
    if errors:
        raise ConfigError(errors)

    s1, s2 = config.stage1, config.stage2
    if int(s1.channels) == s1.channels and s1.channels < config.n_occupied:
        errors.append(f"M1 ({s1.channels}) must be ≥ M_prime ({config.n_occupied})")

    e = config.commutator
    if len(e) != config.n_occupied:
        errors.append(f"commutator needs {config.n_occupied} entries, got {len(e)}")
    if any(k < 0 or k >= s1.channels for k in e):
        errors.append(f"commutator entries must lie in [0, {s1.channels - 1}]")
    if len(set(e)) != len(e):
        errors.append("commutator entries must be distinct")

    _check_ext(config.ext1, 1, config.n_time, errors)
    n_s1 = config.n_time + config.ext1.total
    n_c1 = _check_stage(s1, 1, config.n_streams, n_s1, errors)
    if n_c1 is None:
        raise ConfigError(errors)
    n_prime = n_c1 // s1.down
    _check_ext(config.ext2, 2, n_prime, errors)
    n_s2 = n_prime + config.ext2.total

    if config.window is not None and len(config.window) > n_s2:
        errors.append(f"window length {len(config.window)} exceeds the tier-2 frame length {n_s2}")

    E2 = _mat(config.mux)
    E3 = _mat(config.mux_aux)
    stage2_rows = None
    if E2.size and not np.isin(E2, (0, 1)).all():
        errors.append("E2 must be 0-1 valued")
    if E3.size and not np.isin(E3, (0, 1)).all():
        errors.append("E3 must be 0-1 valued")
    if E2.shape[0] != s1.channels:
        errors.append(f"E2 must have M1 = {s1.channels} rows, got {E2.shape[0]}")
    elif not config.transpose:
        if E2.shape[1] != s2.channels:
            errors.append(f"E2 must have M2 = {s2.channels} columns, got {E2.shape[1]}")
        stage2_rows = n_s2
    else:
        if E3.size == 0:
            errors.append("b_tran = 1 requires a non-empty E3")
        elif E3.shape != (n_s2, s2.channels):
            errors.append(f"E3 must be {n_s2} x {s2.channels}, got {E3.shape[0]} x {E3.shape[1]}")
        stage2_rows = E2.shape[1]

    if stage2_rows is None:
        raise ConfigError(errors)
    n_c2 = _check_stage(s2, 2, config.n_streams, stage2_rows, errors)
    if n_c2 is None:
        raise ConfigError(errors)
    stage2_out = n_c2 // s2.down
    _check_ext(config.ext3, 3, stage2_out, errors)
    n_dp = stage2_out + config.ext3.total

    comb = np.asarray(config.combiner)
    if comb.ndim != 2 or comb.shape[1] != config.n_streams or comb.shape[0] < 1:
        errors.append(f"E4 pattern must be K x P with P = {config.n_streams}, got shape {comb.shape}")

    if errors:
        raise ConfigError(errors)

    r1 = Fraction(s1.up, s1.down)
    r2 = Fraction(s2.up, s2.down)
    if config.transpose:
        stage2_nominal = stage2_rows
        rate = r1 * Fraction(stage2_rows, n_s2) * r2
    else:
        stage2_nominal = n_s1 * r1 + config.ext2.total
        rate = r1 * r2
    stride = stage2_nominal * r2 + config.ext3.total
    return Layout(
        n_s1=n_s1,
        n_c1=n_c1,
        n_prime=n_prime,
        n_s2=n_s2,
        stage2_rows=stage2_rows,
        n_c2=n_c2,
        stage2_out=stage2_out,
        n_double_prime=n_dp,
        stride=stride,
        rate=rate,
    )


# --- flat JSON document ---------------------------------------------------

# JSON key -> (attribute path, kind)
FIELDS: dict[str, tuple[str, str]] = {
    "N": ("n_time", "int"),
    "M_prime": ("n_occupied", "int"),
    "P": ("n_streams", "int"),
    "e": ("commutator", "ivec"),
    "M1": ("stage1.channels", "int"),
    "L1": ("stage1.up", "int"),
    "Q1": ("stage1.down", "int"),
    "h": ("stage1.taps", "cvec"),
    "Nc1": ("stage1.period", "opt_int"),
    "o1": ("stage1.offsets", "ivec"),
    "a1": ("stage1.dec_offsets", "ivec"),
    "b_conj1": ("stage1.conj", "bool"),
    "b_cas1": ("stage1.causal", "bool"),
    "Nzp1": ("ext1.zero_prefix", "int"),
    "Ncp1": ("ext1.cyclic_prefix", "int"),
    "Ncs1": ("ext1.cyclic_suffix", "int"),
    "Nzs1": ("ext1.zero_suffix", "int"),
    "Nzp2": ("ext2.zero_prefix", "int"),
    "Ncp2": ("ext2.cyclic_prefix", "int"),
    "Ncs2": ("ext2.cyclic_suffix", "int"),
    "Nzs2": ("ext2.zero_suffix", "int"),
    "w": ("window", "opt_cvec"),
    "b_tran": ("transpose", "bool"),
    "E2": ("mux", "imat"),
    "E3": ("mux_aux", "imat"),
    "M2": ("stage2.channels", "int"),
    "L2": ("stage2.up", "int"),
    "Q2": ("stage2.down", "int"),
    "g": ("stage2.taps", "cvec"),
    "Nc2": ("stage2.period", "opt_int"),
    "o2": ("stage2.offsets", "ivec"),
    "a2": ("stage2.dec_offsets", "ivec"),
    "b_conj2": ("stage2.conj", "bool"),
    "b_cas2": ("stage2.causal", "bool"),
    "Nzp3": ("ext3.zero_prefix", "int"),
    "Ncp3": ("ext3.cyclic_prefix", "int"),
    "Ncs3": ("ext3.cyclic_suffix", "int"),
    "Nzs3": ("ext3.zero_suffix", "int"),
    "E4": ("combiner", "cmat"),
}


def _encode_c(v):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def _encode(value, kind):
    if kind in ("int", "bool"):
        return value if kind == "bool" else int(value)
    if kind == "opt_int":
        return None if value is None else int(value)
    if kind == "ivec":
        return [int(v) for v in value]
    if kind == "imat":
        return [[int(v) for v in row] for row in value]
    if kind in ("cvec", "opt_cvec"):
        return None if value is None else [_encode_c(v) for v in value]
    if kind == "cmat":
        return [[_encode_c(v) for v in row] for row in value]
    raise AssertionError(kind)


def _decode_c(v, key):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError([f"{key}: complex values are written as [re, im]"])
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError([f"{key}: expected a number, got {v!r}"])
    return float(v)


def _decode(value, kind, key):
    try:
        if kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError([f"{key}: expected an integer, got {value!r}"])
            return value
        if kind == "opt_int":
            return None if value is None else _decode(value, "int", key)
        if kind == "bool":
            if value in (0, 1, True, False):
                return bool(value)
            raise ConfigError([f"{key}: expected 0/1 or true/false, got {value!r}"])
        if kind == "ivec":
            return tuple(_decode(v, "int", key) for v in value)
        if kind == "imat":
            return tuple(tuple(_decode(v, "int", key) for v in row) for row in value)
        if kind == "cvec":
            return tuple(_decode_c(v, key) for v in value)
        if kind == "opt_cvec":
            return None if value is None else _decode(value, "cvec", key)
        if kind == "cmat":
            return tuple(tuple(_decode_c(v, key) for v in row) for row in value)
    except TypeError:
        raise ConfigError([f"{key}: malformed value {value!r}"]) from None
    raise AssertionError(kind)


def _get(obj, path):
    for part in path.split("."):
        obj = getattr(obj, part)
    return obj


def to_document(config: ModulatorConfig) -> dict:
    return {key: _encode(_get(config, path), kind) for key, (path, kind) in FIELDS.items()}


def from_document(doc: dict[str, Any]) -> ModulatorConfig:
    """Build (without validating) a config from a flat document."""
    if not isinstance(doc, dict):
        raise ConfigError(["configuration document must be a JSON object"])
    errors = [f"unknown field {k!r}" for k in doc if k not in FIELDS]
    errors += [f"missing field {k!r}" for k in FIELDS if k not in doc]
    if errors:
        raise ConfigError(errors)
    parts: dict[str, dict] = {"": {}, "stage1": {}, "stage2": {}, "ext1": {}, "ext2": {}, "ext3": {}}
    for key, (path, kind) in FIELDS.items():
        head, _, attr = path.rpartition(".")
        parts[head][attr] = _decode(doc[key], kind, key)
    return ModulatorConfig(
        stage1=FilterStage(**parts["stage1"]),
        stage2=FilterStage(**parts["stage2"]),
        ext1=Extension(**parts["ext1"]),
        ext2=Extension(**parts["ext2"]),
        ext3=Extension(**parts["ext3"]),
        **parts[""],
    )
