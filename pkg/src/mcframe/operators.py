"""Structured matrices of the generic modulator.

Every builder returns an immutable :class:`OperatorMatrix`. Each operator can
be materialized (``.entries``) or applied through an index-mapped path
(``.apply``) that never forms the dense matrix; the two must agree and the
test suite checks that they do.

All indices are 0-based.
"""

from __future__ import annotations

import enum
from functools import cached_property

import numpy as np


class Role(enum.Enum):
    CYCLIC_EXTENSION = "CyclicExtension"
    UPSAMPLER = "Upsampler"
    ZERO_STUFFER = "ZeroStuffer"
    CIRCULANT_FILTER = "CirculantFilter"
    MODULATION = "Modulation"
    DECIMATOR = "Decimator"
    WINDOW = "Window"
    COMMUTATOR = "Commutator"
    MULTIPLEXER = "Multiplexer"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class OperatorMatrix:
    """A role-tagged matrix with a dense and a structured representation."""

    role: Role
    shape: tuple[int, int]

    def __init__(self, role: Role, shape: tuple[int, int]):
        self.role = role
        self.shape = (int(shape[0]), int(shape[1]))

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @cached_property
    def entries(self) -> np.ndarray:
        return _frozen(self._dense())

    def _dense(self) -> np.ndarray:
        raise NotImplementedError

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Left-multiply ``x`` (``cols`` rows) without materializing."""
        return self.entries @ x

    def rapply(self, x: np.ndarray) -> np.ndarray:
        """Right-multiply ``x`` (``rows`` columns) without materializing."""
        return x @ self.entries

    def _check_left(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != self.cols:
            raise ValueError(
                f"{self.role.value}: operand has {x.shape[0]} rows, expected {self.cols}"
            )
        return x

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.role.value}, {self.rows}x{self.cols})"


class SelectionMatrix(OperatorMatrix):
    """0-1 matrix with at most one unit entry per row.

    ``source[r]`` is the column holding the 1 in row ``r``, or -1 for an
    all-zero row.
    """

    def __init__(self, role: Role, shape: tuple[int, int], source: np.ndarray):
        super().__init__(role, shape)
        self.source = _frozen(np.asarray(source, dtype=np.intp).copy())

    def _dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        rows = np.flatnonzero(self.source >= 0)
        out[rows, self.source[rows]] = 1.0
        return out

    def apply(self, x):
        x = self._check_left(x)
        out = np.zeros((self.rows,) + x.shape[1:], dtype=np.result_type(x, float))
        rows = np.flatnonzero(self.source >= 0)
        out[rows] = x[self.source[rows]]
        return out

    def rapply(self, x):
        x = np.asarray(x)
        if x.shape[-1] != self.rows:
            raise ValueError(
                f"{self.role.value}: operand has {x.shape[-1]} columns, expected {self.rows}"
            )
        out = np.zeros(x.shape[:-1] + (self.cols,), dtype=np.result_type(x, float))
        rows = np.flatnonzero(self.source >= 0)
        np.add.at(out, (..., self.source[rows]), x[..., rows])
        return out


class CirculantMatrix(OperatorMatrix):
    """Circulant matrix whose first column is ``taps`` zero-padded to ``n``."""

    def __init__(self, taps: np.ndarray, n: int):
        super().__init__(Role.CIRCULANT_FILTER, (n, n))
        self.taps = _frozen(np.asarray(taps, dtype=complex).copy())

    @property
    def first_column(self) -> np.ndarray:
        col = np.zeros(self.rows, dtype=complex)
        col[: self.taps.size] = self.taps
        return col

    def _dense(self) -> np.ndarray:
        n = self.rows
        i, j = np.indices((n, n))
        return self.first_column[(i - j) % n]

    def apply(self, x):
        x = self._check_left(x)
        n = self.rows
        out = np.zeros(x.shape, dtype=np.result_type(x, complex))
        taps = np.flatnonzero(self.taps)
        flat = x.reshape(n, -1)
        rows = np.flatnonzero(np.any(flat != 0, axis=1))
        span_len = int(taps.max()) + 1 if taps.size else 0
        if rows.size * span_len < taps.size * n:
            # sparse input (e.g. upsampled): scatter one filter copy per sample
            view = out.reshape(n, -1)
            h = self.taps[:span_len, None]
            span = np.arange(span_len)
            for r in rows:
                view[(r + span) % n] += h * flat[r]
            return out
        for k in taps:
            out += self.taps[k] * np.roll(x, k, axis=0)
        return out


class DiagonalMatrix(OperatorMatrix):
    def __init__(self, role: Role, diag: np.ndarray):
        n = len(diag)
        super().__init__(role, (n, n))
        self.diag = _frozen(np.asarray(diag).copy())

    def _dense(self) -> np.ndarray:
        return np.diag(self.diag)

    def apply(self, x):
        x = self._check_left(x)
        return self.diag.reshape((-1,) + (1,) * (x.ndim - 1)) * x

    def rapply(self, x):
        x = np.asarray(x)
        return x * self.diag


class DenseMatrix(OperatorMatrix):
    def __init__(self, role: Role, matrix: np.ndarray):
        matrix = np.asarray(matrix)
        super().__init__(role, matrix.shape)
        self._matrix = matrix.copy()

    def _dense(self) -> np.ndarray:
        return self._matrix


class KronIdentityMatrix(OperatorMatrix):
    """``pattern ⊗ I_n``: combines stacked length-``n`` blocks."""

    def __init__(self, role: Role, pattern: np.ndarray, n: int):
        pattern = np.atleast_2d(np.asarray(pattern))
        super().__init__(role, (pattern.shape[0] * n, pattern.shape[1] * n))
        self.pattern = _frozen(pattern.copy())
        self.block = int(n)

    def _dense(self) -> np.ndarray:
        return np.kron(self.pattern, np.eye(self.block))

    def apply(self, x):
        x = self._check_left(x)
        blocks = x.reshape((self.pattern.shape[1], self.block) + x.shape[1:])
        out = np.tensordot(self.pattern, blocks, axes=(1, 0))
        return out.reshape((self.rows,) + x.shape[1:])


def _nonneg(**kw):
    for name, v in kw.items():
        if int(v) != v or v < 0:
            raise ValueError(f"{name} must be a non-negative integer, got {v!r}")


def _positive(**kw):
    for name, v in kw.items():
        if int(v) != v or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def build_cyclic_extension(n_zp: int, n_cp: int, n_core: int, n_cs: int, n_zs: int) -> SelectionMatrix:
    """Zero prefix, cyclic prefix, core, cyclic suffix and zero suffix.

    Stacks ``0``, ``[0 | I_cp]``, ``I_core``, ``[I_cs | 0]``, ``0`` so that the
    cyclic prefix copies the last ``n_cp`` core samples and the suffix copies
    the first ``n_cs``.
    """
    _nonneg(n_zp=n_zp, n_cp=n_cp, n_cs=n_cs, n_zs=n_zs)
    _positive(n_core=n_core)
    if n_cp > n_core:
        raise ValueError(f"cyclic prefix ({n_cp}) longer than the block ({n_core})")
    if n_cs > n_core:
        raise ValueError(f"cyclic suffix ({n_cs}) longer than the block ({n_core})")
    source = np.concatenate(
        [
            np.full(n_zp, -1),
            np.arange(n_core - n_cp, n_core),
            np.arange(n_core),
            np.arange(n_cs),
            np.full(n_zs, -1),
        ]
    )
    return SelectionMatrix(Role.CYCLIC_EXTENSION, (source.size, n_core), source)


def build_upsampler(L: int, offset: int, n_s: int) -> SelectionMatrix:
    """Upsample by ``L``; input sample ``u`` lands on row ``L*u + offset``."""
    _positive(L=L, n_s=n_s)
    _nonneg(offset=offset)
    if offset >= L:
        raise ValueError(f"upsampling offset {offset} must be smaller than the factor {L}")
    source = np.full(L * n_s, -1)
    source[offset::L] = np.arange(n_s)
    return SelectionMatrix(Role.UPSAMPLER, (L * n_s, n_s), source)


def build_zero_stuffer(n_c: int, n_in: int) -> SelectionMatrix:
    """``[I_n_in; 0]`` padding an upsampled frame to the circular period."""
    _positive(n_c=n_c, n_in=n_in)
    if n_c < n_in:
        raise ValueError(
            f"information loss: circular period {n_c} is shorter than the "
            f"upsampled frame ({n_in} samples)"
        )
    source = np.full(n_c, -1)
    source[:n_in] = np.arange(n_in)
    return SelectionMatrix(Role.ZERO_STUFFER, (n_c, n_in), source)


def build_circulant_filter(h, n_c: int) -> CirculantMatrix:
    """Circular convolution with ``h`` over period ``n_c``."""
    _positive(n_c=n_c)
    h = np.atleast_1d(np.asarray(h, dtype=complex))
    if h.ndim != 1 or h.size == 0:
        raise ValueError("filter must be a non-empty 1-D coefficient vector")
    if h.size > n_c:
        raise ValueError(f"filter length {h.size} exceeds the circular period {n_c}")
    return CirculantMatrix(h, n_c)


def build_modulation_matrix(n_c: int, m_ch: int, b_conj: bool) -> DenseMatrix:
    """DFT-like matrix, entry ``(k, m) = exp(±2πj·k·m/m_ch)``.

    The sign is negative when ``b_conj`` is set.
    """
    _positive(n_c=n_c, m_ch=m_ch)
    k, m = np.indices((n_c, m_ch))
    # reduce the exponent before scaling so large k*m keep full precision
    phase = ((k * m) % m_ch) / m_ch
    sign = -1.0 if b_conj else 1.0
    return DenseMatrix(Role.MODULATION, np.exp(sign * 2j * np.pi * phase))


def build_decimator(Q: int, offset: int, n_c: int) -> SelectionMatrix:
    """Keep every ``Q``-th sample starting at ``offset``."""
    _positive(Q=Q, n_c=n_c)
    _nonneg(offset=offset)
    if offset >= Q:
        raise ValueError(f"decimation offset {offset} must be smaller than the factor {Q}")
    rows = n_c // Q
    source = Q * np.arange(rows) + offset
    return SelectionMatrix(Role.DECIMATOR, (rows, n_c), source)


def build_phase_vector(m_ch: int, K0: int, b_cas: bool) -> np.ndarray:
    """Per-channel phase that undoes the delay of a causal length-``K0`` filter.

    Entry ``m`` is ``exp(-πj·m·(K0-1)·b_cas/m_ch)``.
    """
    _positive(m_ch=m_ch, K0=K0)
    m = np.arange(m_ch)
    if not b_cas:
        return _frozen(np.ones(m_ch, dtype=complex))
    half_turns = (m * (K0 - 1)) % (2 * m_ch)
    return _frozen(np.exp(-1j * np.pi * half_turns / m_ch))


def build_window(w, n_target: int) -> DiagonalMatrix:
    """Diagonal window, zero-padded to ``n_target`` samples."""
    _positive(n_target=n_target)
    w = np.atleast_1d(np.asarray(w))
    if w.size > n_target:
        raise ValueError(f"window length {w.size} exceeds the signal length {n_target}")
    diag = np.zeros(n_target, dtype=np.result_type(w, float))
    diag[: w.size] = w
    return DiagonalMatrix(Role.WINDOW, diag)


def build_commutator(e, m_ch: int) -> SelectionMatrix:
    """``M' x m_ch`` routing matrix: data subchannel ``m`` feeds filter ``e[m]``."""
    _positive(m_ch=m_ch)
    e = np.asarray(e)
    if e.ndim != 1 or e.size == 0:
        raise ValueError("commutator vector must be a non-empty 1-D index vector")
    if not np.issubdtype(e.dtype, np.integer):
        raise ValueError("commutator entries must be integers")
    if e.min() < 0 or e.max() >= m_ch:
        raise ValueError(f"commutator entries must lie in [0, {m_ch - 1}]")
    if np.unique(e).size != e.size:
        raise ValueError("commutator entries must be distinct")
    return SelectionMatrix(Role.COMMUTATOR, (e.size, m_ch), e)


def build_multiplexer(E) -> DenseMatrix:
    """Wrap a user-supplied 0-1 routing matrix (E2 or the auxiliary E3)."""
    E = np.atleast_2d(np.asarray(E, dtype=float))
    if not np.isin(E, (0.0, 1.0)).all():
        raise ValueError("multiplexer matrices must be 0-1 valued")
    return DenseMatrix(Role.MULTIPLEXER, E)


def build_stream_combiner(pattern, n: int) -> KronIdentityMatrix:
    """Stream combiner ``pattern ⊗ I_n`` (``K·n x P·n``)."""
    _positive(n=n)
    return KronIdentityMatrix(Role.MULTIPLEXER, np.asarray(pattern, dtype=complex), n)
