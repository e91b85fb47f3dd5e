import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcframe import operators as ops
from mcframe.operators import Role


def _ints(*rows):
    return np.array(rows, dtype=float)


class TestCyclicExtension:
    def test_no_extension_is_identity(self):
        C = ops.build_cyclic_extension(0, 0, 4, 0, 0)
        np.testing.assert_array_equal(C.entries, np.eye(4))

    def test_prefix_and_suffix_of_one(self):
        C = ops.build_cyclic_extension(0, 1, 3, 1, 0)
        expected = _ints((0, 0, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 0))
        np.testing.assert_array_equal(C.entries, expected)

    def test_ofdm_tier2_quarter_prefix(self):
        C = ops.build_cyclic_extension(0, 32, 128, 0, 0)
        assert C.shape == (160, 128)
        np.testing.assert_array_equal(C.entries[:32, 96:], np.eye(32))
        np.testing.assert_array_equal(C.entries[32:], np.eye(128))

    def test_zero_blocks(self):
        C = ops.build_cyclic_extension(2, 0, 3, 0, 1).entries
        assert C.shape == (6, 3)
        assert not C[:2].any() and not C[-1].any()

    @pytest.mark.parametrize("cp, cs", [(5, 0), (0, 5)])
    def test_rejects_extension_longer_than_block(self, cp, cs):
        with pytest.raises(ValueError, match="longer than the block"):
            ops.build_cyclic_extension(0, cp, 4, cs, 0)

    @given(st.integers(0, 3), st.integers(0, 6), st.integers(1, 6), st.integers(0, 6), st.integers(0, 3))
    def test_structure(self, zp, cp, n, cs, zs):
        if cp > n or cs > n:
            return
        C = ops.build_cyclic_extension(zp, cp, n, cs, zs).entries
        assert set(np.unique(C)) <= {0.0, 1.0}
        assert (C.sum(axis=1) <= 1).all()
        np.testing.assert_array_equal(C[zp + cp : zp + cp + n], np.eye(n))


class TestUpsampler:
    def test_unit_factor_is_identity(self):
        np.testing.assert_array_equal(ops.build_upsampler(1, 0, 3).entries, np.eye(3))

    def test_factor_two(self):
        U = ops.build_upsampler(2, 0, 2).entries
        np.testing.assert_array_equal(U, _ints((1, 0), (0, 0), (0, 1), (0, 0)))

    def test_oqam_second_stream(self):
        U = ops.build_upsampler(32, 16, 200).entries
        assert U.shape == (6400, 200)
        assert U[16, 0] == 1 and U[32 * 199 + 16, 199] == 1
        assert U.sum() == 200

    def test_rejects_offset_at_factor(self):
        with pytest.raises(ValueError, match="offset"):
            ops.build_upsampler(4, 4, 3)

    @given(st.integers(1, 6), st.data(), st.integers(1, 10))
    def test_orthonormal_columns(self, L, data, n):
        o = data.draw(st.integers(0, L - 1))
        U = ops.build_upsampler(L, o, n).entries
        assert (U.sum(axis=0) == 1).all()
        np.testing.assert_array_equal(U.T @ U, np.eye(n))


class TestZeroStuffer:
    def test_square_is_identity(self):
        np.testing.assert_array_equal(ops.build_zero_stuffer(4, 4).entries, np.eye(4))

    def test_padding(self):
        Z = ops.build_zero_stuffer(6, 4).entries
        np.testing.assert_array_equal(Z, np.vstack([np.eye(4), np.zeros((2, 4))]))

    def test_fbmc_linear_regime(self):
        # N_c >= L1*N_s + K0 - L1 + max(o) with K0 = 129, L1 = 32, N_s = 200, o = 16
        n_c = 6400 + 129 - 32 + 16
        Z = ops.build_zero_stuffer(n_c, 6400)
        assert Z.shape == (6513, 6400)

    def test_information_loss_rejected(self):
        with pytest.raises(ValueError, match="information loss"):
            ops.build_zero_stuffer(3, 4)


class TestCirculant:
    @pytest.mark.parametrize("n_c", [1, 4, 7])
    def test_delta_is_identity(self, n_c):
        np.testing.assert_array_equal(ops.build_circulant_filter([1], n_c).entries, np.eye(n_c))

    def test_two_taps(self):
        H = ops.build_circulant_filter([1, 1], 3).entries
        np.testing.assert_array_equal(H, _ints((1, 0, 1), (1, 1, 0), (0, 1, 1)))

    def test_ofdm_rectangular_prototype(self):
        H = ops.build_circulant_filter(np.ones(128), 128).entries
        np.testing.assert_array_equal(H, np.ones((128, 128)))

    def test_rejects_long_filter(self):
        with pytest.raises(ValueError, match="exceeds"):
            ops.build_circulant_filter(np.ones(5), 4)

    @settings(max_examples=50)
    @given(st.integers(1, 6), st.integers(0, 10), st.integers(0, 2**32 - 1))
    def test_commutes_with_cyclic_shift(self, K0, extra, seed):
        rng = np.random.default_rng(seed)
        n = K0 + extra
        H = ops.build_circulant_filter(rng.standard_normal(K0) + 1j * rng.standard_normal(K0), n).entries
        shift = np.roll(np.eye(n), 1, axis=0)
        np.testing.assert_allclose(H @ shift, shift @ H, atol=1e-14)

    @settings(max_examples=50)
    @given(st.integers(1, 9), st.integers(0, 12), st.integers(1, 4), st.floats(0, 1), st.integers(0, 2**32 - 1))
    def test_structured_matches_dense(self, K0, extra, cols, density, seed):
        rng = np.random.default_rng(seed)
        n = K0 + extra
        h = rng.standard_normal(K0) + 1j * rng.standard_normal(K0)
        h[rng.random(K0) < 0.3] = 0
        x = (rng.standard_normal((n, cols)) + 1j * rng.standard_normal((n, cols))) * (rng.random((n, 1)) < density)
        H = ops.build_circulant_filter(h, n)
        np.testing.assert_allclose(H.apply(x), H.entries @ x, atol=1e-12)


class TestModulation:
    def test_single_channel_is_ones(self):
        np.testing.assert_array_equal(ops.build_modulation_matrix(5, 1, False).entries, np.ones((5, 1)))

    def test_two_by_two(self):
        F = ops.build_modulation_matrix(2, 2, False).entries
        np.testing.assert_allclose(F, [[1, 1], [1, -1]], atol=1e-15)

    @given(st.integers(1, 40), st.integers(1, 20))
    def test_conjugate_flag(self, n_c, m):
        F0 = ops.build_modulation_matrix(n_c, m, False).entries
        F1 = ops.build_modulation_matrix(n_c, m, True).entries
        np.testing.assert_allclose(F1, F0.conj(), atol=1e-15)
        np.testing.assert_allclose(np.abs(F0), 1, atol=1e-15)


class TestDecimator:
    def test_unit_is_identity(self):
        np.testing.assert_array_equal(ops.build_decimator(1, 0, 5).entries, np.eye(5))

    def test_factor_two_offset_one(self):
        D = ops.build_decimator(2, 1, 4).entries
        np.testing.assert_array_equal(D, _ints((0, 1, 0, 0), (0, 0, 0, 1)))

    def test_rejects_offset(self):
        with pytest.raises(ValueError):
            ops.build_decimator(2, 2, 4)

    @given(st.integers(1, 6), st.data(), st.integers(1, 30))
    def test_orthonormal_rows(self, Q, data, n):
        a = data.draw(st.integers(0, Q - 1))
        D = ops.build_decimator(Q, a, n).entries
        assert D.shape == (n // Q, n)
        np.testing.assert_array_equal(D @ D.T, np.eye(n // Q))


class TestPhaseVector:
    def test_disabled(self):
        np.testing.assert_array_equal(ops.build_phase_vector(8, 33, False), np.ones(8))

    def test_single_tap(self):
        np.testing.assert_array_equal(ops.build_phase_vector(8, 1, True), np.ones(8))

    def test_fbmc_default_length(self):
        m = np.arange(32)
        # direct per-channel evaluation of exp(-2πj m (K0-1) / (2 M))
        direct = np.array([np.exp(-2j * np.pi * k * 128 / 64) for k in m])
        c = ops.build_phase_vector(32, 129, True)
        np.testing.assert_allclose(c, direct, atol=1e-12)
        np.testing.assert_allclose(c, np.ones(32), atol=1e-12)

    def test_general_value(self):
        c = ops.build_phase_vector(4, 2, True)
        np.testing.assert_allclose(c, np.exp(-1j * np.pi * np.arange(4) / 4), atol=1e-15)


class TestWindow:
    def test_ones_is_identity(self):
        np.testing.assert_array_equal(ops.build_window(np.ones(5), 5).entries, np.eye(5))

    def test_zero_padding(self):
        np.testing.assert_array_equal(ops.build_window([1, 1, 1], 5).entries, np.diag([1, 1, 1, 0, 0]))

    def test_rejects_long_window(self):
        with pytest.raises(ValueError):
            ops.build_window(np.ones(6), 5)

    def test_ofdm_window(self):
        np.testing.assert_array_equal(ops.build_window(np.ones(160), 128 + 32).entries, np.eye(160))


class TestCommutator:
    def test_full_load_is_identity(self):
        np.testing.assert_array_equal(ops.build_commutator(np.arange(32), 32).entries, np.eye(32))

    def test_permutation(self):
        E = ops.build_commutator([2, 0], 3).entries
        np.testing.assert_array_equal(E, _ints((0, 0, 1), (1, 0, 0)))

    def test_single_subchannel(self):
        E = ops.build_commutator([5], 8).entries
        assert E.shape == (1, 8) and E[0, 5] == 1 and E.sum() == 1

    @pytest.mark.parametrize("e", [[0, 0], [3], [-1]])
    def test_rejects_bad_entries(self, e):
        with pytest.raises(ValueError):
            ops.build_commutator(e, 3)

    def test_rapply(self):
        E = ops.build_commutator([2, 0], 3)
        x = np.arange(6.0).reshape(3, 2)
        np.testing.assert_array_equal(E.rapply(x), x @ E.entries)


class TestImmutability:
    def test_entries_read_only(self):
        C = ops.build_cyclic_extension(0, 1, 3, 0, 0)
        with pytest.raises(ValueError):
            C.entries[0, 0] = 5

    def test_roles(self):
        assert ops.build_upsampler(2, 0, 2).role is Role.UPSAMPLER
        assert ops.build_window([1], 1).role is Role.WINDOW
        assert ops.build_stream_combiner([[1, 1]], 3).shape == (3, 6)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_selection_structured_paths_match_dense(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    L = int(rng.integers(1, 4))
    builders = [
        ops.build_cyclic_extension(int(rng.integers(0, 3)), int(rng.integers(0, n + 1)), n, int(rng.integers(0, n + 1)), 1),
        ops.build_upsampler(L, int(rng.integers(0, L)), n),
        ops.build_zero_stuffer(n + 2, n),
        ops.build_decimator(L, int(rng.integers(0, L)), n),
        ops.build_window(rng.standard_normal(n), n),
        ops.build_stream_combiner(rng.integers(0, 2, (2, 3)), n),
    ]
    for op in builders:
        x = rng.standard_normal((op.cols, 3)) + 1j * rng.standard_normal((op.cols, 3))
        np.testing.assert_allclose(op.apply(x), op.entries @ x, atol=1e-14)
