import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from mcframe import engine, presets
from mcframe.cli import parse_config, shipped_config
from mcframe.config import to_document, validate

GOLDEN = json.loads((Path(__file__).parent / "golden" / "presets.json").read_text())


def expand(value):
    if not isinstance(value, dict):
        return value
    (kind, arg), = value.items()
    if kind == "ones":
        return np.ones(arg)
    if kind == "range":
        return np.arange(arg)
    if kind == "ones_column":
        return np.ones((arg, 1))
    if kind == "select_last":
        m, n = arg
        return np.hstack([np.zeros((m, n - m)), np.eye(m)])
    if kind == "prototype":
        return presets.default_prototype(arg)
    raise KeyError(kind)


@pytest.mark.parametrize("name", sorted(presets.PRESETS))
def test_matches_golden_table(name):
    doc = to_document(presets.PRESETS[name]().config)
    golden = GOLDEN[name]
    assert set(doc) == set(golden)
    for key, want in golden.items():
        got = doc[key]
        if isinstance(want, dict):
            np.testing.assert_array_equal(np.asarray(got, dtype=float), expand(want), err_msg=key)
        else:
            assert got == want, key


@pytest.mark.parametrize("name", sorted(presets.PRESETS))
def test_shipped_config_equals_preset(name):
    assert parse_config(shipped_config(name)) == presets.PRESETS[name]().config


def test_all_presets_validate():
    layouts = presets.check_all()
    assert layouts["cp-ofdm"].n_double_prime == 160
    assert layouts["sc-fdma"].n_double_prime == 160
    assert layouts["fbmc-oqam"].n_c1 == 6528


class TestOfdm:
    def test_derived_lengths(self):
        lay = validate(presets.preset_ofdm().config)
        assert lay.n_c1 == 128 and lay.n_s2 == 160 and lay.stride == 160

    def test_partial_loading(self):
        p = presets.preset_ofdm(subcarriers=range(-16, 16))
        assert p.config.n_occupied == 32
        assert p.config.commutator[0] == 112
        x = np.zeros(32, dtype=complex)
        x[16] = 1  # bin 0
        np.testing.assert_allclose(p.modulate(x).output(0), np.ones(160), atol=1e-13)


class TestScfdma:
    def test_flags(self):
        cfg = presets.preset_scfdma().config
        assert cfg.stage1.conj and cfg.transpose

    def test_stage_two_input_row(self):
        cfg = presets.preset_scfdma().config
        lay = validate(cfg)
        assert lay.stage2_rows == 1
        x = np.arange(1, 33, dtype=complex)
        y = engine.stage_filter(x[None, :], cfg.stage1).values
        r = engine.multiplex(y, cfg.mux, cfg.mux_aux, True).values
        assert r.shape == (1, 128)
        assert not r[0, :96].any() and np.all(r[0, 96:] != 0)

    def test_output_length(self):
        assert len(presets.preset_scfdma().modulate(np.ones(32))) == 160


class TestFbmc:
    def test_offsets_and_streams(self):
        cfg = presets.preset_fbmc_oqam().config
        assert cfg.stage1.offsets == (0, 16)
        assert cfg.n_streams == 2 and cfg.n_outputs == 1

    def test_period_threshold(self):
        assert presets.linear_period(200, 32, 129, 16, 32) == 6528
        assert presets.linear_period(200, 32, 1, 0, 32) == 6400

    def test_default_prototype(self):
        h = presets.default_prototype(32)
        assert h.size == 129
        np.testing.assert_allclose(h, h[::-1], atol=1e-12)
        assert np.isrealobj(h)

    def test_custom_prototype(self, tmp_path):
        path = tmp_path / "proto.txt"
        path.write_text("\n".join(["0.5", "1.0", "0.5"]))
        p = presets.preset_fbmc_oqam(presets.load_prototype(path), m1=4, n=4)
        assert p.config.stage1.taps == (0.5, 1.0, 0.5)
        assert validate(p.config).n_c1 == 20

    def test_missing_prototype_size(self):
        with pytest.raises(FileNotFoundError, match="pass one explicitly"):
            presets.default_prototype(12)

    def test_symbols_per_frame(self):
        assert presets.preset_fbmc_oqam().symbols_per_frame == 6400


class TestOqamMap:
    def test_even_subchannel(self):
        a = np.zeros((1, 2), dtype=complex)
        a[0, 0] = 1 + 2j
        x = presets.oqam_map(a)
        assert x[0, 0, 0] == 1 and x[1, 0, 0] == 2j

    def test_odd_subchannel(self):
        a = np.zeros((1, 2), dtype=complex)
        a[0, 1] = 3 - 1j
        x = presets.oqam_map(a)
        assert x[0, 0, 1] == -1j and x[1, 0, 1] == 3

    def test_real_input(self):
        x = presets.oqam_map(np.arange(12.0).reshape(3, 4))
        assert not x[1][:, ::2].any()

    @given(hnp.arrays(complex, st.tuples(st.integers(1, 5), st.integers(1, 6)),
                      elements=st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)))
    def test_invertible(self, a):
        np.testing.assert_array_equal(presets.oqam_unmap(presets.oqam_map(a)), a)

    def test_phase(self):
        ph = presets.oqam_phase(2, 3)
        np.testing.assert_array_equal(ph[0, 0], [1, 1j, 1])
        np.testing.assert_array_equal(ph[1, 1], [1j, 1, 1j])


def test_unknown_preset():
    with pytest.raises(ValueError, match="unknown preset"):
        presets.get_preset("ufmc")
