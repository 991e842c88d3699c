"""Smoke tests for the python bindings; depth lives in the C++ suites."""

import math

import numpy as np
import pytest

import trustlink as tl


def test_field_and_rs_roundtrip():
    f = tl.GfField(4, 0b10011)
    assert f.size == 16
    assert f.mul(3, 7) == f.mul(7, 3)
    assert f.mul(f.inv(5), 5) == 1

    code = tl.RsCode(f, nroots=4, k=9)
    msg = [1, 5, 9, 0, 2, 7, 15, 3, 8]
    cw = list(code.encode(msg))
    assert cw[: len(msg)] == msg
    cw[0] ^= 3
    cw[11] ^= 9
    ok, decoded, corrected = code.decode(cw)
    assert ok and decoded == msg and corrected == 2


def test_envelope_roundtrip_and_tamper():
    pk, sk = tl.keygen(11)
    wire = tl.seal(b"payload bytes" * 10, pk, seed=5)
    ok, message = tl.open(wire, sk)
    assert ok and message == b"payload bytes" * 10

    bad = bytearray(wire)
    bad[len(bad) // 2] ^= 1
    ok, _ = tl.open(bytes(bad), sk)
    assert not ok


def test_digest_matches_hashlib():
    import hashlib

    for m in (b"", b"abc", b"0123456789" * 31):
        assert tl.sha3_256(m) == hashlib.sha3_256(m).digest()
        assert tl.digest128(m) == hashlib.sha3_256(m).digest()[:16]


def test_feature_tensor_serialization():
    t = tl.generate_features([3, 5], seed=2)
    assert len(t.data) == 15
    blob = tl.serialize_features(t)
    back = tl.deserialize_features(blob)
    assert list(back.dims) == [3, 5]
    assert np.allclose(back.data, t.data)


def test_symbol_packing():
    symbols, byte_len = tl.pack_symbols(b"\xff" * 9)
    assert list(symbols) == [0x3FFFF] * 4 and byte_len == 9
    assert tl.unpack_symbols(symbols, byte_len) == b"\xff" * 9


def test_qpsk_and_detector_against_numpy():
    bits = [0, 0, 0, 1, 1, 0, 1, 1]
    sym = tl.modulate_qpsk(bits)
    assert len(sym) == 4
    assert sym[0] == pytest.approx((1 + 1j) / math.sqrt(2))
    assert tl.demodulate_qpsk(sym) == bits

    ch = tl.sample_channel(tl.ChannelModel.rayleigh, 4, 3, snr_db=10.0, seed=3)
    h = np.asarray(ch.H)
    assert h.shape == (4, 3)
    x = np.asarray(tl.modulate_qpsk([0, 1] * 30)).reshape(3, 10)
    y = tl.transmit(ch, x, seed=9)
    estimates, stream_bits = tl.zf_lmmse_detect(ch, y)

    ratio = ch.noise_var / ch.signal_var
    w = np.linalg.solve(h.conj().T @ h + ratio * np.eye(3), h.conj().T @ np.asarray(y))
    assert np.linalg.norm(np.asarray(estimates) - w) / np.linalg.norm(w) < 1e-9
    assert len(stream_bits) == 3


def test_run_link_clean_channel():
    cfg = tl.LinkConfig()
    cfg.snr_db = 30.0
    cfg.master_seed = 1
    cfg.feature_dims = [4, 8]
    t = tl.generate_features([4, 8], seed=1)
    rep = tl.run_link(t, cfg)
    assert rep.success
    assert rep.frames_accepted == 1
    assert rep.undetected_errors == 0
    assert rep.feature_mse() == 0.0


def test_sweep_rows_and_csv(tmp_path):
    spec = tl.SweepSpec()
    spec.channels = [tl.ChannelModel.awgn]
    spec.snrs_db = [30.0]
    spec.frames = 1
    spec.feature_dims = [4, 8]
    spec.seed = 5
    rows = tl.run_sweep(spec)
    assert len(rows) == 2  # rs on + off
    assert rows[0].rs_enabled and not rows[1].rs_enabled
    assert rows[0].frame_success_rate == 1.0

    out = tmp_path / "sweep.csv"
    tl.write_csv(rows, str(out))
    lines = out.read_text().splitlines()
    assert lines[0] == tl.csv_header()
    assert len(lines) == 3


def test_error_paths_raise():
    with pytest.raises(Exception):
        tl.GfField(3, 0b1111)  # not primitive
    with pytest.raises(Exception):
        tl.generate_features([], seed=0)
