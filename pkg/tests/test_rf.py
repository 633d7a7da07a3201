"""RF state mapping, capture analysis, burst filtering, capture files."""

import math
import random

import numpy as np
import pytest

from zifsim import (
    Band,
    DataError,
    EnsmMode,
    FilterRefusedError,
    IqCapture,
    RfModelParams,
    average_power_db,
    filter_packets,
    load_capture,
    noise_floor_delta,
    noise_floor_report,
    rx_noise_floor,
    sample_power_db,
    save_capture,
    synthesize_capture,
)

from conftest import (
    brute_force_average_db,
    brute_force_keep_mask,
    make_burst_capture,
    make_burst_series,
)

TDD_MODES = (EnsmMode.STANDARD_ENSM_TDD, EnsmMode.STANDARD_TDD,
             EnsmMode.STANDARD_TDD_DUAL_SYNTH)


def test_noise_floor_lookup(rf):
    assert rx_noise_floor(EnsmMode.FDD, Band.B2G4, rf) == 66.4
    assert rx_noise_floor(EnsmMode.FDD, Band.B5G, rf) == 58.0
    assert rx_noise_floor(EnsmMode.FDD_INDEPENDENT, Band.B2G4, rf) == 66.4
    assert rx_noise_floor(EnsmMode.LO_CONTROL, Band.B2G4, rf) == 53.0
    assert rx_noise_floor(EnsmMode.LO_CONTROL, Band.B5G, rf) == 53.4
    for mode in TDD_MODES:
        assert rx_noise_floor(mode, Band.B2G4, rf) == 53.3
        assert rx_noise_floor(mode, Band.B5G, rf) == 53.7


def test_floor_ordering_per_band(rf):
    for band in Band:
        fdd = rx_noise_floor(EnsmMode.FDD, band, rf)
        tdd = rx_noise_floor(EnsmMode.STANDARD_ENSM_TDD, band, rf)
        lo = rx_noise_floor(EnsmMode.LO_CONTROL, band, rf)
        assert fdd >= tdd >= lo


def test_noise_floor_deltas(rf):
    assert noise_floor_delta(EnsmMode.FDD, EnsmMode.LO_CONTROL, Band.B2G4, rf) \
        == pytest.approx(13.4)
    assert noise_floor_delta(EnsmMode.FDD, EnsmMode.LO_CONTROL, Band.B5G, rf) \
        == pytest.approx(4.6)
    for mode in EnsmMode:
        assert noise_floor_delta(mode, mode, Band.B2G4, rf) == 0.0


def test_lo_on_deltas(rf):
    assert rf.lo_on_delta_db[Band.B2G4] == 30.0
    assert rf.lo_on_delta_db[Band.B5G] == 22.0


def test_params_validation():
    with pytest.raises(ValueError):
        RfModelParams(fdd_rx_floor_db={Band.B2G4: 50.0, Band.B5G: 58.0})
    with pytest.raises(ValueError):
        RfModelParams(lo_on_delta_db={Band.B2G4: float("nan"), Band.B5G: 22.0})


def test_capture_validation():
    with pytest.raises(ValueError):
        IqCapture(np.zeros((4, 3), dtype=np.int16))
    with pytest.raises(ValueError):
        IqCapture(np.array([[40_000, 0]], dtype=np.int32))
    with pytest.raises(ValueError):
        # -32768 fits in int16 but exceeds the +/-32767 magnitude limit
        IqCapture(np.array([[-32768, 0]], dtype=np.int16))
    capture = IqCapture(np.array([[1, -1], [2, -2]], dtype=np.int16))
    assert len(capture) == 2


def test_average_power_known_values():
    ones = IqCapture(np.tile(np.array([[1, 0]], dtype=np.int16), (50, 1)))
    assert average_power_db(ones) == pytest.approx(0.0, abs=1e-12)
    tens = IqCapture(np.tile(np.array([[10, 0]], dtype=np.int16), (50, 1)))
    assert average_power_db(tens) == pytest.approx(20.0, abs=1e-12)


def test_average_power_error_cases():
    with pytest.raises(DataError):
        average_power_db(IqCapture(np.empty((0, 2), dtype=np.int16)))
    with pytest.raises(DataError):
        average_power_db(IqCapture(np.zeros((10, 2), dtype=np.int16)))


def test_average_power_matches_brute_force():
    rng = np.random.default_rng(42)
    samples = rng.integers(-3000, 3000, size=(500, 2)).astype(np.int16)
    samples[0] = (1, 1)  # guard against the all-zero case
    capture = IqCapture(samples)
    assert average_power_db(capture) == pytest.approx(
        brute_force_average_db(samples.tolist()), abs=1e-9
    )


def test_average_power_scale_covariance():
    rng = np.random.default_rng(7)
    base = rng.integers(-3000, 3000, size=(400, 2)).astype(np.int16)
    base[0] = (5, 5)
    scaled = (base.astype(np.int32) * 10).astype(np.int16)
    delta = average_power_db(IqCapture(scaled)) - average_power_db(IqCapture(base))
    assert delta == pytest.approx(20.0, abs=1e-9)


def test_sample_power_db_zero_maps_to_neg_inf():
    capture = IqCapture(np.array([[0, 0], [1, 0]], dtype=np.int16))
    power = sample_power_db(capture)
    assert power[0] == -math.inf
    assert power[1] == pytest.approx(0.0)


def test_filter_flat_series_removes_nothing():
    result = filter_packets([5.0] * 100)
    assert result.samples_filtered == 0
    assert result.kept.size == 100


def test_filter_single_sample_retained():
    result = filter_packets([40.0])
    assert result.samples_filtered == 0
    assert list(result.kept) == [40.0]


def test_filter_injected_burst_exact_count():
    # 100-sample burst at +20 dB, guard 16 each side -> exactly 132 removed
    series = [0.0] * 1000
    for k in range(500, 600):
        series[k] = 20.0
    result = filter_packets(series, threshold_db_above_median=10.0,
                            guard_samples=16)
    assert result.samples_filtered == 132
    assert not result.keep_mask[484:616].any()
    assert result.keep_mask[:484].all() and result.keep_mask[616:].all()


def test_filter_burst_at_series_edge_clamps():
    series = [0.0] * 100
    series[0] = 25.0
    result = filter_packets(series, guard_samples=16)
    assert result.samples_filtered == 17  # sample 0 plus 16 to the right


def test_filter_series_shorter_than_guard_window():
    # a hot sample in a series shorter than the dilation window must
    # still yield a mask aligned with the series
    with pytest.raises(FilterRefusedError):
        filter_packets([0.0, 0.0, 25.0, 0.0], guard_samples=16)
    result = filter_packets([0.0, 25.0, 0.0] + [0.0] * 30, guard_samples=16)
    assert len(result.keep_mask) == 33
    assert list(result.keep_mask) == brute_force_keep_mask(
        [0.0, 25.0, 0.0] + [0.0] * 30, 10.0, 16
    )


def test_filter_matches_brute_force_oracle():
    rng = random.Random(13579)
    for _ in range(500):
        n = rng.randint(1, 400)
        series, _ = make_burst_series(rng, n)
        guard = rng.choice((0, 1, 4, 16))
        try:
            result = filter_packets(series, guard_samples=guard)
        except FilterRefusedError:
            oracle = brute_force_keep_mask(series, 10.0, guard)
            assert (len(series) - sum(oracle)) > 0.9 * len(series)
            continue
        assert list(result.keep_mask) == brute_force_keep_mask(series, 10.0, guard)


def test_filter_idempotent_on_burst_fixtures():
    rng = random.Random(24680)
    for _ in range(100):
        series, _ = make_burst_series(rng, rng.randint(50, 400))
        try:
            first = filter_packets(series)
        except FilterRefusedError:
            continue
        second = filter_packets(list(first.kept))
        assert second.samples_filtered == 0


def test_filter_refuses_when_too_much_would_go():
    series = [0.0] * 100
    for k in (0, 33, 66, 99):
        series[k] = 100.0
    with pytest.raises(FilterRefusedError):
        filter_packets(series, guard_samples=16)


def test_filter_validation():
    with pytest.raises(ValueError):
        filter_packets([])
    with pytest.raises(ValueError):
        filter_packets([1.0], threshold_db_above_median=0.0)
    with pytest.raises(ValueError):
        filter_packets([1.0], guard_samples=-1)


def test_synthesize_deterministic_and_calibrated(rf):
    one = synthesize_capture(EnsmMode.FDD, Band.B2G4, rf, 5000, seed=3)
    two = synthesize_capture(EnsmMode.FDD, Band.B2G4, rf, 5000, seed=3)
    assert np.array_equal(one.samples, two.samples)
    other = synthesize_capture(EnsmMode.FDD, Band.B2G4, rf, 5000, seed=4)
    assert not np.array_equal(one.samples, other.samples)
    assert len(one) == 5000
    assert one.band is Band.B2G4 and one.mode is EnsmMode.FDD

    big = synthesize_capture(EnsmMode.FDD, Band.B2G4, rf, 200_000, seed=3)
    assert average_power_db(big) == pytest.approx(66.4, abs=0.05)


def test_synthesize_analyze_closes_the_loop(rf):
    # full pipeline lands within 0.1 dB for every (mode, band) pair
    for mode in (EnsmMode.FDD, EnsmMode.STANDARD_TDD, EnsmMode.LO_CONTROL):
        for band in Band:
            capture = synthesize_capture(mode, band, rf, 100_000, seed=1)
            report = noise_floor_report(capture)
            assert report.average_power_db == pytest.approx(
                rx_noise_floor(mode, band, rf), abs=0.1
            )
            assert report.sample_count_used + report.samples_filtered == 100_000


def test_report_counts_injected_bursts(rf):
    samples = make_burst_capture()
    capture = IqCapture(samples)
    oracle = brute_force_keep_mask(
        list(sample_power_db(capture)), 10.0, 16
    )
    report = noise_floor_report(capture)
    assert report.samples_filtered == len(oracle) - sum(oracle)
    assert report.samples_filtered >= 65  # both bursts plus guards
    kept = [s for s, keep in zip(samples.tolist(), oracle) if keep]
    assert report.average_power_db == pytest.approx(
        brute_force_average_db(kept), abs=1e-9
    )


def test_capture_roundtrip(tmp_path, rf):
    capture = synthesize_capture(EnsmMode.LO_CONTROL, Band.B5G, rf, 256, seed=9)
    path = tmp_path / "capture.iq"
    save_capture(capture, path, agc_db=62.0)

    blob = path.read_bytes()
    assert len(blob) == 256 * 4
    first_i = int.from_bytes(blob[0:2], "little", signed=True)
    first_q = int.from_bytes(blob[2:4], "little", signed=True)
    assert (first_i, first_q) == tuple(capture.samples[0])

    meta = (tmp_path / "capture.iq.meta").read_text()
    assert "sample_rate_hz = 20000000" in meta
    assert "band = 5g" in meta
    assert "mode = lo-control" in meta
    assert "agc_db = 62.0" in meta

    loaded = load_capture(path)
    assert np.array_equal(loaded.samples, capture.samples)
    assert loaded.band is Band.B5G
    assert loaded.mode is EnsmMode.LO_CONTROL
    assert loaded.sample_rate_hz == 20_000_000


def test_load_capture_without_sidecar(tmp_path):
    path = tmp_path / "bare.iq"
    path.write_bytes(b"\x01\x00\x02\x00")
    loaded = load_capture(path)
    assert loaded.band is None and loaded.mode is None
    assert loaded.samples.tolist() == [[1, 2]]


def test_load_capture_error_cases(tmp_path):
    empty = tmp_path / "empty.iq"
    empty.write_bytes(b"")
    with pytest.raises(DataError):
        load_capture(empty)
    odd = tmp_path / "odd.iq"
    odd.write_bytes(b"\x01\x00\x02")
    with pytest.raises(DataError):
        load_capture(odd)


def test_synthesize_validation(rf):
    with pytest.raises(ValueError):
        synthesize_capture(EnsmMode.FDD, Band.B2G4, rf, 0, seed=1)
