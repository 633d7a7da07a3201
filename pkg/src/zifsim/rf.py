"""Receiver noise-floor model and I/Q capture analysis.

Power values are relative dB: the quiet receiver floor in a trace is 0 dBr
and capture powers are dB relative to unit sample power. The per-mode
noise-floor numbers are calibrated model parameters, chosen to reproduce
bench measurements of an AD9361-class front-end with orthogonal antennas
and 62 dB manual gain; they are regression targets, not physical claims.
"""

import math
import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .ensm import EnsmMode
from .errors import DataError, FilterRefusedError

IQ_LIMIT = 32767  # samples are signed 16-bit


class Band(Enum):
    B2G4 = "2g4"  # Wi-Fi channel 1
    B5G = "5g"  # Wi-Fi channel 44


def _per_band(b2g4: float, b5g: float) -> dict:
    return {Band.B2G4: b2g4, Band.B5G: b5g}


@dataclass(frozen=True)
class RfModelParams:
    """Calibrated power levels, per band where leakage is band-dependent."""

    # Tx power step when the LO divider comes up, relative to LO-off.
    lo_on_delta_db: dict = field(default_factory=lambda: _per_band(30.0, 22.0))
    # Extra step at packet start; trace cosmetics only.
    packet_delta_db: float = 15.0
    # Rx noise floor per switching strategy.
    base_rx_floor_db: dict = field(default_factory=lambda: _per_band(53.3, 53.7))
    fdd_rx_floor_db: dict = field(default_factory=lambda: _per_band(66.4, 58.0))
    locontrol_rx_floor_db: dict = field(default_factory=lambda: _per_band(53.0, 53.4))
    # Manual AGC setting the floors were calibrated at; metadata only.
    agc_gain_db: float = 62.0

    def __post_init__(self):
        for band in Band:
            values = (
                self.lo_on_delta_db[band],
                self.base_rx_floor_db[band],
                self.fdd_rx_floor_db[band],
                self.locontrol_rx_floor_db[band],
            )
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"non-finite rf parameter for band {band.value}")
            if self.fdd_rx_floor_db[band] < self.locontrol_rx_floor_db[band]:
                raise ValueError(
                    f"fdd floor below lo-control floor for band {band.value}"
                )


def rx_noise_floor(mode: EnsmMode, band: Band, params: RfModelParams) -> float:
    """Average relative noise power at the receiver for one mode and band."""
    if mode in (EnsmMode.FDD, EnsmMode.FDD_INDEPENDENT):
        return params.fdd_rx_floor_db[band]
    if mode is EnsmMode.LO_CONTROL:
        return params.locontrol_rx_floor_db[band]
    # remaining modes are the TDD family: the Tx chain is truly off in Rx
    return params.base_rx_floor_db[band]


def noise_floor_delta(
    mode_a: EnsmMode, mode_b: EnsmMode, band: Band, params: RfModelParams
) -> float:
    return rx_noise_floor(mode_a, band, params) - rx_noise_floor(mode_b, band, params)


@dataclass
class IqCapture:
    """Raw receiver samples: (i, q) pairs as signed 16-bit integers."""

    samples: np.ndarray  # shape (n, 2)
    sample_rate_hz: int = 20_000_000
    band: Band | None = None
    mode: EnsmMode | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 2 or samples.shape[1] != 2:
            raise ValueError(f"samples must have shape (n, 2), got {samples.shape}")
        # check in int64 so abs(-32768) does not wrap in int16
        if samples.size and int(np.abs(samples.astype(np.int64)).max()) > IQ_LIMIT:
            raise ValueError(f"sample magnitude exceeds {IQ_LIMIT}")
        self.samples = samples.astype(np.int16)

    def __len__(self):
        return self.samples.shape[0]


def average_power_db(capture: IqCapture) -> float:
    """10*log10 of mean(i^2 + q^2), relative dB."""
    if len(capture) == 0:
        raise DataError("cannot average an empty capture")
    iq = capture.samples.astype(np.float64)
    mean_power = float(np.mean(iq[:, 0] ** 2 + iq[:, 1] ** 2))
    if mean_power == 0.0:
        raise DataError("all-zero capture has no finite power")
    return 10.0 * math.log10(mean_power)


def sample_power_db(capture: IqCapture) -> np.ndarray:
    """Per-sample power in dB; zero samples map to -inf."""
    iq = capture.samples.astype(np.float64)
    power = iq[:, 0] ** 2 + iq[:, 1] ** 2
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(power)


@dataclass
class PacketFilterResult:
    kept: np.ndarray  # remaining power series
    keep_mask: np.ndarray  # bool, aligned with the input series
    samples_filtered: int


def filter_packets(
    power_series,
    threshold_db_above_median: float = 10.0,
    guard_samples: int = 16,
) -> PacketFilterResult:
    """Strip bursts (stray packets) from a per-sample power series.

    Every maximal run of samples more than the threshold above the series
    median is removed, together with guard_samples on each side of the run.
    Refuses when that would discard more than 90% of the series, since the
    remainder would not be a trustworthy floor estimate.
    """
    series = np.asarray(power_series, dtype=np.float64)
    if series.size == 0:
        raise ValueError("power series is empty")
    if threshold_db_above_median <= 0:
        raise ValueError("threshold must be positive")
    if guard_samples < 0:
        raise ValueError("guard_samples must be non-negative")

    hot = series > np.median(series) + threshold_db_above_median
    if hot.any() and guard_samples:
        # center-slice the full convolution; mode="same" returns the window
        # length, not the series length, when the series is shorter
        window = np.ones(2 * guard_samples + 1)
        spread = np.convolve(hot.astype(np.float64), window, mode="full")
        removed = spread[guard_samples:guard_samples + series.size] > 0
    else:
        removed = hot

    n_removed = int(removed.sum())
    if n_removed > 0.9 * series.size:
        raise FilterRefusedError(
            f"filter would remove {n_removed} of {series.size} samples; "
            "series is too noisy to estimate a floor"
        )
    keep_mask = ~removed
    return PacketFilterResult(
        kept=series[keep_mask], keep_mask=keep_mask, samples_filtered=n_removed
    )


@dataclass
class NoiseFloorReport:
    average_power_db: float
    sample_count_used: int
    samples_filtered: int


def noise_floor_report(
    capture: IqCapture,
    threshold_db_above_median: float = 10.0,
    guard_samples: int = 16,
) -> NoiseFloorReport:
    """Full analysis pipeline: per-sample power, burst filter, average."""
    result = filter_packets(
        sample_power_db(capture), threshold_db_above_median, guard_samples
    )
    remaining = IqCapture(
        capture.samples[result.keep_mask],
        sample_rate_hz=capture.sample_rate_hz,
        band=capture.band,
        mode=capture.mode,
    )
    return NoiseFloorReport(
        average_power_db=average_power_db(remaining),
        sample_count_used=len(remaining),
        samples_filtered=result.samples_filtered,
    )


def save_capture(capture: IqCapture, path, agc_db: float | None = None) -> None:
    """Write a capture as little-endian interleaved int16 (i0,q0,i1,q1,...).

    Metadata goes to a `<path>.meta` sidecar as `key = value` lines with
    keys sample_rate_hz, band, mode, agc_db (band/mode/agc only if known).
    """
    with open(path, "wb") as fh:
        fh.write(capture.samples.astype("<i2").tobytes())
    lines = [f"sample_rate_hz = {capture.sample_rate_hz}"]
    if capture.band is not None:
        lines.append(f"band = {capture.band.value}")
    if capture.mode is not None:
        lines.append(f"mode = {capture.mode.value}")
    if agc_db is not None:
        lines.append(f"agc_db = {agc_db}")
    with open(f"{path}.meta", "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sidecar(meta_path) -> dict:
    entries = {}
    with open(meta_path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DataError(f"malformed sidecar line: {line!r}")
            key, _, value = line.partition("=")
            entries[key.strip()] = value.strip()
    return entries


def load_capture(path) -> IqCapture:
    """Read the binary capture format; sidecar metadata is used if present."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob:
        raise DataError(f"capture file {path} is empty")
    if len(blob) % 4:
        raise DataError(
            f"capture file {path} is {len(blob)} bytes, not a whole number "
            "of int16 i/q pairs"
        )
    samples = np.frombuffer(blob, dtype="<i2").reshape(-1, 2)

    sample_rate_hz = 20_000_000
    band = None
    mode = None
    meta_path = f"{path}.meta"
    if os.path.exists(meta_path):
        meta = read_sidecar(meta_path)
        if "sample_rate_hz" in meta:
            sample_rate_hz = int(meta["sample_rate_hz"])
        if "band" in meta:
            band = Band(meta["band"])
        if "mode" in meta:
            mode = EnsmMode(meta["mode"])
    return IqCapture(samples, sample_rate_hz=sample_rate_hz, band=band, mode=mode)


def synthesize_capture(
    mode: EnsmMode,
    band: Band,
    params: RfModelParams,
    n_samples: int,
    seed: int,
) -> IqCapture:
    """Complex white noise whose average power matches the modeled floor.

    Deterministic for a given seed; i and q are drawn independently so the
    expected mean of i^2 + q^2 equals the floor converted out of dB.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    target = 10.0 ** (rx_noise_floor(mode, band, params) / 10.0)
    sigma = math.sqrt(target / 2.0)
    rng = np.random.default_rng(seed)
    iq = rng.normal(0.0, sigma, size=(n_samples, 2))
    iq = np.clip(np.rint(iq), -IQ_LIMIT, IQ_LIMIT).astype(np.int16)
    return IqCapture(iq, band=band, mode=mode)
