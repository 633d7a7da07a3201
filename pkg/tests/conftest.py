"""Shared fixtures and brute-force reference implementations.

The reference implementations here are deliberately slow and simple
(quadratic scans, explicit loops) so they can serve as independent
oracles for the vectorized library code.
"""

import statistics

import numpy as np
import pytest

from zifsim import ClockConfig, RfModelParams, TimingProfile


@pytest.fixture
def clocks():
    return ClockConfig()


@pytest.fixture
def profile():
    return TimingProfile()


@pytest.fixture
def rf():
    return RfModelParams()


def brute_force_keep_mask(series, threshold_db, guard):
    """Quadratic-scan reference for the burst filter's keep mask."""
    series = list(series)
    n = len(series)
    cut = statistics.median(series) + threshold_db
    removed = [False] * n
    for i in range(n):
        if series[i] > cut:
            for j in range(max(0, i - guard), min(n, i + guard + 1)):
                removed[j] = True
    return [not r for r in removed]


def brute_force_average_db(samples):
    """Double-pass mean power over (i, q) rows, plain Python arithmetic."""
    import math

    total = 0.0
    count = 0
    for i, q in samples:
        total += float(i) * float(i) + float(q) * float(q)
        count += 1
    return 10.0 * math.log10(total / count)


def make_burst_series(rng, n):
    """Power series: jittered flat floor plus a few strong bursts.

    Floor jitter stays within +/-1 dB of 0 so the bursts (>= +15 dB) are
    unambiguous against the median + 10 dB cut. Returns the series and the
    list of (start, width) burst extents actually injected.
    """
    series = [rng.uniform(-1.0, 1.0) for _ in range(n)]
    bursts = []
    for _ in range(rng.randint(0, 4)):
        width = rng.randint(1, max(1, n // 10))
        start = rng.randint(0, n - width)
        level = rng.uniform(15.0, 30.0)
        for k in range(start, start + width):
            series[k] = level + rng.uniform(-1.0, 1.0)
        bursts.append((start, width))
    return series, bursts


def make_burst_capture(floor_amplitude=100, n=4000, bursts=((1000, 40), (2500, 25))):
    """Constant-envelope capture with rectangular bursts at +26 dB.

    Deterministic by construction (no RNG), so the expected keep mask is
    exactly computable by the brute-force oracle.
    """
    i = np.full(n, floor_amplitude, dtype=np.int16)
    q = np.full(n, -floor_amplitude, dtype=np.int16)
    for start, width in bursts:
        i[start:start + width] = floor_amplitude * 20
        q[start:start + width] = floor_amplitude * 20
    return np.stack([i, q], axis=1)
