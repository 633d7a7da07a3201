"""Discrete-event timeline for LO switching and Tx power sampling.

A command schedule (register writes, packet markers, an optional trigger)
expands into timed events with the wire and power-up latencies applied,
and the event list can then be sampled onto a uniform grid the way a
signal analyzer in zero-span mode would see it.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .ensm import Direction
from .errors import MeasurementError, OverlappingSpiError, ScheduleError
from .params import ClockConfig, TimingProfile
from .rf import Band, RfModelParams
from .spi import frame_duration_ns


class CommandKind(Enum):
    LO_ON = "lo-on"
    LO_OFF = "lo-off"
    TX_PACKET_START = "tx-packet-start"
    TX_PACKET_END = "tx-packet-end"
    TRIGGER = "trigger"


@dataclass(frozen=True)
class Command:
    time_ns: int
    kind: CommandKind

    def __post_init__(self):
        if self.time_ns < 0:
            raise ValueError(f"command time must be non-negative, got {self.time_ns}")


class Effect(Enum):
    SPI_START = "spi-start"
    SPI_END = "spi-end"
    LO_POWERED_UP = "lo-powered-up"
    LO_POWERED_DOWN = "lo-powered-down"
    PACKET_ON = "packet-on"
    PACKET_OFF = "packet-off"


@dataclass(frozen=True)
class SimEvent:
    time_ns: int | Fraction
    effect: Effect
    power_after_dbr: float
    # set when the event is legal for the hardware but suspicious for the
    # protocol, e.g. a packet transmitted with the LO divider down
    warning: str | None = None


def _level(lo_on: bool, packet_on: bool, band: Band, rf: RfModelParams) -> float:
    if not lo_on:
        return 0.0
    level = rf.lo_on_delta_db[band]
    if packet_on:
        level += rf.packet_delta_db
    return level


def _validate_schedule(commands):
    last_time = None
    packet_open = False
    for cmd in commands:
        if last_time is not None and cmd.time_ns < last_time:
            raise ScheduleError(
                f"schedule not sorted: {cmd.kind.value} at {cmd.time_ns} ns "
                f"after {last_time} ns"
            )
        last_time = cmd.time_ns
        if cmd.kind is CommandKind.TX_PACKET_START:
            if packet_open:
                raise ScheduleError(
                    f"packet start at {cmd.time_ns} ns inside an open packet"
                )
            packet_open = True
        elif cmd.kind is CommandKind.TX_PACKET_END:
            if not packet_open:
                raise ScheduleError(
                    f"packet end at {cmd.time_ns} ns without a matching start"
                )
            packet_open = False
    if packet_open:
        raise ScheduleError("schedule leaves a packet open (missing end)")


def infer_initial_lo_on(commands) -> bool:
    """LO starts on exactly when the first LO command switches it off."""
    for cmd in commands:
        if cmd.kind is CommandKind.LO_ON:
            return False
        if cmd.kind is CommandKind.LO_OFF:
            return True
    return False


def expand_schedule(
    commands,
    clocks: ClockConfig,
    profile: TimingProfile,
    band: Band = Band.B2G4,
    rf: RfModelParams | None = None,
    initial_lo_on: bool | None = None,
) -> list[SimEvent]:
    """Expand commands into timed events with latencies applied.

    An LO command turns into the SPI frame (start, end after the wire time)
    followed by the divider state change after its power-up or power-down
    delay. A second LO command before the previous frame has left the wire
    is rejected. Trigger commands mark a measurement reference and produce
    no event.
    """
    if rf is None:
        rf = RfModelParams()
    commands = list(commands)
    _validate_schedule(commands)
    if initial_lo_on is None:
        initial_lo_on = infer_initial_lo_on(commands)

    frame_ns = frame_duration_ns(clocks)
    pending = []  # (time, effect)
    spi_busy_until = None
    for cmd in commands:
        if cmd.kind in (CommandKind.LO_ON, CommandKind.LO_OFF):
            if spi_busy_until is not None and cmd.time_ns < spi_busy_until:
                raise OverlappingSpiError(
                    f"register write at {cmd.time_ns} ns overlaps the frame "
                    f"that ends at {spi_busy_until} ns"
                )
            end = cmd.time_ns + frame_ns
            spi_busy_until = end
            pending.append((cmd.time_ns, Effect.SPI_START))
            pending.append((end, Effect.SPI_END))
            if cmd.kind is CommandKind.LO_ON:
                pending.append((end + profile.lo_div_powerup_ns, Effect.LO_POWERED_UP))
            else:
                pending.append(
                    (end + profile.lo_div_powerdown_ns, Effect.LO_POWERED_DOWN)
                )
        elif cmd.kind is CommandKind.TX_PACKET_START:
            pending.append((cmd.time_ns, Effect.PACKET_ON))
        elif cmd.kind is CommandKind.TX_PACKET_END:
            pending.append((cmd.time_ns, Effect.PACKET_OFF))
        # TRIGGER: reference only

    pending.sort(key=lambda item: item[0])  # stable for simultaneous events

    events = []
    lo_on = initial_lo_on
    packet_on = False
    for time_ns, effect in pending:
        warning = None
        if effect is Effect.LO_POWERED_UP:
            lo_on = True
        elif effect is Effect.LO_POWERED_DOWN:
            lo_on = False
        elif effect is Effect.PACKET_ON:
            packet_on = True
            if not lo_on:
                warning = "packet transmitted while the LO divider is down"
        elif effect is Effect.PACKET_OFF:
            packet_on = False
        events.append(
            SimEvent(
                time_ns=time_ns,
                effect=effect,
                power_after_dbr=_level(lo_on, packet_on, band, rf),
                warning=warning,
            )
        )
    return events


def find_trigger_ns(commands):
    """Measurement reference: the trigger command, else the first LO write."""
    for cmd in commands:
        if cmd.kind is CommandKind.TRIGGER:
            return cmd.time_ns
    for cmd in commands:
        if cmd.kind in (CommandKind.LO_ON, CommandKind.LO_OFF):
            return cmd.time_ns
    return None


@dataclass(frozen=True)
class PowerTrace:
    start_ns: int
    interval_ns: int
    samples: tuple[float, ...]

    def times_ns(self):
        return tuple(
            self.start_ns + k * self.interval_ns for k in range(len(self.samples))
        )


def _baseline_level(events, band: Band, rf: RfModelParams) -> float:
    """Power level in force before the first event."""
    if not events:
        return 0.0
    first = events[0]
    if first.effect in (Effect.SPI_START, Effect.SPI_END):
        return first.power_after_dbr
    if first.effect is Effect.LO_POWERED_UP:
        return 0.0
    if first.effect is Effect.LO_POWERED_DOWN:
        return rf.lo_on_delta_db[band]
    if first.effect is Effect.PACKET_ON:
        if first.power_after_dbr == 0.0:
            return 0.0
        return first.power_after_dbr - rf.packet_delta_db
    # PACKET_OFF: undo the packet contribution if the LO was up
    if first.power_after_dbr > 0.0:
        return first.power_after_dbr + rf.packet_delta_db
    return 0.0


def sample_trace(
    events,
    window,
    interval_ns: int = 50,
    band: Band = Band.B2G4,
    rf: RfModelParams | None = None,
    settling_tau_ns: float = 0.0,
) -> PowerTrace:
    """Sample the event list onto a uniform grid over `window`.

    The model power is piecewise constant; a sample landing exactly on an
    event takes the post-event level. With settling_tau_ns > 0 each step
    relaxes exponentially toward its target instead of jumping, purely for
    plot realism.
    """
    if rf is None:
        rf = RfModelParams()
    start_ns, end_ns = window
    if interval_ns <= 0:
        raise ValueError("interval_ns must be positive")
    if end_ns < start_ns:
        raise ValueError(f"invalid window: {window}")

    events = sorted(events, key=lambda ev: ev.time_ns)
    count = int((end_ns - start_ns) // interval_ns) + 1
    baseline = _baseline_level(events, band, rf)

    samples = []
    index = 0
    level = baseline
    # state for first-order settling: actual value at the last event time
    last_change_t = None
    value_at_change = baseline
    for k in range(count):
        t = start_ns + k * interval_ns
        while index < len(events) and events[index].time_ns <= t:
            new_level = events[index].power_after_dbr
            if settling_tau_ns > 0 and new_level != level:
                value_at_change = _settled(
                    level, value_at_change, last_change_t, events[index].time_ns,
                    settling_tau_ns,
                )
                last_change_t = events[index].time_ns
            level = new_level
            index += 1
        if settling_tau_ns > 0:
            samples.append(
                _settled(level, value_at_change, last_change_t, t, settling_tau_ns)
            )
        else:
            samples.append(level)
    return PowerTrace(start_ns=start_ns, interval_ns=interval_ns, samples=tuple(samples))


def _settled(target, value_at_change, change_t, t, tau):
    if change_t is None:
        return float(target)
    dt = float(t - change_t)
    return float(target + (value_at_change - target) * math.exp(-dt / tau))


def measure_turnaround(trace: PowerTrace, trigger_ns, direction: Direction):
    """Time from the trigger to the first sample past the step midpoint.

    The pre level is the mean of samples up to the trigger, the settled
    level is the mean of the last tenth of the trace; the crossing is the
    first post-trigger sample at or beyond their midpoint (rising for
    rx-to-tx, falling for tx-to-rx). Quantized to the sample grid by
    construction.
    """
    times = trace.times_ns()
    pre = [v for t, v in zip(times, trace.samples) if t <= trigger_ns]
    post = [(t, v) for t, v in zip(times, trace.samples) if t > trigger_ns]
    if not pre or not post:
        raise MeasurementError("trigger outside the sampled window")

    pre_level = sum(pre) / len(pre)
    settle_count = max(1, len(post) // 10)
    post_level = sum(v for _, v in post[-settle_count:]) / settle_count
    rising = direction is Direction.RX_TO_TX
    stepped = post_level > pre_level if rising else post_level < pre_level
    if not stepped:
        raise MeasurementError(
            f"no {'rising' if rising else 'falling'} step after the trigger"
        )
    midpoint = (pre_level + post_level) / 2.0
    for t, v in post:
        if (rising and v >= midpoint) or (not rising and v <= midpoint):
            return t - trigger_ns
    raise MeasurementError(
        f"no {'rising' if rising else 'falling'} crossing after the trigger"
    )


def _fmt2(value: float) -> str:
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


def trace_to_csv(trace: PowerTrace) -> str:
    """CSV export: time in microseconds and power in dB, two decimals each."""
    lines = ["time_us,power_db"]
    for t, v in zip(trace.times_ns(), trace.samples):
        lines.append(f"{_fmt2(t / 1000.0)},{_fmt2(v)}")
    return "\n".join(lines) + "\n"
