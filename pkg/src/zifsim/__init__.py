"""Turnaround-time and self-interference modeling for zero-IF SDR front-ends.

The package covers the switching behavior of an AD9361-class transceiver:
itemized turnaround budgets per duplexing mode, SPI command encoding for
direct LO divider control, discrete-event simulation of Tx power traces,
receiver noise-floor analysis, and MAC deadline compliance checks.
"""

from .config import (
    NoiseSettings,
    RunConfig,
    TraceSettings,
    default_config,
    dump_config,
    load_config,
    parse_config,
)
from .ensm import (
    BudgetComponent,
    Direction,
    EnsmMode,
    TurnaroundBudget,
    budget_record,
    flush_time_ns,
    sweep_budgets,
    turnaround_budget,
)
from .errors import (
    ConfigError,
    DataError,
    FilterRefusedError,
    MalformedFrameError,
    MeasurementError,
    OverlappingSpiError,
    ScheduleError,
    ZifsimError,
)
from .mac import (
    BUILTIN_DEADLINES,
    ComplianceResult,
    ProtocolDeadline,
    check,
    compliance_matrix,
    matrix_to_csv,
    worst_case_tt_ns,
)
from .params import ClockConfig, TimingProfile, cycles_to_ns, ns_value
from .rf import (
    Band,
    IqCapture,
    NoiseFloorReport,
    PacketFilterResult,
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
from .sim import (
    Command,
    CommandKind,
    PowerTrace,
    SimEvent,
    expand_schedule,
    find_trigger_ns,
    measure_turnaround,
    sample_trace,
    trace_to_csv,
)
from .spi import (
    BitSequence,
    Chain,
    LoDividerCommand,
    LoDividerConfig,
    SpiFrame,
    command_from_frame,
    decode_frame,
    encode_frame,
    frame_duration_ns,
    lo_divider_command,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_DEADLINES",
    "Band",
    "BitSequence",
    "BudgetComponent",
    "Chain",
    "ClockConfig",
    "Command",
    "CommandKind",
    "ComplianceResult",
    "ConfigError",
    "DataError",
    "Direction",
    "EnsmMode",
    "FilterRefusedError",
    "IqCapture",
    "LoDividerCommand",
    "LoDividerConfig",
    "MalformedFrameError",
    "MeasurementError",
    "NoiseFloorReport",
    "NoiseSettings",
    "OverlappingSpiError",
    "PacketFilterResult",
    "PowerTrace",
    "ProtocolDeadline",
    "RfModelParams",
    "RunConfig",
    "ScheduleError",
    "SimEvent",
    "SpiFrame",
    "TimingProfile",
    "TraceSettings",
    "TurnaroundBudget",
    "ZifsimError",
    "average_power_db",
    "budget_record",
    "check",
    "command_from_frame",
    "compliance_matrix",
    "cycles_to_ns",
    "decode_frame",
    "default_config",
    "dump_config",
    "encode_frame",
    "expand_schedule",
    "filter_packets",
    "find_trigger_ns",
    "flush_time_ns",
    "frame_duration_ns",
    "load_capture",
    "load_config",
    "lo_divider_command",
    "matrix_to_csv",
    "measure_turnaround",
    "noise_floor_delta",
    "noise_floor_report",
    "ns_value",
    "parse_config",
    "rx_noise_floor",
    "sample_power_db",
    "sample_trace",
    "save_capture",
    "sweep_budgets",
    "synthesize_capture",
    "trace_to_csv",
    "turnaround_budget",
    "worst_case_tt_ns",
]
