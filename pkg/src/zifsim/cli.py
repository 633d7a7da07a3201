"""Command-line interface.

Subcommands: turnaround (budget sweeps), trace (simulated Tx power over
time), noise (receiver floor analysis, synthetic or from a capture file),
comply (deadline matrix), config (dump settings).

Exit codes: 0 success, 1 runtime or data error, 2 usage or configuration
error, 3 compliance requirement not met.
"""

import argparse
import csv
import io
import json
import sys

from .config import (
    OUTPUT_FORMATS,
    RunConfig,
    default_config,
    dump_config,
    load_config,
)
from .ensm import Direction, EnsmMode, sweep_budgets, turnaround_budget
from .errors import ConfigError, DataError, MeasurementError
from .mac import compliance_matrix, worst_case_tt_ns, check
from .params import ns_value
from .rf import (
    Band,
    load_capture,
    noise_floor_report,
    synthesize_capture,
)
from .sim import (
    CommandKind,
    expand_schedule,
    find_trigger_ns,
    measure_turnaround,
    sample_trace,
    trace_to_csv,
)

MODE_NAMES = [m.value for m in EnsmMode]
BAND_NAMES = [b.value for b in Band]
DIR_NAMES = [d.value for d in Direction]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zifsim",
        description="Turnaround-time and self-interference model for a "
        "zero-IF SDR front-end.",
    )
    parser.add_argument("-c", "--config", metavar="FILE", help="run configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_turn = sub.add_parser("turnaround", help="itemized switching budgets")
    p_turn.add_argument("--mode", choices=MODE_NAMES, help="single mode, itemized")
    p_turn.add_argument("--dir", dest="direction", choices=DIR_NAMES)
    p_turn.add_argument("--all", action="store_true", help="sweep all modes")
    _output_flags(p_turn)

    p_trace = sub.add_parser("trace", help="simulate a Tx power trace")
    p_trace.add_argument("--band", choices=BAND_NAMES)
    _output_flags(p_trace)

    p_noise = sub.add_parser("noise", help="receiver noise-floor analysis")
    p_noise.add_argument("--mode", choices=MODE_NAMES)
    p_noise.add_argument("--band", choices=BAND_NAMES)
    p_noise.add_argument("--n", type=int, help="synthetic sample count")
    p_noise.add_argument("--seed", type=int, help="synthetic noise seed")
    p_noise.add_argument("--capture", metavar="FILE", help="capture file to analyze")
    _output_flags(p_noise)

    p_comply = sub.add_parser("comply", help="deadline compliance matrix")
    p_comply.add_argument("--require", choices=MODE_NAMES, metavar="MODE",
                          help="exit 3 unless MODE passes every deadline")
    p_comply.add_argument("--deadline", action="append", metavar="NAME",
                          help="restrict to named deadlines (repeatable)")
    _output_flags(p_comply)

    p_config = sub.add_parser("config", help="show configuration")
    p_config.add_argument("--dump", action="store_true",
                          help="print the effective configuration")
    return parser


def _output_flags(sub_parser):
    sub_parser.add_argument("--format", choices=OUTPUT_FORMATS)
    sub_parser.add_argument("--out", metavar="PATH", help="output file ('-' = stdout)")


def _cell_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_rows(fieldnames, rows, fmt) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    texts = [[_cell_text(row[name]) for name in fieldnames] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fieldnames)
        writer.writerows(texts)
        return buf.getvalue()
    # table
    widths = [
        max(len(name), *(len(t[i]) for t in texts)) if texts else len(name)
        for i, name in enumerate(fieldnames)
    ]
    numeric = [
        all(isinstance(row[name], (int, float)) and not isinstance(row[name], bool)
            for row in rows)
        if rows
        else False
        for name in fieldnames
    ]

    def line(cells):
        parts = []
        for i, cell in enumerate(cells):
            parts.append(cell.rjust(widths[i]) if numeric[i] else cell.ljust(widths[i]))
        return "  ".join(parts).rstrip()

    out = [line(list(fieldnames))]
    out.extend(line(t) for t in texts)
    return "\n".join(out) + "\n"


class _Emitter:
    """Routes report data and status lines per the --out destination."""

    def __init__(self, out_path: str):
        self.out_path = out_path

    def data(self, text: str):
        if self.out_path == "-":
            sys.stdout.write(text)
        else:
            with open(self.out_path, "w", newline="") as fh:
                fh.write(text)

    def status(self, line: str):
        stream = sys.stderr if self.out_path == "-" else sys.stdout
        stream.write(line + "\n")


def _budget_rows(budgets):
    rows = []
    for budget in budgets:
        for comp in budget.components:
            rows.append(
                {
                    "mode": budget.mode.value,
                    "direction": budget.direction.value,
                    "stage": comp.stage,
                    "component": comp.name,
                    "duration_ns": ns_value(comp.duration_ns),
                    "total_ns": ns_value(budget.total_ns),
                }
            )
    return rows


def cmd_turnaround(args, config: RunConfig, emitter: _Emitter, fmt: str) -> int:
    if args.mode:
        mode = EnsmMode(args.mode)
        directions = (
            [Direction(args.direction)]
            if args.direction
            else [Direction.RX_TO_TX, Direction.TX_TO_RX]
        )
        budgets = [
            turnaround_budget(mode, d, config.clocks, config.profile)
            for d in directions
        ]
        fields = ["mode", "direction", "stage", "component", "duration_ns", "total_ns"]
        emitter.data(_render_rows(fields, _budget_rows(budgets), fmt))
        for budget in budgets:
            emitter.status(
                f"{budget.mode.value} {budget.direction.value}: "
                f"total {ns_value(budget.total_ns)} ns"
            )
        return 0

    budgets = sweep_budgets(list(EnsmMode), config.clocks, config.profile)
    rows = [
        {
            "mode": b.mode.value,
            "direction": b.direction.value,
            "total_ns": ns_value(b.total_ns),
        }
        for b in budgets
    ]
    emitter.data(_render_rows(["mode", "direction", "total_ns"], rows, fmt))
    return 0


def cmd_trace(args, config: RunConfig, emitter: _Emitter, fmt: str) -> int:
    band = Band(args.band) if args.band else config.trace.band
    events = expand_schedule(
        config.schedule, config.clocks, config.profile, band=band, rf=config.rf
    )
    for event in events:
        if event.warning:
            emitter.status(f"warning: {event.warning} (t={ns_value(event.time_ns)} ns)")
    trace = sample_trace(
        events,
        (config.trace.start_ns, config.trace.end_ns),
        interval_ns=config.trace.interval_ns,
        band=band,
        rf=config.rf,
        settling_tau_ns=config.trace.settling_tau_ns,
    )

    if fmt == "csv":
        emitter.data(trace_to_csv(trace))
    else:
        rows = [
            {"time_us": round(t / 1000.0, 2), "power_db": round(v, 2)}
            for t, v in zip(trace.times_ns(), trace.samples)
        ]
        if fmt == "json":
            emitter.data(_render_rows(["time_us", "power_db"], rows, "json"))
        else:
            table_rows = [
                {"time_us": f"{r['time_us']:.2f}", "power_db": f"{r['power_db']:.2f}"}
                for r in rows
            ]
            emitter.data(_render_rows(["time_us", "power_db"], table_rows, "table"))

    trigger_ns = find_trigger_ns(config.schedule)
    measured = None
    direction = None
    if trigger_ns is not None:
        direction = Direction.RX_TO_TX
        for cmd in config.schedule:
            if cmd.kind in (CommandKind.LO_ON, CommandKind.LO_OFF):
                if cmd.kind is CommandKind.LO_OFF:
                    direction = Direction.TX_TO_RX
                break
        try:
            measured = measure_turnaround(trace, trigger_ns, direction)
        except MeasurementError:
            measured = None
    if measured is None:
        emitter.status("measured turnaround: n/a")
    else:
        emitter.status(
            f"measured turnaround: {measured / 1000.0:.2f} us ({direction.value})"
        )
    return 0


def cmd_noise(args, config: RunConfig, emitter: _Emitter, fmt: str) -> int:
    if args.capture:
        capture = load_capture(args.capture)
    else:
        if not args.mode or not args.band:
            emitter.status("error: noise needs either --capture or --mode and --band")
            return 2
        capture = synthesize_capture(
            EnsmMode(args.mode),
            Band(args.band),
            config.rf,
            args.n if args.n is not None else config.noise.n_samples,
            args.seed if args.seed is not None else config.noise.seed,
        )

    report = noise_floor_report(
        capture,
        threshold_db_above_median=config.noise.filter_threshold_db,
        guard_samples=config.noise.filter_guard_samples,
    )
    row = {
        "mode": capture.mode.value if capture.mode else "-",
        "band": capture.band.value if capture.band else "-",
        "samples_total": len(capture),
        "samples_used": report.sample_count_used,
        "samples_filtered": report.samples_filtered,
        "average_power_db": round(report.average_power_db, 2),
    }
    fields = list(row)
    emitter.data(_render_rows(fields, [row], fmt))
    return 0


def cmd_comply(args, config: RunConfig, emitter: _Emitter, fmt: str) -> int:
    deadlines = config.deadlines
    if args.deadline:
        by_name = {d.name: d for d in deadlines}
        selected = []
        for name in args.deadline:
            if name not in by_name:
                known = ", ".join(by_name) or "(none)"
                emitter.status(f"error: unknown deadline {name!r} (known: {known})")
                return 2
            selected.append(by_name[name])
        deadlines = selected
    if not deadlines:
        emitter.status("error: no deadlines configured")
        return 2

    results = compliance_matrix(config.clocks, config.profile, deadlines)
    rows = [
        {
            "mode": res.mode.value,
            "deadline": res.deadline.name,
            "tt_ns": ns_value(res.tt_ns),
            "pass": res.passed,
            "margin_ns": ns_value(res.margin_ns),
        }
        for res in results
    ]
    fields = ["mode", "deadline", "tt_ns", "pass", "margin_ns"]
    emitter.data(_render_rows(fields, rows, fmt))

    if args.require:
        mode = EnsmMode(args.require)
        failed = [r for r in results if r.mode is mode and not r.passed]
        if failed:
            names = ", ".join(r.deadline.name for r in failed)
            emitter.status(f"requirement {mode.value}: NOT met ({names})")
            return 3
        emitter.status(f"requirement {mode.value}: met")
    return 0


def cmd_config(args, config: RunConfig, emitter: _Emitter, fmt: str) -> int:
    if not args.dump:
        emitter.status("error: nothing to do (use --dump)")
        return 2
    sys.stdout.write(dump_config(config))
    return 0


_COMMANDS = {
    "turnaround": cmd_turnaround,
    "trace": cmd_trace,
    "noise": cmd_noise,
    "comply": cmd_comply,
    "config": cmd_config,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if isinstance(code, int):
            return code
        return 0 if code is None else 2

    try:
        config = load_config(args.config) if args.config else default_config()
        fmt = getattr(args, "format", None) or config.output_format
        out_path = getattr(args, "out", None) or config.output_path
        emitter = _Emitter(out_path)
        return _COMMANDS[args.command](args, config, emitter, fmt)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (DataError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
