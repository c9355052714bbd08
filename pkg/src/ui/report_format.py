# src/ui/report_format.py
from __future__ import annotations

import csv
import datetime
import io
import json
import math
from typing import Any, Mapping, Optional, Sequence

MAX_LINES = 50


# ---------- CSV ----------

def _fmt_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.5e}"
    return str(value)


def format_csv(columns: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
    """
    Comma-separated, LF line endings, header always present. Integers print
    plain; reals in scientific notation with six significant digits.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt_cell(row.get(c)) for c in columns])
    return buf.getvalue()


# ---------- human summaries ----------

def _fmt_num(value: Any) -> str:
    if value is None:
        return "—"
    if isinstance(value, float):
        if math.isinf(value):
            return "∞"
        return f"{value:.4g}"
    return str(value)


def _fmt_seconds(seconds: Optional[float]) -> str:
    if seconds is None or not math.isfinite(seconds):
        return "∞"
    m, s = divmod(max(0, int(round(seconds))), 60)
    h, m = divmod(m, 60)
    return f"{h}:{m:02d}:{s:02d}" if h else f"{m}:{s:02d}"


def _table(title: str, pairs: Sequence[tuple[str, Any]]) -> str:
    width = max((len(k) for k, _ in pairs), default=0)
    lines = [title, "-" * len(title)]
    for key, value in pairs:
        lines.append(f"{key.ljust(width)}  {_fmt_num(value)}")
    return "\n".join(lines) + "\n"


def summary_ising(report: Mapping[str, Any], physical: Mapping[str, Any]) -> str:
    regime = report.get("regime")
    title = f"Ising estimate  L={report.get('L')}  regime {regime}"
    if not report.get("feasible", True):
        title += " (infeasible: qubits and time diverge)"
    pairs = [
        ("eps0 a4 / a8", f"{report.get('eps0_a4')} / {report.get('eps0_a8')}"),
        ("mode", report.get("mode")),
        ("t_alg", report.get("t_alg")),
        ("t_dist", report.get("t_dist")),
        ("t_total", report.get("t_total")),
        ("total qubits", report.get("total_qubits")),
        ("total anyons", report.get("total_anyons")),
        ("measurement fraction", report.get("measurement_fraction")),
        ("step rate [Hz]", physical.get("step_rate_hz")),
        ("sample area [m^2]", physical.get("sample_area_m2")),
        ("wall clock", _fmt_seconds(physical.get("wall_clock_s"))),
    ]
    return _table(title, pairs)


def summary_fib(report: Mapping[str, Any], physical: Mapping[str, Any]) -> str:
    plan = report.get("plan", {})
    pairs = [
        ("qubits / anyons", f"{report.get('qubits')} / {report.get('anyons')}"),
        ("eps per gate", plan.get("eps_required")),
        ("braid length", plan.get("total_length")),
        ("SK iterations", plan.get("n_sk")),
        ("time steps", report.get("time_steps")),
        ("step rate [Hz]", physical.get("step_rate_hz")),
        ("wall clock", _fmt_seconds(physical.get("wall_clock_s"))),
    ]
    return _table(f"Fibonacci estimate  L={report.get('L')}", pairs)


def format_history(rows: Sequence[Mapping[str, Any]]) -> str:
    if not rows:
        return "No runs recorded yet.\n"
    lines = []
    for idx, r in enumerate(rows, start=1):
        if idx > MAX_LINES:
            break
        started = datetime.datetime.fromtimestamp(int(r["started_at"]), tz=datetime.timezone.utc)
        when = started.strftime("%Y-%m-%d %H:%M:%SZ")
        try:
            args = json.loads(r.get("args_json") or "{}")
        except json.JSONDecodeError:
            args = {}
        brief = " ".join(f"{k}={v}" for k, v in sorted(args.items()) if v is not None)
        code = r.get("exit_code")
        status = "running" if code is None else f"exit {code}"
        out = f" -> {r['out_path']}" if r.get("out_path") else ""
        repeat = f" (repeat of #{r['repeat_of']})" if r.get("repeat_of") else ""
        lines.append(f"#{r['run_id']} {when} {r['command']} {brief} [{status}] {r['input_hash'][:12]}{out}{repeat}")
    remaining = len(rows) - MAX_LINES
    if remaining > 0:
        lines.append(f"… and {remaining} more")
    return "\n".join(lines) + "\n"
