"""Command-line front end.

Subcommands:
  run <config>       simulate a scenario and verify its bounds
  verify <norms.csv> verify a previously recorded norm series
  schedule           print a continuation schedule as JSON
  report <json>      pretty-print a bound report

Configuration is a flat ``key = value`` file; command-line flags override
file values, which override defaults.  Exit codes: 0 pass, 1 verification
or balance failure, 2 blow-up, 3 configuration/usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from typing import Optional, Sequence

from .bounds import EXPONENT_FOOTNOTE, continuation_schedule, verify_trajectory
from .harness import run as run_scenario
from .io import emit_plotdata, emit_report, load_report, load_timeseries
from .scenarios import ScenarioConfig

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_BLOWUP = 2
EXIT_CONFIG = 3

_CONFIG_TYPES = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}


def parse_config_file(path: str) -> dict:
    """Parse a flat key = value config file ('#' starts a comment)."""
    out: dict = {}
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_TYPES:
                raise ValueError(
                    f"{path}:{lineno}: unknown key {key!r}; valid keys: "
                    + ", ".join(sorted(_CONFIG_TYPES))
                )
            out[key] = _coerce(key, value)
    return out


def _coerce(key: str, value: str):
    if key == "scenario" or key == "output_dir":
        return value
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    if key in ("n", "record_stride", "seed"):
        return int(value)
    return float(value)


def _add_override_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", type=str)
    p.add_argument("--n", type=int)
    p.add_argument("--L", type=float, dest="L")
    p.add_argument("--nu", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", type=float, dest="t_end")
    p.add_argument("--record-stride", type=int, dest="record_stride")
    p.add_argument("--amplitude", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--c-loc", type=float, dest="c_loc")
    p.add_argument("--balance-tol", type=float, dest="balance_tol")
    p.add_argument("--output-dir", type=str, dest="output_dir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vortexbounds", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and verify its bounds")
    p_run.add_argument("config", nargs="?", help="key = value config file")
    _add_override_flags(p_run)

    p_ver = sub.add_parser("verify", help="verify a recorded norms CSV")
    p_ver.add_argument("norms_csv")
    p_ver.add_argument("--nu", type=float, required=True)
    p_ver.add_argument("--eps", type=float, default=0.01)
    p_ver.add_argument("--t1", type=float, default=None)
    p_ver.add_argument("--t2", type=float, default=None)
    p_ver.add_argument("--alpha", type=float, default=0.747)
    p_ver.add_argument("--out", type=str, default=None, help="report JSON path")
    p_ver.add_argument("--plotdata", type=str, default=None, help="plot-data CSV path")

    p_sch = sub.add_parser("schedule", help="print a continuation schedule as JSON")
    p_sch.add_argument("--T", type=float, required=True, dest="T")
    p_sch.add_argument("--nu", type=float, required=True)
    p_sch.add_argument("--C-loc", type=float, required=True, dest="c_loc")
    p_sch.add_argument("--sup0", type=float, required=True)
    p_sch.add_argument("--sup-delta", type=float, default=None, dest="sup_delta")

    p_rep = sub.add_parser("report", help="pretty-print a bound report")
    p_rep.add_argument("report_json")
    return parser


def _report_table(entries: Sequence[dict]) -> str:
    rows = [("bound", "satisfied", "ln_bound", "ln_actual", "log_margin")]
    for e in entries:
        ln_bound = "INF" if e["overflow"] else _num(e["ln_bound"])
        rows.append(
            (
                e["name"],
                "yes" if e["satisfied"] else "NO",
                ln_bound,
                _num(e["ln_actual"], zero="-INF"),
                _num(e["log_margin"], zero="INF"),
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


def _num(x, zero: str = "-") -> str:
    if x is None:
        return zero
    return f"{x:.6g}"


def _print_report(entries: Sequence[dict]) -> None:
    print(_report_table(entries))
    if entries:
        inputs = entries[0]["inputs"]
        print(f"# eps = {inputs['eps']}, alpha = {inputs['alpha']}, "
              f"N convention: {inputs['N_convention']}")
        print(f"# note: {EXPONENT_FOOTNOTE}")


def cmd_run(args: argparse.Namespace) -> int:
    params: dict = {}
    if args.config:
        params.update(parse_config_file(args.config))
    for key in _CONFIG_TYPES:
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if "scenario" not in params:
        raise ValueError("a scenario must be given (config file or --scenario)")
    config = ScenarioConfig(**params)

    reports: list = []
    manifest = run_scenario(config, reports_out=reports)
    if reports:
        _print_report([_entry_from_report(r) for r in reports])
    print(f"bounds satisfied: {manifest.bounds_satisfied}")
    if manifest.balance_residual_max is not None:
        print(f"balance residual (interior max): {manifest.balance_residual_max:.3e}")
    if manifest.message:
        print(manifest.message)
    print(f"outputs: {', '.join(sorted(manifest.files.values()))}")
    print("PASS" if manifest.passed else "FAIL")
    if manifest.blow_up:
        return EXIT_BLOWUP
    return EXIT_PASS if manifest.passed else EXIT_FAIL


def _entry_from_report(r) -> dict:
    return {
        "name": r.name,
        "overflow": r.bound.overflow,
        "ln_bound": None if (r.bound.overflow or r.bound.is_zero) else r.bound.ln_value,
        "ln_actual": None if r.actual.is_zero else r.actual.ln_value,
        "log_margin": r.log_margin if math.isfinite(r.log_margin) else None,
        "satisfied": r.satisfied,
        "inputs": r.inputs,
    }


def cmd_verify(args: argparse.Namespace) -> int:
    series = load_timeseries(args.norms_csv)
    times = series.times
    if len(times) < 2:
        print("verification needs at least two recorded samples")
        return EXIT_CONFIG
    t1 = args.t1 if args.t1 is not None else float(times[1] if times[0] == 0.0 else times[0])
    t2 = args.t2 if args.t2 is not None else float(times[-1])
    if t2 <= t1:
        print(f"degenerate verification interval [{t1}, {t2}]")
        return EXIT_CONFIG
    reports = verify_trajectory(series, args.nu, args.eps, t1, t2, alpha=args.alpha)
    if args.out:
        emit_report(reports, args.out)
    if args.plotdata:
        emit_plotdata(series, args.plotdata, args.nu, args.eps, t1, t2, args.alpha)
    _print_report([_entry_from_report(r) for r in reports])
    ok = all(r.satisfied for r in reports)
    print("PASS" if ok else "FAIL")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_schedule(args: argparse.Namespace) -> int:
    sched = continuation_schedule(args.T, args.nu, args.c_loc, args.sup0, args.sup_delta)
    doc = {
        "T": sched.T,
        "nu": sched.nu,
        "C_loc": sched.c_loc,
        "sup0": sched.sup0,
        "sup_delta": sched.sup_delta,
        "first_step": sched.step_sizes[0],
        "later_step": sched.step_sizes[-1],
        "interval_count": len(sched.intervals),
        "intervals": [list(iv) for iv in sched.intervals],
        "step_sizes": list(sched.step_sizes),
    }
    print(json.dumps(doc, indent=2))
    return EXIT_PASS


def cmd_report(args: argparse.Namespace) -> int:
    doc = load_report(args.report_json)
    _print_report(doc["reports"])
    return EXIT_PASS


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": cmd_run,
        "verify": cmd_verify,
        "schedule": cmd_schedule,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
