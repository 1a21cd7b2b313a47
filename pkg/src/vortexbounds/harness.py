"""Run orchestration: scenario -> simulation -> norms -> verification -> files.

A run writes three artifacts into its output directory (norms.csv,
report.json, plotdata.csv) plus a manifest.json inventory.  The run passes
when every bound report is satisfied, the interior enstrophy-balance
residual stays under the configured tolerance, and no blow-up occurred.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import BoundReport, verify_trajectory
from .io import emit_plotdata, emit_report, emit_timeseries
from .norms import NormSeries, balance_residuals_from_arrays, sample_norms
from .scenarios import ScenarioConfig, init_scenario
from .solver import BlowUpError, SolverConfig, run_simulation

__all__ = ["RunManifest", "run", "OUTPUT_ROOT_ENV"]

OUTPUT_ROOT_ENV = "VORTEXBOUNDS_OUTPUT_ROOT"


@dataclass
class RunManifest:
    config: dict
    code_version: str
    wall_clock_seconds: float
    files: dict[str, str] = field(default_factory=dict)
    bounds_satisfied: str = "0/0"
    balance_residual_max: float | None = None
    blow_up: bool = False
    passed: bool = False
    message: str = ""

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=False)


def _config_dict(config: ScenarioConfig) -> dict:
    d = dataclasses.asdict(config)
    d["config_sha256"] = hashlib.sha256(
        ";".join(f"{k}={v!r}" for k, v in sorted(d.items())).encode()
    ).hexdigest()[:16]
    return d


def resolve_output_dir(config: ScenarioConfig) -> str:
    root = os.environ.get(OUTPUT_ROOT_ENV, ".")
    path = config.output_dir
    if not os.path.isabs(path):
        path = os.path.join(root, path)
    return path


def run(config: ScenarioConfig, reports_out: list | None = None) -> RunManifest:
    """Execute one scenario end to end; never raises on flow blow-up."""
    outdir = resolve_output_dir(config)
    os.makedirs(outdir, exist_ok=True)
    t_wall = time.perf_counter()
    manifest = RunManifest(
        config=_config_dict(config), code_version=__version__, wall_clock_seconds=0.0
    )

    initial = init_scenario(config)
    blow_up = False
    if config.t_end == 0.0:
        states = [initial]
    else:
        solver_cfg = SolverConfig(
            nu=config.nu,
            dt=config.dt,
            t_end=config.t_end,
            record_stride=config.record_stride,
        )
        try:
            trajectory = run_simulation(initial, solver_cfg)
            states = trajectory.states
        except BlowUpError as err:
            blow_up = True
            manifest.message = str(err)
            states = err.trajectory.states if err.trajectory else [initial]

    series = NormSeries([sample_norms(s, config.eps) for s in states])
    norms_path = emit_timeseries(series, os.path.join(outdir, "norms.csv"))
    manifest.files["norms_csv"] = norms_path
    manifest.blow_up = blow_up

    if len(series) >= 3:
        residuals = balance_residuals_from_arrays(
            series.times,
            series.column("l2"),
            series.column("grad_l2"),
            series.column("stretch"),
            config.nu,
        )
        manifest.balance_residual_max = float(np.max(residuals[1:-1]))

    t1, t2 = config.verify_window()
    verified = False
    if blow_up:
        manifest.message = manifest.message or "blow-up: verification skipped"
    elif t2 <= t1 or len(series) < 2:
        manifest.message = (
            f"degenerate verification interval [{t1}, {t2}]: "
            "need t1 < t2 inside the recorded range"
        )
    else:
        reports = verify_trajectory(
            series, config.nu, config.eps, t1, t2, alpha=config.alpha
        )
        if reports_out is not None:
            reports_out.extend(reports)
        manifest.files["report_json"] = emit_report(
            reports, os.path.join(outdir, "report.json")
        )
        manifest.files["plotdata_csv"] = emit_plotdata(
            series,
            os.path.join(outdir, "plotdata.csv"),
            config.nu,
            config.eps,
            t1,
            t2,
            config.alpha,
        )
        n_ok = sum(1 for r in reports if r.satisfied)
        manifest.bounds_satisfied = f"{n_ok}/{len(reports)}"
        verified = n_ok == len(reports)

    balance_ok = (
        manifest.balance_residual_max is None
        or manifest.balance_residual_max <= config.balance_tol
    )
    manifest.passed = verified and balance_ok and not blow_up
    manifest.wall_clock_seconds = time.perf_counter() - t_wall

    manifest_path = os.path.join(outdir, "manifest.json")
    with open(manifest_path, "w", newline="") as fh:
        fh.write(manifest.to_json())
        fh.write("\n")
    manifest.files["manifest_json"] = manifest_path
    return manifest
