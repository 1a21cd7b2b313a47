"""Shared fixtures: small grids and cached reference-scenario runs."""

import numpy as np
import pytest

from vortexbounds.harness import run
from vortexbounds.io import load_report, load_timeseries
from vortexbounds.scenarios import SCENARIO_NAMES, init_scenario, reference_config
from vortexbounds.spectral import (
    SpectralVectorField,
    dealias,
    make_grid,
    project_solenoidal,
    zero_mean,
)


@pytest.fixture(scope="session")
def grid16():
    return make_grid(16)


@pytest.fixture(scope="session")
def grid32():
    return make_grid(32)


def random_solenoidal_field(grid, seed: int, scale: float = 1.0) -> SpectralVectorField:
    """Dealiased, mean-free, solenoidal field with random retained modes."""
    rng = np.random.default_rng(seed)
    shape = (3,) + grid.spectral_shape
    raw = rng.standard_normal((3, grid.n, grid.n, grid.n))
    modes = np.fft.rfftn(raw, axes=(-3, -2, -1)) * scale
    assert modes.shape == shape
    f = zero_mean(project_solenoidal(dealias(SpectralVectorField(grid, modes))))
    return f


@pytest.fixture(scope="session")
def reference_runs(tmp_path_factory):
    """Run each bundled scenario once at reference resolution; cache results."""
    cache = {}

    def get(name: str):
        if name not in cache:
            assert name in SCENARIO_NAMES
            outdir = tmp_path_factory.mktemp(f"ref_{name}")
            config = reference_config(name, output_dir=str(outdir))
            manifest = run(config)
            series = load_timeseries(manifest.files["norms_csv"])
            report = (
                load_report(manifest.files["report_json"])
                if "report_json" in manifest.files
                else None
            )
            cache[name] = {
                "config": config,
                "manifest": manifest,
                "series": series,
                "report": report,
            }
        return cache[name]

    return get
