"""Initial-condition library for the bundled flow scenarios.

Every scenario returns a solenoidal, mean-free, dealiased vorticity state at
t = 0.  Analytic scenarios (taylor_green, beltrami_abc) scale their printed
fields by ``amplitude``; the random and vortex-pair scenarios are normalized
so the initial max |w| equals ``amplitude``, which keeps the sup norm under
control for the envelope checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .solver import FlowState
from .spectral import (
    GridSpec,
    SpectralVectorField,
    _coords,
    _curl_modes,
    _project_modes,
    _rfft,
    _workspace,
    make_grid,
)

__all__ = ["SCENARIO_NAMES", "ScenarioConfig", "init_scenario", "reference_config"]

SCENARIO_NAMES = (
    "taylor_green",
    "beltrami_abc",
    "random_solenoidal",
    "gaussian_vortex_pair",
)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    n: int = 32
    L: float = 2.0 * math.pi
    nu: float = 0.01
    dt: float = 1e-3
    t_end: float = 1.0
    record_stride: int = 10
    amplitude: float = 1.0
    seed: Optional[int] = None
    t1: Optional[float] = None  # verify window; defaults: first recorded t > 0
    t2: Optional[float] = None  # defaults: t_end
    eps: float = 0.01
    alpha: float = 0.747
    c_loc: float = 1.0
    balance_tol: float = 1e-2
    output_dir: str = "out"

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIO_NAMES:
            raise ValueError(
                f"unknown scenario {self.scenario!r}; expected one of {SCENARIO_NAMES}"
            )
        if self.scenario == "random_solenoidal" and self.seed is None:
            raise ValueError("random_solenoidal requires a seed")
        if self.scenario != "random_solenoidal" and self.seed is not None:
            raise ValueError("seed is only meaningful for random_solenoidal")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        lo = 0.0
        hi = self.t_end
        for name, val in (("t1", self.t1), ("t2", self.t2)):
            if val is not None and not (lo <= val <= hi + 1e-12):
                raise ValueError(f"{name}={val} outside [0, t_end]")
        if self.t1 is not None and self.t2 is not None and self.t2 < self.t1:
            raise ValueError("verify interval is reversed")

    @property
    def grid(self) -> GridSpec:
        return make_grid(self.n, self.L)

    def verify_window(self) -> tuple[float, float]:
        """Default [first recorded t after 0, t_end], per-field overridable."""
        t1 = self.t1 if self.t1 is not None else self.record_stride * self.dt
        t2 = self.t2 if self.t2 is not None else self.t_end
        return t1, t2


def _finalize(grid: GridSpec, modes: np.ndarray) -> FlowState:
    ws = _workspace(grid)
    m = modes * ws.dealias_mask
    m = _project_modes(m, ws)
    m[:, 0, 0, 0] = 0.0
    return FlowState(t=0.0, omega=SpectralVectorField(grid, m))


def _taylor_green(grid: GridSpec, amplitude: float) -> np.ndarray:
    X, Y, Z = _coords(grid)
    k0 = 2.0 * math.pi / grid.L
    u = np.stack(
        [
            np.sin(k0 * X) * np.cos(k0 * Y) * np.cos(k0 * Z),
            -np.cos(k0 * X) * np.sin(k0 * Y) * np.cos(k0 * Z),
            np.zeros_like(X),
        ]
    )
    ws = _workspace(grid)
    return _curl_modes(_rfft(amplitude * u), ws)


def _beltrami_abc(grid: GridSpec, amplitude: float) -> np.ndarray:
    # curl eigenfield with eigenvalue 2*pi/L; A = B = C = 1
    X, Y, Z = _coords(grid)
    k0 = 2.0 * math.pi / grid.L
    w = np.stack(
        [
            np.sin(k0 * Z) + np.cos(k0 * Y),
            np.sin(k0 * X) + np.cos(k0 * Z),
            np.sin(k0 * Y) + np.cos(k0 * X),
        ]
    )
    return _rfft(amplitude * w)


def _half_ball_wavevectors(kmax: int) -> list[tuple[int, int, int]]:
    """Canonical representatives of +-k pairs with 0 < |k| <= kmax, fixed order."""
    out = []
    for kx in range(-kmax, kmax + 1):
        for ky in range(-kmax, kmax + 1):
            for kz in range(-kmax, kmax + 1):
                if kx == ky == kz == 0:
                    continue
                if kx * kx + ky * ky + kz * kz > kmax * kmax:
                    continue
                if kz > 0 or (kz == 0 and (ky > 0 or (ky == 0 and kx > 0))):
                    out.append((kx, ky, kz))
    return out


RANDOM_SHELL_KMAX = 4


def _random_solenoidal(grid: GridSpec, amplitude: float, seed: int) -> np.ndarray:
    """Seeded Gaussian modes on shells |k| <= 4, spectrum ~ |k|^-2."""
    n = grid.n
    if n < 3 * RANDOM_SHELL_KMAX:
        raise ValueError("grid too coarse to retain the |k| <= 4 shells dealiased")
    rng = np.random.default_rng(seed)
    full = np.zeros((3, n, n, n), dtype=complex)
    for k in _half_ball_wavevectors(RANDOM_SHELL_KMAX):
        mag = math.sqrt(k[0] ** 2 + k[1] ** 2 + k[2] ** 2)
        draws = rng.standard_normal(6) / mag  # |coeff|^2 spectrum ~ |k|^-2
        coeff = draws[0:3] + 1j * draws[3:6]
        ix, iy, iz = (k[0] % n, k[1] % n, k[2] % n)
        jx, jy, jz = (-k[0] % n, -k[1] % n, -k[2] % n)
        full[:, ix, iy, iz] = coeff
        full[:, jx, jy, jz] = np.conj(coeff)
    half = full[:, :, :, : n // 2 + 1] * float(n) ** 3
    ws = _workspace(grid)
    half = _project_modes(half, ws)
    return _normalize_sup(grid, half, amplitude)


def _gaussian_vortex_pair(grid: GridSpec, amplitude: float) -> np.ndarray:
    """Two opposed Gaussian vortex tubes along z, a quarter box apart."""
    X, Y, _ = _coords(grid)
    L = grid.L
    sigma = L / 12.0
    d = L / 8.0

    def tube(cx: float, cy: float) -> np.ndarray:
        # nearest-image distances keep the envelope periodic
        dx = (X - cx + L / 2.0) % L - L / 2.0
        dy = (Y - cy + L / 2.0) % L - L / 2.0
        return np.exp(-(dx**2 + dy**2) / (2.0 * sigma**2))

    wz = tube(L / 2.0 - d, L / 2.0) - tube(L / 2.0 + d, L / 2.0)
    w = np.stack([np.zeros_like(wz), np.zeros_like(wz), wz])
    half = _rfft(w)
    ws = _workspace(grid)
    half = _project_modes(half, ws)
    return _normalize_sup(grid, half, amplitude)


def _normalize_sup(grid: GridSpec, modes: np.ndarray, amplitude: float) -> np.ndarray:
    from .spectral import _irfft

    phys = _irfft(modes * _workspace(grid).dealias_mask, grid.n)
    peak = float(np.max(np.sqrt(np.sum(phys**2, axis=0))))
    if peak == 0.0:
        return modes
    return modes * (amplitude / peak)


def init_scenario(config: ScenarioConfig) -> FlowState:
    """Build the scenario's initial vorticity (solenoidal, mean-free, t = 0)."""
    grid = config.grid
    if config.scenario == "taylor_green":
        modes = _taylor_green(grid, config.amplitude)
    elif config.scenario == "beltrami_abc":
        modes = _beltrami_abc(grid, config.amplitude)
    elif config.scenario == "random_solenoidal":
        modes = _random_solenoidal(grid, config.amplitude, int(config.seed))
    elif config.scenario == "gaussian_vortex_pair":
        modes = _gaussian_vortex_pair(grid, config.amplitude)
    else:  # pragma: no cover - guarded by ScenarioConfig
        raise ValueError(f"unknown scenario {config.scenario!r}")
    return _finalize(grid, modes)


_REFERENCE = {
    "beltrami_abc": dict(scenario="beltrami_abc", t_end=1.0, amplitude=1.0),
    "taylor_green": dict(scenario="taylor_green", t_end=0.5, amplitude=1.0, record_stride=5),
    "random_solenoidal": dict(
        scenario="random_solenoidal", t_end=0.5, amplitude=3.0, seed=2024, nu=0.02
    ),
    "gaussian_vortex_pair": dict(
        scenario="gaussian_vortex_pair", t_end=0.5, amplitude=3.0
    ),
}


def reference_config(name: str, **overrides) -> ScenarioConfig:
    """The bundled desk-scale configuration for one scenario."""
    if name not in _REFERENCE:
        raise ValueError(f"no reference config for {name!r}")
    params = dict(_REFERENCE[name])
    params.update(overrides)
    return ScenarioConfig(**params)
