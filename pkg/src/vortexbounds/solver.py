"""Time integration of the vorticity equation on the periodic box.

The evolved equation is

    d/dt w = nu Lap w - (u . grad) w + (w . grad) u,   div w = 0,

with u recovered from w by the spectral Biot-Savart inversion.  The nonlinear
terms are formed pointwise in physical space in convective form, dealiased,
and projected solenoidal.  Time stepping is classical four-stage Runge-Kutta
with the exact integrating factor exp(-nu |k|^2 dt) carrying the viscous
part, so single-shell curl eigenfields decay exactly.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field

import numpy as np

from .spectral import (
    GridSpec,
    SpectralVectorField,
    _biot_savart_modes,
    _gradient_modes,
    _irfft,
    _project_modes,
    _rfft,
    _workspace,
)

__all__ = [
    "SolverConfig",
    "FlowState",
    "Trajectory",
    "BlowUpError",
    "vorticity_rhs",
    "step",
    "run_simulation",
]

CFL_LIMIT = 0.5


class BlowUpError(RuntimeError):
    """Raised when a non-finite mode appears; keeps the last finite state."""

    def __init__(self, t_last: float, trajectory: "Trajectory | None" = None):
        super().__init__(f"non-finite vorticity mode; last finite time t={t_last}")
        self.t_last = t_last
        self.trajectory = trajectory


@dataclass(frozen=True)
class SolverConfig:
    nu: float
    dt: float
    t_end: float
    record_stride: int = 1
    dealias_enabled: bool = True

    def __post_init__(self) -> None:
        if not self.nu > 0:
            raise ValueError(f"viscosity must be positive, got {self.nu}")
        if not self.dt > 0:
            raise ValueError(f"time step must be positive, got {self.dt}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")


@dataclass(frozen=True)
class FlowState:
    """Solenoidal, mean-free vorticity modes at time t."""

    t: float
    omega: SpectralVectorField


@dataclass
class Trajectory:
    """Recorded states at uniformly strided times, plus provenance."""

    states: list[FlowState]
    scenario: str = ""
    config_digest: str = ""

    def __post_init__(self) -> None:
        t = np.array([s.t for s in self.states])
        if len(t) > 1:
            dt = np.diff(t)
            if np.any(dt <= 0):
                raise ValueError("trajectory times must be strictly increasing")
            if np.max(np.abs(dt - dt[0])) > 1e-9 * max(1.0, abs(t[-1])):
                raise ValueError("trajectory must be recorded at a uniform stride")

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def final(self) -> FlowState:
        return self.states[-1]


def config_digest(obj) -> str:
    """Stable short hash of a config-like object's public fields."""
    items = sorted(
        (k, v) for k, v in vars(obj).items() if not k.startswith("_")
    )
    text = ";".join(f"{k}={v!r}" for k, v in items)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _nonlinear_modes(w_hat: np.ndarray, ws, dealias_enabled: bool) -> np.ndarray:
    """Convective-form nonlinearity (w.grad)u - (u.grad)w, dealiased, projected."""
    n = ws.grid.n
    u_hat = _biot_savart_modes(w_hat, ws)
    batch = np.empty((24,) + w_hat.shape[1:], dtype=w_hat.dtype)
    batch[0:3] = u_hat
    batch[3:6] = w_hat
    batch[6:15] = _gradient_modes(u_hat, ws).reshape((9,) + w_hat.shape[1:])
    batch[15:24] = _gradient_modes(w_hat, ws).reshape((9,) + w_hat.shape[1:])
    phys = _irfft(batch, n)
    u = phys[0:3]
    w = phys[3:6]
    du = phys[6:15].reshape(3, 3, n, n, n)  # du[a, i] = d_a u_i
    dw = phys[15:24].reshape(3, 3, n, n, n)
    nonlin = np.einsum("axyz,aixyz->ixyz", w, du) - np.einsum(
        "axyz,aixyz->ixyz", u, dw
    )
    if not np.all(np.isfinite(nonlin)):
        raise FloatingPointError("non-finite value in nonlinear term")
    n_hat = _rfft(nonlin)
    if dealias_enabled:
        n_hat *= ws.dealias_mask
    n_hat = _project_modes(n_hat, ws)
    n_hat[:, 0, 0, 0] = 0.0
    return n_hat


def vorticity_rhs(omega: SpectralVectorField, nu: float) -> SpectralVectorField:
    """Full right-hand side nu Lap w - (u.grad)w + (w.grad)u in mode space."""
    ws = _workspace(omega.grid)
    rhs = _nonlinear_modes(omega.modes, ws, dealias_enabled=True)
    rhs -= nu * ws.k2 * omega.modes
    return SpectralVectorField(omega.grid, rhs)


def step(state: FlowState, config: SolverConfig) -> FlowState:
    """One integrating-factor RK4 step of length config.dt."""
    ws = _workspace(state.omega.grid)
    h = config.dt
    E = np.exp(-config.nu * ws.k2 * (h / 2.0))
    E2 = E * E
    a = state.omega.modes

    def N(m: np.ndarray) -> np.ndarray:
        return _nonlinear_modes(m, ws, config.dealias_enabled)

    try:
        n1 = N(a)
        n2 = N(E * (a + (h / 2.0) * n1))
        n3 = N(E * a + (h / 2.0) * n2)
        n4 = N(E2 * a + h * E * n3)
    except FloatingPointError:
        raise BlowUpError(state.t) from None
    out = E2 * a + (h / 6.0) * (E2 * n1 + 2.0 * E * (n2 + n3) + n4)
    out = _project_modes(out, ws)
    out[:, 0, 0, 0] = 0.0
    if not np.all(np.isfinite(out)):
        raise BlowUpError(state.t)
    return FlowState(t=state.t + h, omega=SpectralVectorField(state.omega.grid, out))


def _cfl_number(omega: SpectralVectorField, config: SolverConfig) -> float:
    ws = _workspace(omega.grid)
    u = _irfft(_biot_savart_modes(omega.modes, ws), omega.grid.n)
    umax = float(np.max(np.sqrt(np.sum(u**2, axis=0))))
    return config.dt * umax * omega.grid.n / omega.grid.L


def run_simulation(initial: FlowState, config: SolverConfig) -> Trajectory:
    """Advance from initial.t to t_end, recording every record_stride steps.

    Deterministic for fixed inputs.  On blow-up the partial trajectory of
    recorded finite states is attached to the raised BlowUpError.
    """
    span = config.t_end - initial.t
    if span < -1e-12:
        raise ValueError("t_end precedes the initial time")
    n_steps = int(round(span / config.dt))
    if abs(n_steps * config.dt - span) > 1e-9 * max(1.0, config.t_end):
        raise ValueError("t_end - t0 must be an integer number of time steps")
    if n_steps % config.record_stride != 0:
        raise ValueError(
            f"record_stride {config.record_stride} does not divide {n_steps} steps"
        )

    digest = config_digest(config)
    recorded = [initial]
    cfl_warned = False
    if _cfl_number(initial.omega, config) > CFL_LIMIT:
        warnings.warn("advective CFL number exceeds 0.5; dt is likely too large")
        cfl_warned = True

    state = initial
    t0 = initial.t
    for k in range(1, n_steps + 1):
        try:
            state = step(state, config)
        except BlowUpError as err:
            raise BlowUpError(
                err.t_last, Trajectory(recorded, config_digest=digest)
            ) from None
        # reconstruct time from the step index to keep recorded times exact
        state = FlowState(t=t0 + k * config.dt, omega=state.omega)
        if k % config.record_stride == 0:
            recorded.append(state)
            if not cfl_warned and _cfl_number(state.omega, config) > CFL_LIMIT:
                warnings.warn(
                    "advective CFL number exceeds 0.5; dt is likely too large"
                )
                cfl_warned = True
    return Trajectory(recorded, config_digest=digest)
