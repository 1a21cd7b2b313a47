"""Norms, functionals, and identity diagnostics measured along trajectories.

Every quantity the growth-bound formulas consume is computed here: Lp norms
by Riemann-sum quadrature (cell volume (L/n)^3), the sup norm as the grid
maximum, gradient norms from the pointwise Frobenius magnitude, the vortex
stretching functional, and the weighted dissipation functional.

Convention: the peak-enstrophy scalar N fed to the bound formulas is
max_t of the *integral* of |w|^2 (the squared 2-norm), recorded as such in
every report.  The unsquared alternative is available as a switch.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .spectral import (
    GridSpec,
    ScalarField,
    SpectralVectorField,
    _gradient_modes,
    _biot_savart_modes,
    _irfft,
    _rfft,
    _workspace,
)

__all__ = [
    "NormSample",
    "NormSeries",
    "NORM_COLUMNS",
    "lp_norm",
    "sup_norm",
    "grad_lp_norm",
    "second_grad_l2",
    "time_integral",
    "stretching_functional",
    "weighted_dissipation",
    "enstrophy_balance_residual",
    "balance_residuals_from_arrays",
    "sample_norms",
]

NORM_COLUMNS = (
    "t",
    "l2",
    "l2eps",
    "l4",
    "sup",
    "grad_l2",
    "grad_3eps",
    "grad2_l2",
    "stretch",
    "wdiss",
)

BALANCE_FLOOR = 1e-30


@dataclass(frozen=True)
class NormSample:
    """All norms and functionals of one recorded state at time t."""

    t: float
    l2: float
    l2eps: float
    l4: float
    sup: float
    grad_l2: float
    grad_3eps: float
    grad2_l2: float
    stretch: float
    wdiss: float

    def as_row(self) -> tuple[float, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


class NormSeries:
    """Time-ordered norm samples with the derived window scalars."""

    def __init__(self, samples: Iterable[NormSample]):
        self.samples: list[NormSample] = list(samples)
        t = self.times
        if len(t) > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("norm series times must be strictly increasing")

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    def __len__(self) -> int:
        return len(self.samples)

    def index_of(self, t: float) -> int:
        """Index of the sample nearest t; t must lie within the series range."""
        times = self.times
        if len(times) == 0:
            raise ValueError("empty norm series")
        lo, hi = times[0], times[-1]
        tol = 1e-9 * max(1.0, abs(hi))
        if t < lo - tol or t > hi + tol:
            raise ValueError(f"t={t} outside recorded range [{lo}, {hi}]")
        return int(np.argmin(np.abs(times - t)))

    def window(self, t1: float, t2: float) -> tuple[int, int]:
        if t2 < t1:
            raise ValueError(f"reversed interval [{t1}, {t2}]")
        i1, i2 = self.index_of(t1), self.index_of(t2)
        if i2 < i1:
            raise ValueError("interval endpoints resolve out of order")
        return i1, i2

    def max_enstrophy(self, t1: float, t2: float) -> float:
        """max over [t1,t2] of the squared 2-norm (the N of the bound inputs)."""
        i1, i2 = self.window(t1, t2)
        return float(np.max(self.column("l2")[i1 : i2 + 1] ** 2))

    def max_l2(self, t1: float, t2: float) -> float:
        i1, i2 = self.window(t1, t2)
        return float(np.max(self.column("l2")[i1 : i2 + 1]))

    def integral(self, values: np.ndarray, t1: float, t2: float) -> float:
        """Trapezoidal integral of a per-sample column over [t1, t2]."""
        i1, i2 = self.window(t1, t2)
        if i1 == i2:
            return 0.0
        return float(np.trapz(values[i1 : i2 + 1], self.times[i1 : i2 + 1]))


def _quadrature(grid: GridSpec, values: np.ndarray) -> float:
    return float(np.sum(values)) * grid.cell_volume


def lp_norm(field: ScalarField, p: float) -> float:
    """Riemann-sum Lp norm (sum |f|^p (L/n)^3)^(1/p)."""
    if not p >= 1.0:
        raise ValueError(f"Lp norm requires p >= 1, got {p}")
    mag = np.abs(field.samples)
    return _quadrature(field.grid, mag**p) ** (1.0 / p)


def sup_norm(field: ScalarField) -> float:
    """Maximum pointwise magnitude over the grid nodes."""
    return float(np.max(np.abs(field.samples)))


def _gradient_magnitude(omega: SpectralVectorField) -> np.ndarray:
    ws = _workspace(omega.grid)
    g = _irfft(_gradient_modes(omega.modes, ws), omega.grid.n)
    return np.sqrt(np.sum(g**2, axis=(0, 1)))


def grad_lp_norm(omega: SpectralVectorField, p: float) -> float:
    """Lp norm of the pointwise Frobenius magnitude of the gradient."""
    if not p >= 1.0:
        raise ValueError(f"Lp norm requires p >= 1, got {p}")
    gmag = _gradient_magnitude(omega)
    grid = omega.grid
    return _quadrature(grid, gmag**p) ** (1.0 / p)


def _mode_space_sq(omega: SpectralVectorField, weight: np.ndarray) -> float:
    """sum_k weight(k) |f(k)|^2 with half-spectrum doubling and L^3/n^6 scaling."""
    ws = _workspace(omega.grid)
    grid = omega.grid
    tot = float(
        np.sum(ws.parseval_weight * weight * (omega.modes.real**2 + omega.modes.imag**2))
    )
    return tot * grid.L**3 / grid.n**6


def second_grad_l2(omega: SpectralVectorField) -> float:
    """2-norm of all 27 second partials, via the |k|^4 mode-space weight."""
    ws = _workspace(omega.grid)
    kd2 = ws.kappa_d[0] ** 2 + ws.kappa_d[1] ** 2 + ws.kappa_d[2] ** 2
    return float(np.sqrt(_mode_space_sq(omega, kd2**2)))


def parseval_l2(omega: SpectralVectorField) -> float:
    """2-norm from mode space; equals the physical lp_norm(|f|, 2) quadrature."""
    return float(np.sqrt(_mode_space_sq(omega, 1.0)))


def time_integral(series: NormSeries, t1: float, t2: float) -> float:
    """C(t1, t2): trapezoidal integral of the squared 2-norm over [t1, t2]."""
    return series.integral(series.column("l2") ** 2, t1, t2)


def _parseval_inner(a: np.ndarray, b: np.ndarray, grid: GridSpec) -> float:
    ws = _workspace(grid)
    tot = float(np.sum(ws.parseval_weight * (np.conj(a) * b).real))
    return tot * grid.L**3 / grid.n**6


def stretching_functional(omega: SpectralVectorField) -> float:
    """S = integral of w . (w . grad) u with u recovered by Biot-Savart.

    The stretching product is formed pointwise in physical space, dealiased,
    and paired with w by mode-space quadrature (exact for grid functions).
    """
    grid = omega.grid
    ws = _workspace(grid)
    u_hat = _biot_savart_modes(omega.modes, ws)
    du = _irfft(_gradient_modes(u_hat, ws), grid.n)  # du[a, i] = d_a u_i
    w = _irfft(omega.modes, grid.n)
    stretch = np.einsum("axyz,aixyz->ixyz", w, du)
    st_hat = _rfft(stretch) * ws.dealias_mask
    return _parseval_inner(omega.modes, st_hat, grid)


def weighted_dissipation(omega: SpectralVectorField, eps: float) -> float:
    """Expanded positive-definite form of the weighted dissipation functional.

    D_eps = (2eps/3)/(1+eps/3)^2 * int |grad |w|^(1+eps/3)|^2
            + int |w|^(2eps/3) |grad w|^2

    The fractional-power field is powered pointwise and differentiated
    spectrally; both addends are Riemann-sum quadratures.
    """
    if not eps > 0:
        raise ValueError(f"weighted dissipation requires eps > 0, got {eps}")
    grid = omega.grid
    ws = _workspace(grid)
    w = _irfft(omega.modes, grid.n)
    mag = np.sqrt(np.sum(w**2, axis=0))

    powered = mag ** (1.0 + eps / 3.0)
    p_hat = _rfft(powered)
    gp = _irfft(np.stack([1j * ws.kappa_d[a] * p_hat for a in range(3)]), grid.n)
    coef = (2.0 * eps / 3.0) / (1.0 + eps / 3.0) ** 2
    term1 = coef * _quadrature(grid, np.sum(gp**2, axis=0))

    gw = _irfft(_gradient_modes(omega.modes, ws), grid.n)
    term2 = _quadrature(grid, mag ** (2.0 * eps / 3.0) * np.sum(gw**2, axis=(0, 1)))
    return term1 + term2


def sample_norms(state, eps: float) -> NormSample:
    """One NormSample for a recorded flow state (deterministic per state)."""
    omega: SpectralVectorField = state.omega
    grid = omega.grid
    ws = _workspace(grid)

    w = _irfft(omega.modes, grid.n)
    mag = np.sqrt(np.sum(w**2, axis=0))
    h3 = grid.cell_volume

    def lp(values: np.ndarray, p: float) -> float:
        return float((np.sum(values**p) * h3) ** (1.0 / p))

    gmag = _gradient_magnitude(omega)
    return NormSample(
        t=float(state.t),
        l2=lp(mag, 2.0),
        l2eps=lp(mag, 2.0 + 2.0 * eps / 3.0),
        l4=lp(mag, 4.0),
        sup=float(np.max(mag)),
        grad_l2=lp(gmag, 2.0),
        grad_3eps=lp(gmag, 3.0 + eps),
        grad2_l2=second_grad_l2(omega),
        stretch=stretching_functional(omega),
        wdiss=weighted_dissipation(omega, eps),
    )


def balance_residuals_from_arrays(
    t: np.ndarray, l2: np.ndarray, grad_l2: np.ndarray, stretch: np.ndarray, nu: float
) -> np.ndarray:
    """Relative enstrophy-balance residual per sample.

    residual_k = |0.5 d/dt(l2^2) + nu grad_l2^2 - S| / max(nu grad_l2^2, floor)
    with centered second-order time differencing; the two endpoints use
    one-sided differences and should be excluded from pass/fail statistics.
    """
    if len(t) < 3:
        raise ValueError("balance residual needs at least 3 recorded samples")
    ens = np.asarray(l2, dtype=float) ** 2
    ddt = np.gradient(ens, np.asarray(t, dtype=float), edge_order=1)
    diss = nu * np.asarray(grad_l2, dtype=float) ** 2
    res = np.abs(0.5 * ddt + diss - np.asarray(stretch, dtype=float))
    return res / np.maximum(diss, BALANCE_FLOOR)


def enstrophy_balance_residual(trajectory, config) -> np.ndarray:
    """Balance residuals for a trajectory, computing the needed norms directly."""
    states = trajectory.states
    if len(states) < 3:
        raise ValueError("balance residual needs at least 3 recorded samples")
    t = np.array([s.t for s in states])
    l2 = np.empty(len(states))
    gl2 = np.empty(len(states))
    st = np.empty(len(states))
    for i, s in enumerate(states):
        l2[i] = parseval_l2(s.omega)
        ws = _workspace(s.omega.grid)
        kd2 = ws.kappa_d[0] ** 2 + ws.kappa_d[1] ** 2 + ws.kappa_d[2] ** 2
        gl2[i] = np.sqrt(_mode_space_sq(s.omega, kd2))
        st[i] = stretching_functional(s.omega)
    return balance_residuals_from_arrays(t, l2, gl2, st, config.nu)


def series_from_rows(rows: Sequence[Sequence[float]]) -> NormSeries:
    """Build a NormSeries from rows ordered as NORM_COLUMNS."""
    return NormSeries(NormSample(*[float(v) for v in row]) for row in rows)
