"""Periodic-box spectral machinery: grids, transforms, and vector operators.

Fields live on a uniform n^3 grid over a triply periodic box of edge L.
Spectral storage uses the half-spectrum (real-transform) layout over the last
axis, so Hermitian symmetry is structural except on the self-conjugate planes
k_z = 0 and k_z = n/2, where it is checked explicitly.

Transform convention: unnormalized forward (``rfftn``), 1/n^3 on the inverse.
All quadrature/norm code accounts for this factor.

Derivative operators (gradient, curl, Biot-Savart) zero the Nyquist
wavenumber on each axis; an odd derivative has no real-field-preserving
counterpart there.  Fields that have passed through ``dealias`` (every solver
state) carry no Nyquist content, so this convention is invisible downstream.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft as _fft

__all__ = [
    "GridSpec",
    "ScalarField",
    "VectorField",
    "SpectralVectorField",
    "SpectralGradient",
    "make_grid",
    "forward_transform",
    "inverse_transform",
    "gradient",
    "curl",
    "divergence",
    "project_solenoidal",
    "biot_savart_velocity",
    "dealias",
    "zero_mean",
    "solenoidal_residual",
    "hermitian_residual",
    "mean_mode_magnitude",
]

HERMITIAN_TOL = 1e-12
SOLENOIDAL_TOL = 1e-10
MEAN_MODE_TOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: n points per axis on a box of edge L."""

    n: int
    L: float = 2.0 * math.pi
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self) -> None:
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"grid n must be an even integer >= 8, got {self.n}")
        if not (self.L > 0):
            raise ValueError(f"box edge L must be positive, got {self.L}")
        if not (0.0 < self.dealias_fraction <= 1.0):
            raise ValueError(
                f"dealias_fraction must lie in (0, 1], got {self.dealias_fraction}"
            )

    @property
    def spacing(self) -> float:
        return self.L / self.n

    @property
    def cell_volume(self) -> float:
        return (self.L / self.n) ** 3

    @property
    def spectral_shape(self) -> tuple[int, int, int]:
        return (self.n, self.n, self.n // 2 + 1)


def make_grid(n: int, L: float = 2.0 * math.pi, dealias_fraction: float = 2.0 / 3.0) -> GridSpec:
    """Validate and build a GridSpec (node spacing L/n in all three axes)."""
    return GridSpec(n=int(n), L=float(L), dealias_fraction=float(dealias_fraction))


class _Workspace:
    """Precomputed wavenumber arrays for one grid, shared by all operators."""

    def __init__(self, grid: GridSpec):
        n = grid.n
        scale = 2.0 * math.pi / grid.L
        kx = np.fft.fftfreq(n, 1.0 / n)  # integer wavenumbers, signed
        kz = np.fft.rfftfreq(n, 1.0 / n)  # 0 .. n/2

        self.grid = grid
        # broadcastable physical wavenumber components (full, incl. Nyquist)
        self.kappa = (
            (scale * kx)[:, None, None],
            (scale * kx)[None, :, None],
            (scale * kz)[None, None, :],
        )
        # derivative wavenumbers: Nyquist zeroed to keep derivatives real
        kxd = scale * kx
        kxd[n // 2] = 0.0
        kzd = scale * kz
        kzd[-1] = 0.0
        self.kappa_d = (
            kxd[:, None, None],
            kxd[None, :, None],
            kzd[None, None, :],
        )
        self.k2 = self.kappa[0] ** 2 + self.kappa[1] ** 2 + self.kappa[2] ** 2
        inv = self.k2.copy()
        inv[0, 0, 0] = 1.0
        self.inv_k2 = 1.0 / inv
        self.inv_k2[0, 0, 0] = 0.0

        cutoff = grid.dealias_fraction * (n / 2.0)
        self.dealias_mask = (
            (np.abs(kx)[:, None, None] <= cutoff)
            & (np.abs(kx)[None, :, None] <= cutoff)
            & (kz[None, None, :] <= cutoff)
        )
        # Parseval weights for the half-spectrum: interior k_z planes count twice
        w = np.full(grid.spectral_shape, 2.0)
        w[:, :, 0] = 1.0
        w[:, :, -1] = 1.0
        self.parseval_weight = w
        # slot of -k within one fft axis
        self._negidx = (-np.arange(n)) % n


@lru_cache(maxsize=None)
def _workspace(grid: GridSpec) -> _Workspace:
    return _Workspace(grid)


@lru_cache(maxsize=None)
def _coords(grid: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.arange(grid.n) * grid.spacing
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    return X, Y, Z


# batch-parallel transform workers; each 3D transform stays single-threaded,
# so results are bit-identical for any worker count
_WORKERS = max(1, min(4, os.cpu_count() or 1))


def _rfft(samples: np.ndarray) -> np.ndarray:
    return _fft.rfftn(samples, axes=(-3, -2, -1), workers=_WORKERS)

def _irfft(modes: np.ndarray, n: int) -> np.ndarray:
    return _fft.irfftn(modes, s=(n, n, n), axes=(-3, -2, -1), workers=_WORKERS)


@dataclass(frozen=True)
class ScalarField:
    """Real scalar samples at the n^3 grid nodes."""

    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self) -> None:
        n = self.grid.n
        if self.samples.shape != (n, n, n):
            raise ValueError(f"scalar samples must have shape {(n, n, n)}")
        self.samples.flags.writeable = False


@dataclass(frozen=True)
class VectorField:
    """Real 3-vector samples, stored as one (3, n, n, n) array."""

    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self) -> None:
        n = self.grid.n
        if self.samples.shape != (3, n, n, n):
            raise ValueError(f"vector samples must have shape {(3, n, n, n)}")
        self.samples.flags.writeable = False

    def component(self, i: int) -> ScalarField:
        return ScalarField(self.grid, self.samples[i].copy())

    def magnitude(self) -> ScalarField:
        return ScalarField(self.grid, np.sqrt(np.sum(self.samples**2, axis=0)))


@dataclass(frozen=True)
class SpectralVectorField:
    """Complex mode coefficients of a real 3-vector field.

    Storage is the half-spectrum layout (n, n, n/2+1) per component; the
    coefficient at a negative-k_z wavevector is the conjugate of its mirror
    and is exposed through :meth:`mode`.
    """

    grid: GridSpec
    modes: np.ndarray

    def __post_init__(self) -> None:
        if self.modes.shape != (3,) + self.grid.spectral_shape:
            raise ValueError(
                f"modes must have shape {(3,) + self.grid.spectral_shape}"
            )
        self.modes.flags.writeable = False

    def mode(self, k: tuple[int, int, int]) -> np.ndarray:
        """Coefficient 3-vector at integer wavevector k (any sign)."""
        n = self.grid.n
        kx, ky, kz = (int(k[0]), int(k[1]), int(k[2]))
        for c in (kx, ky, kz):
            if not -n // 2 <= c <= n // 2:
                raise ValueError(f"wavevector {k} outside grid range")
        if kz < 0:
            return np.conj(self.mode((-kx, -ky, -kz)))
        return self.modes[:, kx % n, ky % n, kz].copy()

    def copy_modes(self) -> np.ndarray:
        return self.modes.copy()


@dataclass(frozen=True)
class SpectralGradient:
    """Nine-component spectral gradient; modes[i, j] holds d_i f_j."""

    grid: GridSpec
    modes: np.ndarray

    def __post_init__(self) -> None:
        if self.modes.shape != (3, 3) + self.grid.spectral_shape:
            raise ValueError("gradient modes must have shape (3, 3, n, n, n/2+1)")
        self.modes.flags.writeable = False

    def to_physical(self) -> np.ndarray:
        """Real-space partial derivatives, shape (3, 3, n, n, n)."""
        return _irfft(self.modes, self.grid.n)


def forward_transform(field: VectorField) -> SpectralVectorField:
    """Unnormalized forward transform of a real vector field."""
    if not np.all(np.isfinite(field.samples)):
        raise ValueError("cannot transform a field with non-finite samples")
    return SpectralVectorField(field.grid, _rfft(field.samples))


def inverse_transform(modes: SpectralVectorField) -> VectorField:
    """Inverse transform (1/n^3 normalized).

    Raises if Hermitian symmetry is broken beyond HERMITIAN_TOL on the
    self-conjugate planes, which is the only place the half-spectrum layout
    can encode a non-real field.
    """
    res = hermitian_residual(modes)
    if res > HERMITIAN_TOL:
        raise ValueError(
            f"broken Hermitian symmetry: residual {res:.3e} exceeds {HERMITIAN_TOL:.1e}"
        )
    return VectorField(modes.grid, _irfft(modes.modes, modes.grid.n))


def hermitian_residual(modes: SpectralVectorField) -> float:
    """Max |f(-k) - conj(f(k))| over self-conjugate planes, relative to max |f|."""
    ws = _workspace(modes.grid)
    m = modes.modes
    peak = float(np.max(np.abs(m)))
    if peak == 0.0:
        return 0.0
    idx = ws._negidx
    worst = 0.0
    for plane in (0, modes.grid.n // 2):
        sub = m[:, :, :, plane]
        mirror = np.conj(sub[:, idx][:, :, idx])
        worst = max(worst, float(np.max(np.abs(sub - mirror))))
    return worst / peak


def _gradient_modes(modes: np.ndarray, ws: _Workspace) -> np.ndarray:
    out = np.empty((3,) + modes.shape, dtype=modes.dtype)
    for a in range(3):
        out[a] = 1j * ws.kappa_d[a] * modes
    return out


def gradient(modes: SpectralVectorField) -> SpectralGradient:
    """Spectral gradient: component (i, j) is the f_j mode times i*(2pi/L)*k_i."""
    ws = _workspace(modes.grid)
    return SpectralGradient(modes.grid, _gradient_modes(modes.modes, ws))


def _curl_modes(m: np.ndarray, ws: _Workspace) -> np.ndarray:
    kd = ws.kappa_d
    out = np.empty_like(m)
    out[0] = 1j * (kd[1] * m[2] - kd[2] * m[1])
    out[1] = 1j * (kd[2] * m[0] - kd[0] * m[2])
    out[2] = 1j * (kd[0] * m[1] - kd[1] * m[0])
    return out


def curl(modes: SpectralVectorField) -> SpectralVectorField:
    """Spectral curl i*(2pi/L) k x f; solenoidal by construction."""
    ws = _workspace(modes.grid)
    return SpectralVectorField(modes.grid, _curl_modes(modes.modes, ws))


def divergence(modes: SpectralVectorField) -> np.ndarray:
    """Spectral divergence i*(2pi/L) k . f, returned as raw scalar modes."""
    ws = _workspace(modes.grid)
    m = modes.modes
    kd = ws.kappa_d
    return 1j * (kd[0] * m[0] + kd[1] * m[1] + kd[2] * m[2])


def _project_modes(m: np.ndarray, ws: _Workspace) -> np.ndarray:
    k = ws.kappa
    kdotf = k[0] * m[0] + k[1] * m[1] + k[2] * m[2]
    kdotf *= ws.inv_k2
    out = m.copy()
    for a in range(3):
        out[a] -= k[a] * kdotf
    return out


def project_solenoidal(modes: SpectralVectorField) -> SpectralVectorField:
    """Leray projection f <- f - k (k.f)/|k|^2 for k != 0."""
    ws = _workspace(modes.grid)
    return SpectralVectorField(modes.grid, _project_modes(modes.modes, ws))


def solenoidal_residual(modes: SpectralVectorField) -> float:
    """max_k |k . f| / max_k |k| |f|, zero for the zero field."""
    ws = _workspace(modes.grid)
    m = modes.modes
    k = ws.kappa
    div = np.abs(k[0] * m[0] + k[1] * m[1] + k[2] * m[2])
    peak = float(np.max(np.abs(m)))
    if peak == 0.0:
        return 0.0
    kmax = math.sqrt(float(np.max(ws.k2)))
    return float(np.max(div)) / (kmax * peak)


def mean_mode_magnitude(modes: SpectralVectorField) -> float:
    """|f(0)| relative to the peak mode magnitude (0 for the zero field)."""
    peak = float(np.max(np.abs(modes.modes)))
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(modes.modes[:, 0, 0, 0]))) / peak


def zero_mean(modes: SpectralVectorField) -> SpectralVectorField:
    m = modes.modes.copy()
    m[:, 0, 0, 0] = 0.0
    return SpectralVectorField(modes.grid, m)


def _biot_savart_modes(m: np.ndarray, ws: _Workspace) -> np.ndarray:
    out = _curl_modes(m, ws)
    out *= ws.inv_k2
    return out


def biot_savart_velocity(omega: SpectralVectorField) -> SpectralVectorField:
    """Velocity with u(k) = i (2pi/L) k x w(k) / |(2pi/L) k|^2, u(0) = 0.

    The mean vorticity mode has no inverse on the torus; inputs carrying one
    above MEAN_MODE_TOL (relative) are rejected.
    """
    if mean_mode_magnitude(omega) > MEAN_MODE_TOL:
        raise ValueError(
            "nonzero mean vorticity mode: velocity is undefined for it on the torus"
        )
    ws = _workspace(omega.grid)
    return SpectralVectorField(omega.grid, _biot_savart_modes(omega.modes, ws))


def dealias(modes: SpectralVectorField) -> SpectralVectorField:
    """Zero every mode with any |k_i| above dealias_fraction * n/2."""
    ws = _workspace(modes.grid)
    return SpectralVectorField(modes.grid, modes.modes * ws.dealias_mask)
