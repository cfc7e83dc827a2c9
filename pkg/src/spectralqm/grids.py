"""Periodic sampling grids, wavefunctions, and Parseval-preserving transforms.

Everything here is a pure function of immutable values.  The transform pair
uses the convention

    Phi_m = dx^dim / (2*pi)^(dim/2) * sum_j psi_j exp(-i k_m . x_j)

so that the discrete Parseval identity

    sum_m |Phi_m|^2 dk^dim == sum_j |psi_j|^2 dx^dim

holds without correction factors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as sfft

__all__ = [
    "Grid",
    "Wavefunction",
    "MomentumAmplitudes",
    "make_grid",
    "gaussian_packet",
    "plane_wave",
    "random_state",
    "inner",
    "norm_squared",
    "normalize",
    "to_momentum",
    "from_momentum",
    "momentum_density_norm",
]

TWO_PI = 2.0 * np.pi


def _per_axis(value, dim, name):
    """Broadcast a scalar to a per-axis tuple, or validate a given tuple."""
    if np.isscalar(value):
        return (value,) * dim
    vals = tuple(value)
    if len(vals) != dim:
        raise ValueError(f"{name} must be scalar or length-{dim}, got {value!r}")
    return vals


@dataclass(frozen=True)
class Grid:
    """Periodic sampling grid in 1 or 2 dimensions.

    Per axis: n samples over a box of the given length starting at origin,
    spacing dx = length/n, sample points x_j = origin + j*dx, and dual
    wavenumbers k_m = 2*pi*m'/length with m' in {-n/2, ..., n/2-1} stored in
    standard DFT ordering.
    """

    dim: int
    n: tuple[int, ...]
    length: tuple[float, ...]
    origin: tuple[float, ...]

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(l / n for l, n in zip(self.length, self.n))

    @property
    def k_spacing(self) -> tuple[float, ...]:
        return tuple(TWO_PI / l for l in self.length)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.n

    @property
    def size(self) -> int:
        return int(np.prod(self.n))

    @property
    def cell_volume(self) -> float:
        """Quadrature weight dx^dim of one grid cell."""
        return float(np.prod(self.spacing))

    @property
    def k_cell_volume(self) -> float:
        return float(np.prod(self.k_spacing))

    def axis_points(self, axis: int) -> np.ndarray:
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        dx = self.spacing[axis]
        return self.origin[axis] + dx * np.arange(self.n[axis])

    def axis_wavenumbers(self, axis: int) -> np.ndarray:
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        return TWO_PI * sfft.fftfreq(self.n[axis], d=self.spacing[axis])

    def axis_derivative_wavenumbers(self, axis: int) -> np.ndarray:
        """Wavenumbers for spectral differentiation: the Nyquist bin is zeroed.

        The m' = -n/2 mode has an ambiguous sign on a real sampling grid;
        zeroing it keeps the derivative operator Hermitian.
        """
        k = self.axis_wavenumbers(axis).copy()
        k[self.n[axis] // 2] = 0.0
        return k

    @cached_property
    def meshes(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays broadcast to the full grid shape (ij indexing)."""
        axes = [self.axis_points(a) for a in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    @cached_property
    def k_meshes(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis_wavenumbers(a) for a in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    @cached_property
    def k_derivative_meshes(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis_derivative_wavenumbers(a) for a in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))


def make_grid(dim: int, n, length, origin) -> Grid:
    """Build a periodic grid; n must be a power of two >= 4 on every axis."""
    if dim not in (1, 2):
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    ns = _per_axis(n, dim, "n")
    lengths = _per_axis(length, dim, "length")
    origins = _per_axis(origin, dim, "origin")
    for nv in ns:
        nv = int(nv)
        if nv < 4 or nv & (nv - 1) != 0:
            raise ValueError(f"samples per axis must be a power of two >= 4, got {nv}")
    for lv in lengths:
        if not lv > 0:
            raise ValueError(f"length must be positive, got {lv}")
    return Grid(
        dim=dim,
        n=tuple(int(v) for v in ns),
        length=tuple(float(v) for v in lengths),
        origin=tuple(float(v) for v in origins),
    )


@dataclass(frozen=True)
class Wavefunction:
    """Complex amplitudes on a grid, with the unit system carried along."""

    grid: Grid
    amps: np.ndarray
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.amps.shape != self.grid.shape:
            raise ValueError(
                f"amps shape {self.amps.shape} does not match grid shape {self.grid.shape}"
            )
        if self.hbar <= 0 or self.mass <= 0:
            raise ValueError("hbar and mass must be positive")

    def with_amps(self, amps: np.ndarray) -> "Wavefunction":
        return Wavefunction(self.grid, amps, self.hbar, self.mass)


@dataclass(frozen=True)
class MomentumAmplitudes:
    """Wavenumber-space amplitudes in DFT ordering, Parseval-matched."""

    grid: Grid
    amps: np.ndarray
    hbar: float = 1.0
    mass: float = 1.0


def norm_squared(psi: Wavefunction) -> float:
    """Riemann-sum squared norm sum |psi_j|^2 dx^dim."""
    return float(np.sum(np.abs(psi.amps) ** 2).real * psi.grid.cell_volume)


def normalize(psi: Wavefunction) -> Wavefunction:
    n2 = norm_squared(psi)
    if n2 <= 0.0:
        raise ValueError("cannot normalize a zero wavefunction")
    return psi.with_amps(psi.amps / np.sqrt(n2))


def inner(psi: Wavefunction, phi: Wavefunction) -> complex:
    """Bracket (psi, phi) = sum conj(psi_j) phi_j dx^dim; conjugate-linear in psi."""
    if psi.grid != phi.grid:
        raise ValueError("inner product requires wavefunctions on the same grid")
    return complex(np.vdot(psi.amps, phi.amps) * psi.grid.cell_volume)


def gaussian_packet(grid: Grid, x0, p0, sigma, hbar: float = 1.0, mass: float = 1.0) -> Wavefunction:
    """Normalized Gaussian packet exp(-(x-x0)^2/(4 sigma^2) + i p0.x/hbar).

    sigma is the position standard deviation per axis.  Warns if the 5-sigma
    support leaks outside the periodic box, since every identity downstream
    assumes a negligible boundary amplitude.
    """
    x0s = _per_axis(x0, grid.dim, "x0")
    p0s = _per_axis(p0, grid.dim, "p0")
    sigmas = _per_axis(sigma, grid.dim, "sigma")
    for s in sigmas:
        if not s > 0:
            raise ValueError(f"sigma must be positive, got {s}")
    for a, (c, s) in enumerate(zip(x0s, sigmas)):
        lo, hi = grid.origin[a], grid.origin[a] + grid.length[a]
        if c - 5 * s < lo or c + 5 * s > hi:
            warnings.warn(
                f"gaussian_packet support (x0 +/- 5 sigma) leaves the box on axis {a}",
                stacklevel=2,
            )
    phase = np.zeros(grid.shape)
    envelope = np.zeros(grid.shape)
    for a in range(grid.dim):
        x = grid.meshes[a]
        envelope = envelope - (x - x0s[a]) ** 2 / (4.0 * sigmas[a] ** 2)
        phase = phase + p0s[a] * x / hbar
    amps = np.exp(envelope + 1j * phase)
    return normalize(Wavefunction(grid, amps, hbar=hbar, mass=mass))


def plane_wave(grid: Grid, mode_index, hbar: float = 1.0, mass: float = 1.0) -> Wavefunction:
    """Single harmonic exp(i k_m . x)/sqrt(volume), an exact momentum eigenstate."""
    modes = _per_axis(mode_index, grid.dim, "mode_index")
    phase = np.zeros(grid.shape)
    for a, m in enumerate(modes):
        m = int(m)
        half = grid.n[a] // 2
        if not -half <= m < half:
            raise ValueError(f"mode {m} outside [-{half}, {half}) on axis {a}")
        k = TWO_PI * m / grid.length[a]
        phase = phase + k * grid.meshes[a]
    amps = np.exp(1j * phase) / np.sqrt(np.prod(grid.length))
    return Wavefunction(grid, amps.astype(complex), hbar=hbar, mass=mass)


def random_state(grid: Grid, rng: np.random.Generator, hbar: float = 1.0, mass: float = 1.0) -> Wavefunction:
    """Normalized state with iid complex Gaussian amplitudes (test fodder)."""
    amps = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return normalize(Wavefunction(grid, amps, hbar=hbar, mass=mass))


def _origin_phase(grid: Grid) -> np.ndarray:
    """exp(-i k . x0) factor relating the DFT to the origin-anchored transform."""
    phase = np.zeros(grid.shape)
    for a in range(grid.dim):
        phase = phase + grid.k_meshes[a] * grid.origin[a]
    return np.exp(-1j * phase)


def to_momentum(psi: Wavefunction) -> MomentumAmplitudes:
    """Forward transform with the (2*pi)^(-dim/2) * dx^dim scaling."""
    grid = psi.grid
    scale = grid.cell_volume / TWO_PI ** (grid.dim / 2.0)
    amps = sfft.fftn(psi.amps) * (scale * _origin_phase(grid))
    return MomentumAmplitudes(grid, amps, hbar=psi.hbar, mass=psi.mass)


def from_momentum(phi: MomentumAmplitudes) -> Wavefunction:
    """Inverse of :func:`to_momentum`; round trips to machine precision."""
    grid = phi.grid
    scale = grid.cell_volume / TWO_PI ** (grid.dim / 2.0)
    amps = sfft.ifftn(phi.amps * np.conj(_origin_phase(grid)) / scale)
    return Wavefunction(grid, amps, hbar=phi.hbar, mass=phi.mass)


def momentum_density_norm(phi: MomentumAmplitudes) -> float:
    """sum |Phi_m|^2 dk^dim, the k-space side of the Parseval identity."""
    return float(np.sum(np.abs(phi.amps) ** 2).real * phi.grid.k_cell_volume)
