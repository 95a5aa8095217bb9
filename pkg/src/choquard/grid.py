"""Uniform periodic grids, real fields on them, quadrature and spectral calculus.

A box of side ``L`` centred at the origin stands in for R^N.  Samples sit at
``x_j = -L/2 + j*h`` per axis with ``h = L/n``, stored row-major.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import scipy.fft as sfft

from .errors import DomainError, GridMismatch

MAX_SAMPLES = 2**31 - 1


@dataclass(frozen=True)
class GridSpec:
    dim: int
    n: int
    L: float

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise DomainError(f"dim must be 1, 2 or 3, got {self.dim}")
        n = int(self.n)
        if n < 8 or n & (n - 1):
            raise DomainError(f"points_per_axis must be a power of two >= 8, got {self.n}")
        if not (self.L > 0 and np.isfinite(self.L)):
            raise DomainError(f"box_length must be positive and finite, got {self.L}")
        if n**self.dim > MAX_SAMPLES:
            raise DomainError(f"{n}^{self.dim} samples exceed the array limit")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self):
        return self.L / self.n

    @property
    def shape(self):
        return (self.n,) * self.dim

    @property
    def size(self):
        return self.n**self.dim

    @property
    def cell_volume(self):
        return self.h**self.dim

    @property
    def volume(self):
        return self.L**self.dim

    def axis(self):
        """1D node coordinates shared by every axis."""
        return -self.L / 2 + np.arange(self.n) * self.h

    def coords(self):
        """Coordinate arrays, one per axis, broadcast to ``shape``."""
        x = self.axis()
        return np.meshgrid(*([x] * self.dim), indexing="ij")

    def radius(self):
        return np.sqrt(sum(c * c for c in self.coords()))

    def mode_index_sq(self):
        """Integer |m|^2 on the real-FFT half spectrum."""
        return _mode_index_sq(self.dim, self.n)

    def wavenumber_sq(self):
        """|kappa|^2 = (2 pi |m| / L)^2 on the real-FFT half spectrum (read-only, cached)."""
        return _wavenumber_sq(self.dim, self.n, self.L)

    def boundary_mask(self):
        """Nodes lying on the outermost shell of the box (index 0 or n-1 on some axis)."""
        return _boundary_mask(self.dim, self.n)


def _readonly(a):
    a.flags.writeable = False
    return a


@lru_cache(maxsize=32)
def _mode_index_sq(dim, n):
    m = np.fft.fftfreq(n, d=1.0 / n)
    mr = np.fft.rfftfreq(n, d=1.0 / n)
    axes = [m] * (dim - 1) + [mr]
    grids = np.meshgrid(*axes, indexing="ij")
    return _readonly(np.rint(sum(g * g for g in grids)).astype(np.int64))


@lru_cache(maxsize=32)
def _wavenumber_sq(dim, n, L):
    return _readonly((2 * np.pi / L) ** 2 * _mode_index_sq(dim, n))


@lru_cache(maxsize=32)
def _boundary_mask(dim, n):
    idx = np.indices((n,) * dim)
    return _readonly(np.any((idx == 0) | (idx == n - 1), axis=0))


class Field:
    """Immutable real samples on a grid."""

    __slots__ = ("grid", "values")

    def __init__(self, grid, values):
        arr = np.array(values, dtype=np.float64, order="C")
        if arr.size == grid.size and arr.shape != grid.shape:
            arr = arr.reshape(grid.shape)
        if arr.shape != grid.shape:
            raise GridMismatch(f"values of shape {arr.shape} do not fit grid shape {grid.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("field values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def from_function(cls, grid, fn):
        return cls(grid, fn(*grid.coords()))

    def __add__(self, other):
        same_grid(self, other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other):
        same_grid(self, other)
        return Field(self.grid, self.values - other.values)

    def __mul__(self, c):
        return Field(self.grid, self.values * float(c))

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __abs__(self):
        return Field(self.grid, np.abs(self.values))

    def __repr__(self):
        return f"Field(grid={self.grid}, max={np.max(np.abs(self.values)):.3g})"

    def max_abs(self):
        return float(np.max(np.abs(self.values)))


def same_grid(*fields):
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise GridMismatch(f"grid mismatch: {g} vs {f.grid}")
    return g


@dataclass(frozen=True)
class Spectrum:
    """Real-FFT coefficients of a field; ``hermitian`` marks the omitted half as implied."""

    grid: GridSpec
    coeffs: np.ndarray
    hermitian: bool = True

    @cached_property
    def wavenumber_sq(self):
        return self.grid.wavenumber_sq()


def forward(f):
    return Spectrum(f.grid, sfft.rfftn(f.values))


def backward(spec):
    return Field(spec.grid, sfft.irfftn(spec.coeffs, s=spec.grid.shape))


def filter_values(values, multiplier):
    """Inverse transform of ``multiplier * transform(values)``; multiplier lives on the half spectrum."""
    return sfft.irfftn(multiplier * sfft.rfftn(values), s=values.shape)


def apply_multiplier(f, multiplier):
    return filter_values(f.values, multiplier)


def integrate(f):
    return f.grid.cell_volume * float(np.sum(f.values))


def inner_product(f, g):
    grid = same_grid(f, g)
    return grid.cell_volume * float(np.vdot(f.values, g.values))


def spectral_inner_product(f, g):
    """Parseval form of :func:`inner_product` computed from full complex spectra."""
    grid = same_grid(f, g)
    F = sfft.fftn(f.values)
    G = sfft.fftn(g.values)
    return grid.cell_volume / grid.size * float(np.real(np.vdot(G, F)))


def laplacian_values(f):
    return -apply_multiplier(f, f.grid.wavenumber_sq())


def dirichlet_energy(f):
    """Integral of |grad f|^2 computed spectrally (exact for band-limited f)."""
    grid = f.grid
    F = sfft.rfftn(f.values)
    w = _half_spectrum_weights(grid)
    return grid.cell_volume / grid.size * float(np.sum(w * grid.wavenumber_sq() * np.abs(F) ** 2))


def _half_spectrum_weights(grid):
    # each rfft column except 0 and Nyquist stands for itself and its conjugate
    w = np.full(grid.n // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return w


def shift_field(f, offsets):
    """Periodic lattice translation: ``g(x_j) = f(x_{j - offset})``."""
    offs = tuple(int(o) for o in np.broadcast_to(offsets, (f.grid.dim,)))
    return Field(f.grid, np.roll(f.values, offs, axis=tuple(range(f.grid.dim))))


def boundary_ratio(f):
    """max |f| on the box shell divided by max |f| overall (0 for a zero field)."""
    peak = f.max_abs()
    if peak == 0:
        return 0.0
    return float(np.max(np.abs(f.values[f.grid.boundary_mask()]))) / peak
