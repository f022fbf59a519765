"""Uniform 1-D grids, discrete calculus, quadrature and resampling.

All grid functions are sampled on nodes ``x_j = x_min + j*dx``.  Periodic
grids identify ``x_min`` with ``x_min + n*dx`` and use Fourier (spectral)
operators; their sample count must be a power of two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError

SCHEMES = ("spectral", "centered2")


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    x_min: float
    dx: float
    n: int
    periodic: bool = True

    def __post_init__(self):
        if not np.isfinite(self.x_min):
            raise ConfigurationError("grid origin must be finite")
        if not (np.isfinite(self.dx) and self.dx > 0):
            raise ConfigurationError(f"grid spacing must be positive, got {self.dx}")
        if int(self.n) != self.n or self.n < 8:
            raise ConfigurationError(f"grid needs n >= 8 samples, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.periodic and not _is_power_of_two(self.n):
            raise ConfigurationError(f"periodic grids need a power-of-two n, got {self.n}")

    @classmethod
    def centered(cls, length: float = 80.0, n: int = 4096, periodic: bool = True) -> "Grid":
        """Grid on ``[-L/2, L/2)`` (periodic) or ``[-L/2, L/2]`` (closed)."""
        if length <= 0:
            raise ConfigurationError("grid length must be positive")
        dx = length / n if periodic else length / (n - 1)
        return cls(-0.5 * length, dx, n, periodic)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.n * self.dx if self.periodic else (self.n - 1) * self.dx

    @property
    def x_max(self) -> float:
        return self.x_min + (self.n - 1) * self.dx

    @property
    def center(self) -> float:
        return self.x_min + 0.5 * self.n * self.dx if self.periodic else 0.5 * (self.x_min + self.x_max)

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in FFT order, Nyquist mode set to zero."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        k[self.n // 2] = 0.0
        return k

    def dilated(self, factor: float) -> "Grid":
        """Grid whose node ``j`` sits at ``x_j / factor``."""
        return Grid(self.x_min / factor, self.dx / factor, self.n, self.periodic)

    def extended(self, n: int) -> "Grid":
        """Same spacing, ``n`` nodes, same centre, containing every node of ``self``."""
        if n < self.n or (n - self.n) % 2:
            raise ConfigurationError("extension must add an even number of nodes")
        return Grid(self.x_min - 0.5 * (n - self.n) * self.dx, self.dx, n, self.periodic)

    def descriptor(self) -> dict:
        return {"x_min": self.x_min, "dx": self.dx, "n": self.n, "periodic": self.periodic}


@dataclass(frozen=True, eq=False)
class Field:
    grid: Grid
    samples: np.ndarray

    _dtype = np.float64

    def __post_init__(self):
        s = np.array(self.samples, dtype=self._dtype)
        if s.shape != (self.grid.n,):
            raise ConfigurationError(
                f"field has {s.shape} samples, grid expects ({self.grid.n},)")
        if not np.all(np.isfinite(s)):
            raise ConfigurationError("field samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid: Grid, func):
        return cls(grid, func(grid.x))

    def like(self, samples) -> "Field":
        """New field of the same kind on the same grid."""
        return type(self)(self.grid, samples)

    def __len__(self):
        return self.grid.n


class RealField(Field):
    _dtype = np.float64


class ComplexField(Field):
    _dtype = np.complex128


def _spectral_multiplier(values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    if np.isrealobj(values):
        n = values.size
        return np.fft.irfft(np.fft.rfft(values) * multiplier[: n // 2 + 1], n=n)
    return np.fft.ifft(np.fft.fft(values) * multiplier)


def spectral_apply(values: np.ndarray, grid: Grid, multiplier) -> np.ndarray:
    """Apply a Fourier multiplier ``m(k)`` (callable or FFT-ordered array)."""
    if not grid.periodic:
        raise ConfigurationError("spectral operators need a periodic grid")
    m = multiplier(grid.wavenumbers()) if callable(multiplier) else multiplier
    return _spectral_multiplier(np.asarray(values), m)


def _d1(values: np.ndarray, grid: Grid, scheme: str) -> np.ndarray:
    if scheme == "spectral":
        if not grid.periodic:
            raise ConfigurationError("spectral derivative requires a periodic grid")
        return _spectral_multiplier(values, 1j * grid.wavenumbers())
    if scheme == "centered2":
        h = grid.dx
        if grid.periodic:
            return (np.roll(values, -1) - np.roll(values, 1)) / (2 * h)
        out = np.empty_like(values)
        out[1:-1] = (values[2:] - values[:-2]) / (2 * h)
        out[0] = (-3 * values[0] + 4 * values[1] - values[2]) / (2 * h)
        out[-1] = (3 * values[-1] - 4 * values[-2] + values[-3]) / (2 * h)
        return out
    raise ConfigurationError(f"unknown derivative scheme {scheme!r}; use one of {SCHEMES}")


def default_scheme(grid: Grid) -> str:
    return "spectral" if grid.periodic else "centered2"


def derivative(f: Field, scheme: str | None = None) -> Field:
    """Discrete ``d/dx`` of ``f`` on its grid."""
    scheme = scheme or default_scheme(f.grid)
    return f.like(_d1(f.samples, f.grid, scheme))


def second_derivative_values(values: np.ndarray, grid: Grid, scheme: str | None = None) -> np.ndarray:
    """Second derivative consistent with :func:`dirichlet_energy`.

    Spectral: ``-k^2`` with the Nyquist mode dropped (``D o D``).  Finite
    differences: the 3-point Laplacian, with homogeneous Dirichlet closure
    on non-periodic grids.
    """
    scheme = scheme or default_scheme(grid)
    if scheme == "spectral":
        if not grid.periodic:
            raise ConfigurationError("spectral derivative requires a periodic grid")
        k = grid.wavenumbers()
        return _spectral_multiplier(values, -k * k)
    if scheme != "centered2":
        raise ConfigurationError(f"unknown derivative scheme {scheme!r}")
    h2 = grid.dx * grid.dx
    if grid.periodic:
        return (np.roll(values, -1) - 2 * values + np.roll(values, 1)) / h2
    padded = np.concatenate(([0.0], values, [0.0])).astype(values.dtype)
    return (padded[2:] - 2 * values + padded[:-2]) / h2


def second_derivative(f: Field, scheme: str | None = None) -> Field:
    return f.like(second_derivative_values(f.samples, f.grid, scheme))


def integrate_values(values: np.ndarray, grid: Grid) -> float | complex:
    """Rectangle rule on periodic grids, trapezoid rule otherwise."""
    if grid.periodic:
        return values.sum() * grid.dx
    return (values.sum() - 0.5 * (values[0] + values[-1])) * grid.dx


def integrate(f: Field) -> float:
    return integrate_values(f.samples, f.grid)


def inner_values(f: np.ndarray, g: np.ndarray, grid: Grid) -> float:
    """Real ``L^2`` inner product ``Re int f conj(g)``."""
    return float(np.real(integrate_values(f * np.conj(g), grid)))


def l2_norm_sq(f: Field) -> float:
    return float(integrate_values(np.abs(f.samples) ** 2, f.grid))


def lp_norm(f: Field, p: float) -> float:
    return float(integrate_values(np.abs(f.samples) ** p, f.grid)) ** (1.0 / p)


def dirichlet_energy_values(values: np.ndarray, grid: Grid, scheme: str | None = None) -> float:
    """``||f'||_2^2`` in the form that equals ``-<f, f''>`` exactly."""
    scheme = scheme or default_scheme(grid)
    if scheme == "spectral":
        if not grid.periodic:
            raise ConfigurationError("spectral derivative requires a periodic grid")
        k = grid.wavenumbers()
        fh = np.fft.fft(values)
        return float(np.sum(k * k * np.abs(fh) ** 2) * grid.dx / grid.n)
    if grid.periodic:
        diff = np.roll(values, -1) - values
    else:
        diff = np.diff(np.concatenate(([0.0], values, [0.0])))
    return float(np.sum(np.abs(diff) ** 2) / grid.dx)


def dirichlet_energy(f: Field, scheme: str | None = None) -> float:
    return dirichlet_energy_values(f.samples, f.grid, scheme)


def h1_norm_sq(f: Field, scheme: str | None = None) -> float:
    return l2_norm_sq(f) + dirichlet_energy(f, scheme)


def helmholtz_solve(values: np.ndarray, grid: Grid, scheme: str | None = None) -> np.ndarray:
    """Solve ``(1 - d^2/dx^2) y = values`` with the operator of :func:`second_derivative_values`."""
    scheme = scheme or default_scheme(grid)
    if scheme == "spectral":
        k = grid.wavenumbers()
        return _spectral_multiplier(values, 1.0 / (1.0 + k * k))
    from scipy.linalg import solve_banded, solve_circulant

    h2 = grid.dx * grid.dx
    if grid.periodic:
        col = np.zeros(grid.n)
        col[0] = 1.0 + 2.0 / h2
        col[1] = col[-1] = -1.0 / h2
        return solve_circulant(col, values)
    ab = np.empty((3, grid.n))
    ab[0] = -1.0 / h2
    ab[1] = 1.0 + 2.0 / h2
    ab[2] = -1.0 / h2
    return solve_banded((1, 1), ab, values)


def resample(f: RealField, factor: float, grid: Grid | None = None) -> RealField:
    """Dilate the argument: return ``g(x) = f(factor * x)``.

    Values are obtained by linear interpolation and are zero outside the
    original grid.  The target grid defaults to ``f.grid`` when
    ``factor >= 1``; for ``factor < 1`` the dilated function is wider, so the
    grid is extended (same spacing and centre) to cover it.
    """
    if not (np.isfinite(factor) and factor > 0):
        raise ConfigurationError(f"dilation factor must be finite and positive, got {factor}")
    src = f.grid
    if grid is None:
        grid = src
        if factor < 1:
            n = int(np.ceil(src.n / factor))
            if src.periodic:
                n = 1 << (n - 1).bit_length()
            n += (n - src.n) % 2
            grid = src.extended(n)
    xs = factor * grid.x
    g = np.interp(xs, src.x, f.samples, left=0.0, right=0.0)
    return RealField(grid, g)


def interpolate(f: Field, grid: Grid) -> Field:
    """Evaluate ``f`` on another grid; zero outside the source domain.

    Periodic sources use the trigonometric interpolant, closed grids a
    cubic spline.  Identical grids are copied exactly.
    """
    src = f.grid
    if grid == src:
        return type(f)(grid, f.samples)
    x = grid.x
    inside = (x >= src.x_min - 1e-12 * src.dx) & (x <= src.x_max + 1e-12 * src.dx)
    out = np.zeros(grid.n, dtype=f.samples.dtype)
    if src.periodic:
        ratio = (grid.x_min - src.x_min) / src.dx
        if abs(grid.dx - src.dx) < 1e-14 * src.dx and abs(ratio - round(ratio)) < 1e-9:
            idx = np.round((x - src.x_min) / src.dx).astype(int)
            out[inside] = f.samples[idx[inside]]
            return type(f)(grid, out)
        coeffs = np.fft.fft(f.samples) / src.n
        freq = np.fft.fftfreq(src.n, d=src.dx) * 2 * np.pi
        nyq = src.n // 2
        # split the Nyquist bin symmetrically so real data stays real
        weights = coeffs.copy()
        weights[nyq] = 0.5 * coeffs[nyq]
        xi = x[inside] - src.x_min
        vals = np.zeros(xi.size, dtype=np.complex128)
        for start in range(0, xi.size, 512):
            block = xi[start:start + 512]
            phase = np.exp(1j * np.outer(block, freq))
            vals[start:start + 512] = phase @ weights + 0.5 * coeffs[nyq] * np.exp(-1j * freq[nyq] * block)
        out[inside] = vals if np.iscomplexobj(out) else vals.real
        return type(f)(grid, out)
    spline = CubicSpline(src.x, f.samples)
    out[inside] = spline(x[inside])
    return type(f)(grid, out)
