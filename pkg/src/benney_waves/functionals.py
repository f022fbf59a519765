"""Energy functional, constraint, multiplier and Euler-Lagrange residuals.

The minimisation problem is

    tau(u, v) = 2a/(p+2) int |u|^{p+2} + int v u^2 + gamma/4 int v^4,
    N_d(u, v) = ||u||_2^2 + ||u'||_2^2 + d ||v||_2^2 = mu,

with the cubic long-wave flux ``f(v) = -gamma v^3``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Grid,
    RealField,
    default_scheme,
    dirichlet_energy_values,
    integrate_values,
    second_derivative_values,
)
from .errors import ConfigurationError

RESIDUAL_FLOOR = 1e-30


@dataclass(frozen=True)
class ModelParams:
    """Physical constants: ``p`` (nonlinearity exponent), ``a`` (short-wave
    self interaction), ``gamma`` (cubic flux), ``w`` (frequency)."""

    p: float
    a: float = 1.0
    gamma: float = 1.0
    w: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigurationError(f"a must be positive, got {self.a}")
        if not self.gamma > 0:
            raise ConfigurationError(f"gamma must be positive, got {self.gamma}")
        if not self.p > -1:
            raise ConfigurationError(f"p must exceed -1, got {self.p}")
        if not self.w > 0:
            raise ConfigurationError(f"w must be positive, got {self.w}")

    def flux(self, v):
        return -self.gamma * v * v * v


@dataclass(frozen=True)
class ConstraintSpec:
    mu: float
    alpha: float = 0.0
    d: float | None = None

    def __post_init__(self):
        if not self.mu > 0:
            raise ConfigurationError(f"mu must be positive, got {self.mu}")
        if self.d is None:
            object.__setattr__(self, "d", float(self.mu ** self.alpha))
        if not self.d > 0:
            raise ConfigurationError(f"d must be positive, got {self.d}")


@dataclass(frozen=True)
class TrialPair:
    u: RealField
    v: RealField

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ConfigurationError("u and v must share a grid")

    @property
    def grid(self) -> Grid:
        return self.u.grid

    @classmethod
    def from_arrays(cls, grid: Grid, u, v) -> "TrialPair":
        return cls(RealField(grid, u), RealField(grid, v))

    def scaled(self, s: float) -> "TrialPair":
        return TrialPair.from_arrays(self.grid, s * self.u.samples, s * self.v.samples)


def guarded_power(x, exponent: float):
    """``|x|**exponent`` evaluated as ``exp(exponent*log|x|)`` with value 0 at 0.

    Only meant for ``exponent > 0``.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(ax)
    nz = ax > 0
    out[nz] = np.exp(exponent * np.log(ax[nz]))
    return out


def trial_pair(grid: Grid, spec: ConstraintSpec, amplitude: float = 1.0) -> TrialPair:
    """``u = B/(1+x^2)``, ``v = -u/sqrt(d)``."""
    u = amplitude / (1.0 + grid.x ** 2)
    return TrialPair.from_arrays(grid, u, -u / np.sqrt(spec.d))


def tau_terms(pair: TrialPair, params: ModelParams) -> tuple[float, float, float]:
    """The three integrals ``int |u|^{p+2}``, ``int v u^2``, ``int v^4``."""
    g = pair.grid
    u, v = pair.u.samples, pair.v.samples
    return (
        float(integrate_values(guarded_power(u, params.p + 2), g)),
        float(integrate_values(v * u * u, g)),
        float(integrate_values(v ** 4, g)),
    )


def tau(pair: TrialPair, params: ModelParams) -> float:
    up, vu2, v4 = tau_terms(pair, params)
    return 2 * params.a / (params.p + 2) * up + vu2 + 0.25 * params.gamma * v4


def constraint_parts(pair: TrialPair, scheme: str | None = None) -> tuple[float, float, float]:
    """``||u||_2^2``, ``||u'||_2^2``, ``||v||_2^2``."""
    g = pair.grid
    u, v = pair.u.samples, pair.v.samples
    return (
        float(integrate_values(u * u, g)),
        dirichlet_energy_values(u, g, scheme),
        float(integrate_values(v * v, g)),
    )


def constraint_norm(pair: TrialPair, spec: ConstraintSpec, scheme: str | None = None) -> float:
    uu, du, vv = constraint_parts(pair, scheme)
    return uu + du + spec.d * vv


def tau_gradient(pair: TrialPair, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """``L^2`` gradient of tau: ``(2a|u|^p u + 2uv, u^2 + gamma v^3)``."""
    u, v = pair.u.samples, pair.v.samples
    gu = 2 * params.a * np.sign(u) * guarded_power(u, params.p + 1) + 2 * u * v
    gv = u * u + params.gamma * v * v * v
    return gu, gv


def constraint_gradient(pair: TrialPair, spec: ConstraintSpec,
                        scheme: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``L^2`` gradient of N_d: ``(2u - 2u'', 2 d v)``."""
    u, v = pair.u.samples, pair.v.samples
    return 2 * (u - second_derivative_values(u, pair.grid, scheme)), 2 * spec.d * v


def lagrange_multiplier(pair: TrialPair, params: ModelParams, spec: ConstraintSpec,
                        scheme: str | None = None) -> float:
    """Multiplier from testing the Euler-Lagrange system against ``(u, v)``.

    ``2 lambda N_d(u, v) = 3 int u^2 v + 2a int |u|^{p+2} + gamma int v^4``;
    on the constraint sphere ``N_d = mu``.
    """
    up, vu2, v4 = tau_terms(pair, params)
    n = constraint_norm(pair, spec, scheme)
    if n == 0:
        return 0.0
    return (3 * vu2 + 2 * params.a * up + params.gamma * v4) / (2 * n)


def rayleigh_multiplier(pair: TrialPair, params: ModelParams, spec: ConstraintSpec,
                        scheme: str | None = None) -> float:
    """Least-squares multiplier ``<grad tau, grad N> / <grad N, grad N>``."""
    g = pair.grid
    tu, tv = tau_gradient(pair, params)
    nu, nv = constraint_gradient(pair, spec, scheme)
    num = integrate_values(tu * nu + tv * nv, g)
    den = integrate_values(nu * nu + nv * nv, g)
    return float(num / den) if den > 0 else 0.0


def el_residual(pair: TrialPair, lam: float, params: ModelParams, spec: ConstraintSpec,
                scheme: str | None = None) -> tuple[float, float]:
    """Relative ``L^2`` residuals of the Euler-Lagrange system.

    ``R1 = lam u'' - lam u + u v + a |u|^p u`` and
    ``R2 = -2 d lam v + u^2 + gamma v^3``, each divided by the norm of its
    left-hand side (``lam u'' - lam u`` and ``-2 d lam v``).
    """
    g = pair.grid
    u, v = pair.u.samples, pair.v.samples
    lhs1 = lam * second_derivative_values(u, g, scheme) - lam * u
    r1 = lhs1 + u * v + params.a * np.sign(u) * guarded_power(u, params.p + 1)
    lhs2 = -2 * spec.d * lam * v
    r2 = lhs2 + u * u + params.gamma * v * v * v

    def norm(y):
        return np.sqrt(integrate_values(y * y, g))

    return float(norm(r1) / (norm(lhs1) + RESIDUAL_FLOOR)), float(norm(r2) / (norm(lhs2) + RESIDUAL_FLOOR))


def ground_state_q(x):
    """``Q = sqrt(2) sech(x)``, the positive solution of ``Q'' + Q^3 = Q``."""
    return np.sqrt(2.0) / np.cosh(x)


def gn_quotient(values: np.ndarray, grid: Grid, scheme: str | None = None) -> float:
    """``||f||_4^4 / (||f'||_2 ||f||_2^3)``."""
    l4 = integrate_values(values ** 4, grid)
    l2 = integrate_values(values ** 2, grid)
    d2 = dirichlet_energy_values(values, grid, scheme or default_scheme(grid))
    return float(l4 / (np.sqrt(d2) * l2 ** 1.5))


def gn_constant_check(grid: Grid | None = None, scale: float = 1.0) -> float:
    """Gagliardo-Nirenberg quotient of ``scale * Q``; the sharp constant is ``1/sqrt(3)``."""
    grid = grid or Grid.centered(40.0, 4096)
    return gn_quotient(scale * ground_state_q(grid.x), grid)
