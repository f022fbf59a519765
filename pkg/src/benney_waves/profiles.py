"""Direct construction of standing and travelling waves.

Standing waves (``c = 0``) solve ``phi'' = a phi^{p+1} + w phi - gamma^{-1/3} phi^{5/3}``
with ``psi = -(phi^2/gamma)^{1/3}``.  The first integral

    phi'^2 = h(phi) = 2a/(p+2) phi^{p+2} + w phi^2 - 3/4 gamma^{-1/3} phi^{8/3}

turns the profile into a quadrature ``x(phi) = int_phi^{phi0} h^{-1/2}``.
Writing ``h = phi^2 q(phi)`` isolates the part that vanishes at the peak.

Travelling waves (``c > 0``) are obtained by shooting on the scalar equation
``phi'' = c* phi + phi psi(phi) + a |phi|^p phi`` with ``psi`` the real root of
``gamma psi^3 + c psi + phi^2 = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicHermiteSpline

from .core import (
    Grid,
    RealField,
    default_scheme,
    derivative,
    integrate_values,
)
from .errors import ConfigurationError, DomainError
from .functionals import RESIDUAL_FLOOR, ModelParams, guarded_power
from .variational import WaveProfile

INFINITE = math.inf
P_MAX = 2.0 / 3.0
WINDOW_MESSAGE = "requires -1 < p <= 2/3, and gamma^(-1/3) > a when p = 2/3"

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def check_window(params: ModelParams) -> None:
    p = params.p
    if not (-1.0 < p <= P_MAX + 1e-15):
        raise DomainError(f"p = {p} outside the standing-wave window; {WINDOW_MESSAGE}")
    if abs(p - P_MAX) <= 1e-15 and not params.gamma ** (-1.0 / 3.0) > params.a:
        raise DomainError(f"p = 2/3 with gamma^(-1/3) <= a; {WINDOW_MESSAGE}")


@dataclass(frozen=True)
class StandingWaveSpec:
    params: ModelParams
    grid: Grid
    tail_floor: float | None = None  # default 1e-10 * phi0

    def __post_init__(self):
        check_window(self.params)
        if self.tail_floor is not None and not self.tail_floor > 0:
            raise ConfigurationError("tail_floor must be positive")


@dataclass(frozen=True)
class QuadratureReport:
    phi0: float
    x0: float  # math.inf when the support is the whole line
    first_integral_residual: float
    decay_rate: float | None = None

    @property
    def compact(self) -> bool:
        return math.isfinite(self.x0)


# -- first integral ------------------------------------------------------------

def _kappa(params: ModelParams) -> float:
    return 0.75 * params.gamma ** (-1.0 / 3.0)


def q_of_phi(phi, params: ModelParams):
    """``h(phi)/phi^2`` for ``phi > 0``."""
    phi = np.asarray(phi, dtype=float)
    p = params.p
    return (2 * params.a / (p + 2) * np.power(phi, p) + params.w
            - _kappa(params) * np.power(phi, 2.0 / 3.0))


def h_of_phi(phi, params: ModelParams):
    """``2a/(p+2) phi^{p+2} + w phi^2 - 3/4 gamma^{-1/3} phi^{8/3}``."""
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0):
        raise DomainError("h is defined for phi >= 0")
    p = params.p
    out = (2 * params.a / (p + 2) * guarded_power(phi, p + 2) + params.w * phi * phi
           - _kappa(params) * guarded_power(phi, 8.0 / 3.0))
    return out if out.ndim else float(out)


def g_of_phi(phi, params: ModelParams):
    """``-a phi^{p+1} - w phi + gamma^{-1/3} phi^{5/3}``."""
    phi = np.asarray(phi, dtype=float)
    out = (-params.a * guarded_power(phi, params.p + 1) - params.w * phi
           + params.gamma ** (-1.0 / 3.0) * guarded_power(phi, 5.0 / 3.0))
    return out if out.ndim else float(out)


def F_of_phi(phi, params: ModelParams):
    """Antiderivative of :func:`g_of_phi` vanishing at 0."""
    phi = np.asarray(phi, dtype=float)
    p = params.p
    out = (-params.a / (p + 2) * guarded_power(phi, p + 2) - 0.5 * params.w * phi * phi
           + 0.375 * params.gamma ** (-1.0 / 3.0) * guarded_power(phi, 8.0 / 3.0))
    return out if out.ndim else float(out)


def _bracket_first_root(fun, upper: float) -> tuple[float, float]:
    """``(lo, hi)`` with ``fun(lo) > 0 >= fun(hi)``, from an outward then inward scan."""
    hi = 1.0
    while fun(hi) > 0:
        hi *= 2.0
        if hi > upper:
            raise DomainError("no admissible phi0; check parameter window")
    lo = hi
    while fun(lo) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise DomainError("no admissible phi0; check parameter window")
    return lo, hi


def find_phi0(params: ModelParams, upper: float = 1e12) -> float:
    """Smallest positive root of ``h``, i.e. of ``q = h/phi^2``.

    ``q`` is strictly decreasing for ``p <= 0`` and increases then decreases
    for ``0 < p < 2/3``, starting from ``q(0+) > 0``; in both cases ``q > 0``
    below its only root, so the root of ``q`` is the first root of ``h``.
    """
    check_window(params)
    lo, hi = _bracket_first_root(lambda s: float(q_of_phi(s, params)), upper)
    phi0 = optimize.brentq(lambda s: float(q_of_phi(s, params)), lo, hi,
                           xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    if 0 <= params.p <= P_MAX:
        if not g_of_phi(phi0, params) > 0:
            raise DomainError("g(phi0) must be positive at the first root")
        if abs(F_of_phi(phi0, params)) > 1e-10 * max(1.0, phi0 * phi0 * params.w):
            raise DomainError("F does not vanish at the root of h")
    return float(phi0)


def phi0_from_F(params: ModelParams, upper: float = 1e12) -> float:
    """``inf{xi > 0 : F(xi) = 0}`` found on ``F`` directly (``F < 0`` below it)."""
    check_window(params)

    def neg_f_over_sq(s):
        return float(-F_of_phi(s, params)) / (s * s)

    lo, hi = _bracket_first_root(neg_f_over_sq, upper)
    return float(optimize.brentq(neg_f_over_sq, lo, hi, xtol=1e-300,
                                 rtol=4 * np.finfo(float).eps, maxiter=500))


def _power_diff(phi0: float, e: float, r):
    """``phi^e - phi0^e`` at ``phi = phi0 (1 - r)`` without cancellation."""
    return phi0 ** e * np.expm1(e * np.log1p(-r))


def _q_below_peak(s2, phi0: float, params: ModelParams):
    """``q(phi0 - s2)`` written as ``q(phi) - q(phi0)``."""
    r = np.asarray(s2, dtype=float) / phi0
    p = params.p
    out = -_kappa(params) * _power_diff(phi0, 2.0 / 3.0, r)
    if p != 0:
        out = out + 2 * params.a / (p + 2) * _power_diff(phi0, p, r)
    return out


# -- quadrature tables ---------------------------------------------------------

def _cumulative_gl(fun, t_edges: np.ndarray) -> np.ndarray:
    """Cumulative integral of ``fun`` over consecutive cells, 8-point Gauss."""
    a, b = t_edges[:-1], t_edges[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = fun(nodes)
    cells = half * (vals @ _GL_WEIGHTS)
    return np.concatenate(([0.0], np.cumsum(cells)))


def _upper_branch(phi0, phi_mid, params, cells):
    """``phi = phi0 - s^2`` on ``[phi_mid, phi0]``; returns ``(x, phi)`` with x from 0."""
    s_mid = math.sqrt(phi0 - phi_mid)
    s = np.linspace(0.0, s_mid, cells + 1)

    def integrand(s):
        phi = phi0 - s * s
        return 2 * s / (phi * np.sqrt(_q_below_peak(s * s, phi0, params)))

    return _cumulative_gl(integrand, s), phi0 - s * s


def _lower_branch_log(phi_mid, phi_end, params, cells):
    """``y = ln(phi)`` on ``[phi_end, phi_mid]`` (``p >= 0``); x measured from phi_mid."""
    y = np.linspace(math.log(phi_mid), math.log(phi_end), cells + 1)

    def integrand(y):
        return -1.0 / np.sqrt(q_of_phi(np.exp(y), params))

    return _cumulative_gl(integrand, y), np.exp(y)


def _lower_branch_power(phi_mid, params, cells):
    """``phi = t^m``, ``m = -2/p`` on ``[0, phi_mid]`` (``p < 0``); x measured from phi_mid."""
    p = params.p
    m = -2.0 / p
    t_mid = phi_mid ** (1.0 / m)
    t = np.linspace(t_mid, 0.0, cells + 1)
    c0 = 2 * params.a / (p + 2)

    def integrand(t):
        # t^2 q(t^m) = c0 + w t^2 - kappa t^{2 + 2m/3}
        tq = c0 + params.w * t * t - _kappa(params) * np.power(t, 2.0 + 2.0 * m / 3.0)
        return -m / np.sqrt(tq)

    return _cumulative_gl(integrand, t), np.power(t, m)


def _cells_for(length_estimate: float, spacing: float, minimum: int = 64) -> int:
    return max(minimum, int(math.ceil(length_estimate / spacing)))


def support_radius(params: ModelParams, method: str = "substitution",
                   cells: int = 4000) -> float:
    """``x0 = int_0^{phi0} h^{-1/2} dphi``; ``math.inf`` for ``p >= 0``.

    ``"substitution"`` removes both endpoint singularities by change of
    variables and integrates with composite Gauss rules.  ``"algebraic"``
    hands the endpoint behaviour ``phi^{-1-p/2} (phi0 - phi)^{-1/2}`` to an
    adaptive rule with algebraic weights (QUADPACK ``qaws``).
    """
    check_window(params)
    if params.p >= 0:
        return INFINITE
    phi0 = find_phi0(params)
    if method == "substitution":
        phi_mid = 0.5 * phi0
        xu, _ = _upper_branch(phi0, phi_mid, params, cells)
        xl, _ = _lower_branch_power(phi_mid, params, cells)
        return float(xu[-1] + xl[-1])
    if method == "algebraic":
        p = params.p

        c0 = 2 * params.a / (p + 2)
        dq0 = -2 / 3 * _kappa(params) * phi0 ** (-1 / 3) + c0 * p * phi0 ** (p - 1)

        def smooth(phi):
            # endpoint values are the limits of the weighted-out factor
            if phi <= 0.0:
                return math.sqrt(phi0 / c0)
            if phi >= phi0:
                return phi0 ** (p / 2) * math.sqrt(-1.0 / dq0)
            r = 1.0 - phi / phi0
            qd = _q_below_peak(phi0 * r, phi0, params) if r < 0.5 else q_of_phi(phi, params)
            return phi ** (p / 2) * math.sqrt(phi0 * r / qd)

        val, _ = integrate.quad(smooth, 0.0, phi0, weight="alg",
                                wvar=(-1.0 - p / 2, -0.5), epsabs=0.0,
                                epsrel=1e-13, limit=200)
        return float(val)
    raise ConfigurationError(f"unknown quadrature method {method!r}")


# -- standing wave -------------------------------------------------------------

def _orbit_table(params: ModelParams, phi0: float, floor: float, spacing: float = 1e-3):
    """Samples ``(x, phi)`` of the half orbit from the peak (x = 0) outward."""
    phi_mid = 0.5 * phi0
    qp = abs(float(-_kappa(params) * (2 / 3) * phi0 ** (-1 / 3)
                   + (2 * params.a * params.p / (params.p + 2) * phi0 ** (params.p - 1)
                      if params.p != 0 else 0.0)))
    # x(phi_mid) is about 2 s_mid / (phi0 sqrt|q'|)
    s_mid = math.sqrt(phi0 - phi_mid)
    n_up = _cells_for(2 * s_mid / (phi0 * math.sqrt(qp)), spacing)
    xu, phiu = _upper_branch(phi0, phi_mid, params, n_up)
    if params.p < 0:
        m = -2.0 / params.p
        c0 = 2 * params.a / (params.p + 2)
        n_lo = _cells_for(m * phi_mid ** (1 / m) / math.sqrt(c0), spacing)
        xl, phil = _lower_branch_power(phi_mid, params, n_lo)
    else:
        length = math.log(phi_mid / floor) / math.sqrt(float(q_of_phi(floor, params)))
        xl, phil = _lower_branch_log(phi_mid, floor, params, _cells_for(length, spacing))
    x = np.concatenate((xu, xu[-1] + xl[1:]))
    phi = np.concatenate((phiu, phil[1:]))
    return x, phi


def standing_wave(spec: StandingWaveSpec) -> tuple[WaveProfile, QuadratureReport]:
    """Even standing wave with peak ``phi0`` at ``x = 0`` sampled on ``spec.grid``."""
    params, grid = spec.params, spec.grid
    phi0 = find_phi0(params)
    floor = spec.tail_floor if spec.tail_floor is not None else 1e-10 * phi0
    x_tab, phi_tab = _orbit_table(params, phi0, floor)
    slope = -np.sqrt(np.maximum(h_of_phi(phi_tab, params), 0.0))
    spline = CubicHermiteSpline(x_tab, phi_tab, slope)
    x_end = float(x_tab[-1])

    ax = np.abs(grid.x)
    phi = np.zeros(grid.n)
    inside = ax <= x_end
    phi[inside] = spline(ax[inside])
    decay = None
    if params.p >= 0:
        # graft matching value and slope: phi'/phi = -sqrt(q(floor))
        decay = float(math.sqrt(q_of_phi(phi_tab[-1], params)))
        out = ~inside
        phi[out] = phi_tab[-1] * np.exp(-decay * (ax[out] - x_end))
        x0 = INFINITE
    else:
        x0 = x_end
    phi = np.clip(phi, 0.0, phi0)
    psi = -np.cbrt(phi * phi / params.gamma)
    profile = WaveProfile(grid, RealField(grid, phi), RealField(grid, psi), c=0.0,
                          cstar=params.w, w=params.w, params=params, provenance="standing")
    report = QuadratureReport(phi0, x0, first_integral_residual(profile, x0), decay)
    return profile, report


def _collar_mask(phi: np.ndarray, cells: int = 2) -> np.ndarray:
    """True away from the edges of the positive set (``cells`` nodes each side)."""
    edge = np.flatnonzero(np.diff((phi > 0).astype(np.int8)) != 0)
    mask = np.ones(phi.size, dtype=bool)
    for e in edge:
        mask[max(0, e - cells + 1): e + cells + 1] = False
    return mask


def first_integral_residual(profile: WaveProfile, x0: float = INFINITE,
                            scheme: str | None = None) -> float:
    """``max |phi'^2 - h(phi)|`` over the grid (support edges excluded when compact)."""
    phi = profile.phi.samples
    dphi = derivative(profile.phi, scheme).samples
    res = np.abs(dphi * dphi - h_of_phi(phi, profile.params))
    if math.isfinite(x0):
        res = res[_collar_mask(phi)]
    return float(res.max()) if res.size else 0.0


def tail_log_slope(profile: WaveProfile, lo: float, hi: float) -> float:
    """Least-squares slope of ``ln phi`` against ``|x|`` on ``lo <= x <= hi``."""
    x = profile.x
    sel = (x >= lo) & (x <= hi) & (profile.phi.samples > 0)
    if sel.sum() < 2:
        raise ConfigurationError("tail window holds fewer than two positive samples")
    return float(np.polyfit(x[sel], np.log(profile.phi.samples[sel]), 1)[0])


# -- travelling waves ----------------------------------------------------------

def psi_from_phi(phi, c: float, gamma: float):
    """Real root of ``gamma psi^3 + c psi + phi^2 = 0`` (it is <= 0).

    Newton from the left: both ``-(phi^2/gamma)^{1/3}`` and ``-phi^2/c`` lie
    below the root and the cubic is increasing and concave on ``psi <= 0``,
    so the iterates increase monotonically to the root.
    """
    phi = np.asarray(phi, dtype=float)
    scalar = phi.ndim == 0
    phi = np.atleast_1d(phi)
    f = phi * phi
    if not gamma > 0:
        raise ConfigurationError("gamma must be positive")
    if c < 0:
        raise ConfigurationError("c must be non-negative")
    psi = -np.cbrt(f / gamma)
    if c > 0:
        psi = np.maximum(psi, -f / c)
        tol = 1e-13 * np.maximum(1.0, f)
        for _ in range(100):
            res = gamma * psi * psi * psi + c * psi + f
            # non-finite entries cannot improve and do not hold up the rest
            if not np.any(np.abs(res) > tol):
                break
            step = res / (3 * gamma * psi * psi + c)
            psi = np.minimum(psi - step, 0.0)
    return float(psi[0]) if scalar else psi


def _shoot_rhs(params: ModelParams, c: float, cstar: float):
    p, a, gam = params.p, params.a, params.gamma

    def rhs(phi, dphi):
        psi = psi_from_phi(phi, c, gam)
        nl = a * np.sign(phi) * guarded_power(phi, p + 1)
        return dphi, cstar * phi + phi * psi + nl

    return rhs


def _integrate_family(amps: np.ndarray, rhs, h: float, steps: int, substeps: int,
                      tol: float):
    """RK4 for many initial amplitudes at once, tracking departure from the orbit.

    Returns the trajectories (steps+1, k) and a status per amplitude:
    +1 overshoot (phi < 0 with phi' < -tol), -1 undershoot (phi' > tol),
    0 reached the end.
    """
    k = amps.size
    phi = amps.astype(float).copy()
    dphi = np.zeros(k)
    traj = np.empty((steps + 1, k))
    traj[0] = phi
    status = np.zeros(k, dtype=int)
    alive = np.ones(k, dtype=bool)
    hs = h / substeps
    with np.errstate(over="ignore", invalid="ignore"):
        _rk4_loop(phi, dphi, traj, status, alive, rhs, hs, steps, substeps, tol)
    return traj, status


def _rk4_loop(phi, dphi, traj, status, alive, rhs, hs, steps, substeps, tol):
    for j in range(1, steps + 1):
        for _ in range(substeps):
            k1p, k1d = rhs(phi, dphi)
            k2p, k2d = rhs(phi + 0.5 * hs * k1p, dphi + 0.5 * hs * k1d)
            k3p, k3d = rhs(phi + 0.5 * hs * k2p, dphi + 0.5 * hs * k2d)
            k4p, k4d = rhs(phi + hs * k3p, dphi + hs * k3d)
            phi = np.where(alive, phi + hs / 6 * (k1p + 2 * k2p + 2 * k3p + k4p), phi)
            dphi = np.where(alive, dphi + hs / 6 * (k1d + 2 * k2d + 2 * k3d + k4d), dphi)
        over = alive & (phi < 0) & (dphi < -tol)
        # a non-finite orbit has run away upward
        under = alive & ((dphi > tol) | ~np.isfinite(phi) | ~np.isfinite(dphi))
        status[over] = 1
        status[under] = -1
        alive &= ~(over | under)
        traj[j] = phi
        if not alive.any():
            traj[j + 1:] = phi
            break


def shoot_traveling(params: ModelParams, c: float, cstar: float, grid: Grid,
                    bracket: tuple[float, float] | None = None, substeps: int = 4,
                    width: int = 64) -> WaveProfile:
    """Even homoclinic profile of ``phi'' = c* phi + phi psi(phi) + a|phi|^p phi``.

    Shoots on ``phi(0)`` with ``phi'(0) = 0``, refining a bracket of
    undershooting and overshooting amplitudes with ``width`` trial values per
    round.  Where the two bracketing orbits separate the solution is
    continued by an exponential (or by 0 once ``phi`` reaches 0).
    """
    if not cstar > 0:
        raise ConfigurationError("cstar must be positive")
    if c < 0:
        raise ConfigurationError("c must be non-negative")
    if c > 0 and params.p < 0:
        raise DomainError("travelling profiles with c > 0 need p >= 0")
    i0 = int(np.argmin(np.abs(grid.x)))
    if abs(grid.x[i0]) > 1e-12 * grid.dx:
        raise ConfigurationError("grid must contain the node x = 0")
    steps = grid.n - 1 - i0
    h = grid.dx
    rhs = _shoot_rhs(params, c, cstar)
    tol = 1e-12

    def classify(amps):
        return _integrate_family(np.asarray(amps, dtype=float), rhs, h, steps, substeps, tol)

    fail = f"no homoclinic profile found for (c, c*) = ({c}, {cstar}) on bracket"
    if bracket is None:
        # small amplitudes undershoot; the first overshoot above one brackets the orbit
        amps = np.logspace(-6, 6, 97)
        _, st = classify(amps)
        pairs = np.flatnonzero((st[:-1] == -1) & (st[1:] == 1))
        if pairs.size == 0:
            raise DomainError(fail)
        lo, hi = amps[pairs[0]], amps[pairs[0] + 1]
    else:
        lo, hi = bracket
        _, st = classify([lo, hi])
        if not (st[0] == -1 and st[1] == 1):
            raise DomainError(fail)

    traj_lo = traj_hi = None
    for _ in range(40):
        amps = np.linspace(lo, hi, width + 2)
        traj, st = classify(amps)
        over = np.flatnonzero(st == 1)
        under = np.flatnonzero(st == -1)
        if over.size == 0 or under.size == 0:
            break
        j_hi = over[0]
        j_lo = under[under < j_hi][-1] if np.any(under < j_hi) else None
        if j_lo is None:
            break
        shrunk = amps[j_hi] - amps[j_lo] < 0.5 * (hi - lo)
        lo, hi = amps[j_lo], amps[j_hi]
        traj_lo, traj_hi = traj[:, j_lo], traj[:, j_hi]
        if not shrunk or hi - lo <= 4 * np.finfo(float).eps * hi:
            break
    if traj_lo is None:
        traj, _ = classify([lo, hi])
        traj_lo, traj_hi = traj[:, 0], traj[:, 1]

    mean = 0.5 * (traj_lo + traj_hi)
    spread = np.abs(traj_hi - traj_lo)
    bad = np.flatnonzero((spread > 1e-3 * np.abs(mean)) | (mean <= 0))
    cut = int(bad[0]) - 1 if bad.size else steps
    half = mean.copy()
    if cut < steps:
        if mean[cut + 1] <= 0 or params.p < 0:
            half[cut + 1:] = 0.0
        else:
            rate = max(math.log(mean[cut - 1] / mean[cut]) / h, 0.0) if cut >= 1 else 0.0
            half[cut + 1:] = mean[cut] * np.exp(-rate * h * np.arange(1, steps - cut + 1))
    full = np.zeros(grid.n)
    full[i0:] = half
    left = np.arange(i0)
    mirror = 2 * i0 - left
    ok = mirror < grid.n
    full[left[ok]] = half[mirror[ok] - i0]
    full[left[~ok]] = 0.0 if params.p < 0 else half[-1]
    full = np.maximum(full, 0.0)
    psi = psi_from_phi(full, c, params.gamma)
    w = cstar + c * c / 4
    return WaveProfile(grid, RealField(grid, full), RealField(grid, psi), c=float(c),
                       cstar=float(cstar), w=float(w), params=params, provenance="shoot")


# -- verification --------------------------------------------------------------

def check_profile(profile: WaveProfile, scheme: str | None = None,
                  collar: int = 2) -> tuple[float, float, float]:
    """Normalised ``L^2`` residuals of the stationary system.

    1. ``-phi'' + c* phi + phi psi + a|phi|^p phi`` over ``||phi''|| + ||c* phi||``;
    2. ``gamma psi^3 + c psi + phi^2`` over ``||phi^2||``;
    3. ``psi'(c + 3 gamma psi^2) + 2 phi phi'`` over ``||2 phi phi'||``.

    For ``p < 0`` the support edges (``collar`` nodes) are left out.
    """
    grid = profile.grid
    scheme = scheme or default_scheme(grid)
    par = profile.params
    phi, psi = profile.phi.samples, profile.psi.samples
    c, cstar = profile.c, profile.cstar
    dphi = derivative(profile.phi, scheme).samples
    d2phi = derivative(derivative(profile.phi, scheme), scheme).samples
    dpsi = derivative(profile.psi, scheme).samples
    mask = _collar_mask(phi, collar) if par.p < 0 else np.ones(grid.n, dtype=bool)

    def norm(y):
        return math.sqrt(float(integrate_values(np.where(mask, y * y, 0.0), grid)))

    nl = par.a * np.sign(phi) * guarded_power(phi, par.p + 1)
    r1 = -d2phi + cstar * phi + phi * psi + nl
    r2 = par.gamma * psi * psi * psi + c * psi + phi * phi
    r3 = dpsi * (c + 3 * par.gamma * psi * psi) + 2 * phi * dphi
    return (
        norm(r1) / (norm(d2phi) + norm(cstar * phi) + RESIDUAL_FLOOR),
        norm(r2) / (norm(phi * phi) + RESIDUAL_FLOOR),
        norm(r3) / (norm(2 * phi * dphi) + RESIDUAL_FLOOR),
    )
