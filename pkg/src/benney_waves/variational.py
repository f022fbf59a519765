"""Constrained minimisation of tau on the sphere ``N_d = mu`` and the
rescaling of minimisers into travelling solitary waves.

Descent runs in the metric induced by ``N_d`` itself (``H^1`` for ``u``,
``d L^2`` for ``v``), so the constraint is the squared norm, projection is a
scalar renormalisation and the multiplier is read off the gradient.
"""

from __future__ import annotations

import logging
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats

from .core import (
    Grid,
    RealField,
    default_scheme,
    dirichlet_energy_values,
    helmholtz_solve,
    integrate_values,
    second_derivative_values,
    l2_norm_sq,
    dirichlet_energy,
    resample,
)
from .errors import DomainError, NumericalFailure, WavesError
from .functionals import (
    RESIDUAL_FLOOR,
    ConstraintSpec,
    ModelParams,
    TrialPair,
    constraint_norm,
    el_residual,
    guarded_power,
    lagrange_multiplier,
    rayleigh_multiplier,
    tau,
    tau_gradient,
    trial_pair,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinimizeConfig:
    max_iters: int = 20000
    step_size: float = 1.0
    rearrange_every: int = 100
    grad_tol: float | None = None  # default 1e-8 * max(1, |tau|)
    stall_tol: float = 1e-15
    seed: int = 0
    init_noise: float = 0.0
    newton_polish: bool = True
    polish_switch: float = 1e-3  # relative gradient norm that triggers polishing
    polish_max_n: int = 4096

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.step_size <= 0 or self.stall_tol <= 0:
            raise ValueError("step_size and stall_tol must be positive")
        if self.grad_tol is not None and self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")
        if self.rearrange_every < 1:
            raise ValueError("rearrange_every must be >= 1")


@dataclass
class MinimizeResult:
    pair: TrialPair
    tau_value: float
    lam: float
    iterations: int
    grad_norm: float
    converged: bool
    lam_rayleigh: float = float("nan")
    history: list = field(default_factory=list, repr=False)


@dataclass
class WaveProfile:
    """Solitary wave ``(phi, psi)`` with speed ``c`` and ``cstar = w - c^2/4``."""

    grid: Grid
    phi: RealField
    psi: RealField
    c: float
    cstar: float
    w: float
    params: ModelParams
    lam: float | None = None
    mu: float | None = None
    d: float | None = None
    provenance: str = "minimize"

    @property
    def x(self):
        return self.grid.x


# -- metric helpers ---------------------------------------------------------

def _m_inner(a_u, a_v, b_u, b_v, grid, d, scheme):
    """Inner product whose square norm is N_d."""
    val = integrate_values(a_u * b_u, grid) + d * integrate_values(a_v * b_v, grid)
    if scheme == "spectral":
        k = grid.wavenumbers()
        fa, fb = np.fft.rfft(a_u), np.fft.rfft(b_u)
        kk = (k * k)[: grid.n // 2 + 1]
        w = np.full(kk.size, 2.0)
        w[0] = 1.0
        if grid.n % 2 == 0:
            w[-1] = 1.0
        val += float(np.sum(w * kk * np.real(fa * np.conj(fb)))) * grid.dx / grid.n
    else:
        if grid.periodic:
            da, db = np.roll(a_u, -1) - a_u, np.roll(b_u, -1) - b_u
        else:
            da = np.diff(np.concatenate(([0.0], a_u, [0.0])))
            db = np.diff(np.concatenate(([0.0], b_u, [0.0])))
        val += float(np.sum(da * db)) / grid.dx
    return float(val)


def _project(u, v, grid, spec, scheme):
    u = np.maximum(u, 0.0)
    v = np.minimum(v, 0.0)
    n = (integrate_values(u * u, grid) + dirichlet_energy_values(u, grid, scheme)
         + spec.d * integrate_values(v * v, grid))
    if not n > 0:
        raise NumericalFailure("iterate collapsed to zero")
    s = math.sqrt(spec.mu / n)
    return u * s, v * s


# -- rearrangement ------------------------------------------------------------

def _placement_order(grid: Grid) -> np.ndarray:
    """Node indices ordered centre, right, left, right, left, ..."""
    n = grid.n
    c = int(np.argmin(np.abs(grid.x)))
    steps = np.arange(1, n + 1)
    offsets = np.concatenate(([0], np.column_stack((steps, -steps)).ravel()))
    idx = c + offsets
    if grid.periodic:
        idx = idx % n
        _, first = np.unique(idx, return_index=True)
        idx = idx[np.sort(first)]
    else:
        idx = idx[(idx >= 0) & (idx < n)]
    return idx[:n]


def rearrange(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Discrete Schwarz symmetrisation of ``|f|``: decreasing samples placed
    alternately right and left of the node closest to ``x = 0``."""
    order = _placement_order(grid)
    out = np.empty_like(f, dtype=float)
    out[order] = np.sort(np.abs(f))[::-1]
    return out


def _k_rescale(us, vs, k, p, grid):
    u_fac = k ** ((p + 2) / (4 * p))
    ut = k ** (1 / (4 * p)) * resample(RealField(grid, us), u_fac, grid).samples
    vt = k ** 0.25 * resample(RealField(grid, vs), k, grid).samples
    return ut, vt


def symmetrize(pair: TrialPair, spec: ConstraintSpec, params: ModelParams,
               scheme: str | None = None) -> TrialPair:
    """Rearranged pair ``(|u|*, -|v|*)`` put back on the constraint sphere.

    When rearrangement lowers ``N_d`` and ``p < 0`` or ``p > 2/3`` the
    dilation family ``k^{1/(4p)} u*(x k^{(p+2)/(4p)})``, ``k^{1/4} v*(kx)``
    restores the constraint (``k`` found by root finding); otherwise, or if
    that family cannot reach the sphere on this grid, a scalar rescaling is
    used.  The candidate with the lower ``tau`` is returned.
    """
    grid = pair.grid
    scheme = scheme or default_scheme(grid)
    us = rearrange(pair.u.samples, grid)
    vs = -rearrange(pair.v.samples, grid)
    star = TrialPair.from_arrays(grid, us, vs)
    n_star = constraint_norm(star, spec, scheme)
    mu = spec.mu
    if abs(n_star - mu) <= 1e-12 * mu:
        return star
    if n_star <= 0:
        raise NumericalFailure("rearranged pair vanished")
    candidates = [star.scaled(math.sqrt(mu / n_star))]
    p = params.p
    if n_star < mu and (p < 0 or p > 2 / 3):
        def gap(k):
            ut, vt = _k_rescale(us, vs, k, p, grid)
            return constraint_norm(TrialPair.from_arrays(grid, ut, vt), spec, scheme) - mu

        k_lo = 0.5
        while k_lo > 1e-6 and gap(k_lo) < 0:
            k_lo *= 0.5
        if gap(k_lo) >= 0:
            k = optimize.brentq(gap, k_lo, 1.0, xtol=1e-15, rtol=1e-15)
            ut, vt = _k_rescale(us, vs, k, p, grid)
            kp = TrialPair.from_arrays(grid, ut, vt)
            kn = constraint_norm(kp, spec, scheme)
            if kn > 0:
                candidates.append(kp.scaled(math.sqrt(mu / kn)))
    return min(candidates, key=lambda c: tau(c, params))


# -- Newton polishing ---------------------------------------------------------

def _operator_matrix(grid: Grid, scheme: str) -> np.ndarray:
    """Dense matrix of :func:`second_derivative_values`."""
    n = grid.n
    if grid.periodic:
        e = np.zeros(n)
        e[0] = 1.0
        col = second_derivative_values(e, grid, scheme)
        idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
        return col[idx]
    eye = np.eye(n)
    return np.column_stack([second_derivative_values(eye[:, j], grid, scheme) for j in range(n)])


def _reflection(grid: Grid) -> np.ndarray | None:
    """Index map ``j -> 2c - j`` about the node ``c`` nearest ``x = 0`` (periodic grids)."""
    if not grid.periodic:
        return None
    c = int(np.argmin(np.abs(grid.x)))
    return (2 * c - np.arange(grid.n)) % grid.n


def newton_polish(pair: TrialPair, lam: float, params: ModelParams, spec: ConstraintSpec,
                  scheme: str | None = None, max_iter: int = 40,
                  tol: float = 1e-11) -> tuple[TrialPair, float] | None:
    """Damped Newton iteration on the full Euler-Lagrange system plus constraint.

    Unknowns are ``(u, v, lambda)``; ``v`` is eliminated through its diagonal
    block ``-2 d lambda + 3 gamma v^2``, leaving a dense ``(n+1)`` system.  For
    ``p < 0`` the iteration runs in ``s`` with ``u = sign(s)|s|^{1/(p+1)}``,
    which makes ``|u|^p u = s`` linear and keeps the Jacobian bounded where
    ``u`` vanishes.  Even input stays even: the steps are projected onto even
    functions, which removes the near-null translation direction.  Returns
    ``None`` when the residual is not reduced.
    """
    grid = pair.grid
    scheme = scheme or default_scheme(grid)
    n = grid.n
    a, p, gam, d, mu = params.a, params.p, params.gamma, spec.d, spec.mu
    r = 1.0 / (p + 1.0) if p < 0 else 1.0
    D2 = _operator_matrix(grid, scheme)
    wq = np.full(n, grid.dx)
    if not grid.periodic:
        wq[0] = wq[-1] = 0.5 * grid.dx
    u0 = pair.u.samples.astype(float)
    s = np.sign(u0) * np.abs(u0) ** (1.0 / r)
    v = pair.v.samples.astype(float).copy()
    refl = _reflection(grid)
    if refl is not None and np.max(np.abs(u0 - u0[refl])) > 1e-8 * np.max(np.abs(u0)):
        refl = None

    def to_u(s):
        return np.sign(s) * np.abs(s) ** r if r != 1.0 else s

    def residual(s, v, lam):
        u = to_u(s)
        d2u = D2 @ u
        nl = s if r != 1.0 else np.sign(u) * guarded_power(u, p + 1)
        e1 = lam * (d2u - u) + u * v + a * nl
        e2 = -2 * d * lam * v + u * u + gam * v * v * v
        nd = float(np.sum(wq * u * u) - np.sum(wq * u * d2u) + d * np.sum(wq * v * v))
        return e1, e2, nd - mu, u, d2u

    def merit(e1, e2, e3):
        return math.sqrt(float(np.sum(wq * e1 * e1) + np.sum(wq * e2 * e2)) + (e3 / mu) ** 2)

    e1, e2, e3, u, d2u = residual(s, v, lam)
    m0 = m = merit(e1, e2, e3)
    scale = max(float(np.sqrt(np.sum(wq * (lam * (d2u - u)) ** 2))), RESIDUAL_FLOOR)
    eye = np.eye(n)
    short = 0
    for _ in range(max_iter):
        if m <= tol * scale or short >= 3:
            break
        beta = -2 * d * lam + 3 * gam * v * v
        if np.any(beta <= 0):
            return None
        if r != 1.0:
            dus = r * np.abs(s) ** (r - 1.0)
            nl_diag = np.full(n, a)
        else:
            dus = np.ones(n)
            nl_diag = a * (p + 1) * guarded_power(u, p)
        j11 = (lam * (D2 - eye)) * dus[None, :]
        j11[np.diag_indices(n)] += v * dus + nl_diag
        j13 = d2u - u
        j21 = 2 * u * dus
        j23 = -2 * d * v
        j31 = 2 * wq * (u - d2u) * dus
        j32 = 2 * d * wq * v
        mat = np.empty((n + 1, n + 1))
        mat[:n, :n] = j11
        mat[np.arange(n), np.arange(n)] -= u * j21 / beta
        mat[:n, n] = j13 - u * j23 / beta
        mat[n, :n] = j31 - j32 * j21 / beta
        mat[n, n] = -float(np.sum(j32 * j23 / beta))
        rhs = np.empty(n + 1)
        rhs[:n] = -e1 + u * e2 / beta
        rhs[n] = -e3 + float(np.sum(j32 * e2 / beta))
        try:
            sol = np.linalg.solve(mat, rhs)
        except np.linalg.LinAlgError:
            return None
        ds, dlam = sol[:n], sol[n]
        dv = -(e2 + j21 * ds + j23 * dlam) / beta
        if refl is not None:
            ds = 0.5 * (ds + ds[refl])
            dv = 0.5 * (dv + dv[refl])
        t = 1.0
        while t > 1e-4:
            cand = (s + t * ds, v + t * dv, lam + t * dlam)
            res = residual(*cand)
            mc = merit(*res[:3])
            if math.isfinite(mc) and mc < (1 - 1e-4 * t) * m:
                break
            t *= 0.5
        else:
            break
        s, v, lam = cand
        e1, e2, e3, u, d2u = res
        m = mc
        # repeated heavy damping means the roundoff floor has been reached
        short = short + 1 if t < 0.1 else 0
        log.debug("newton merit %.3e step %.3g", m, t)
    if not m < m0 or not lam < 0:
        return None
    return TrialPair.from_arrays(grid, to_u(s), v), float(lam)


# -- minimisation -------------------------------------------------------------

def initial_pair(grid: Grid, spec: ConstraintSpec, cfg: MinimizeConfig,
                 scheme: str | None = None) -> TrialPair:
    """Decaying trial pair ``B/(1+x^2)``, ``-u/sqrt(d)`` scaled onto the sphere."""
    scheme = scheme or default_scheme(grid)
    pair = trial_pair(grid, spec)
    u, v = pair.u.samples.copy(), pair.v.samples.copy()
    if cfg.init_noise > 0:
        rng = np.random.default_rng(cfg.seed)
        bump = np.exp(-grid.x ** 2)
        u *= 1 + cfg.init_noise * rng.standard_normal() * bump
        v *= 1 + cfg.init_noise * rng.standard_normal() * bump
    u, v = _project(u, v, grid, spec, scheme)
    return TrialPair.from_arrays(grid, u, v)


def minimize(params: ModelParams, spec: ConstraintSpec, grid: Grid,
             cfg: MinimizeConfig | None = None, initial: TrialPair | None = None,
             scheme: str | None = None) -> MinimizeResult:
    """Projected Sobolev-gradient descent with Barzilai-Borwein steps,
    Armijo backtracking and periodic rearrangement."""
    cfg = cfg or MinimizeConfig()
    scheme = scheme or default_scheme(grid)
    d, mu = spec.d, spec.mu
    pair = initial if initial is not None else initial_pair(grid, spec, cfg, scheme)
    u, v = _project(pair.u.samples.copy(), pair.v.samples.copy(), grid, spec, scheme)

    def evaluate(u, v):
        tp = TrialPair.from_arrays(grid, u, v)
        t = tau(tp, params)
        gu, gv = tau_gradient(tp, params)
        return tp, t, gu, gv

    polished = False

    def polish(tp):
        # Newton stage; the result re-enters on the constraint sphere
        if not cfg.newton_polish or grid.n > cfg.polish_max_n:
            return None
        lam0 = lagrange_multiplier(tp, params, spec, scheme)
        if not lam0 < 0:
            return None
        out = newton_polish(tp, lam0, params, spec, scheme)
        if out is None:
            return None
        # no clipping here: the critical point may carry roundoff-sized
        # negative samples at the support edge, and clipping them would
        # reintroduce an O(|u|^{p+1}) gradient for p < 0
        nu, nv = out[0].u.samples, out[0].v.samples
        sc = math.sqrt(spec.mu / constraint_norm(out[0], spec, scheme))
        return nu * sc, nv * sc

    def tangent(u, v, gu, gv):
        # metric gradient, then remove the radial part
        hu = helmholtz_solve(gu, grid, scheme)
        hv = gv / d
        radial = (integrate_values(gu * u, grid) + integrate_values(gv * v, grid)) / mu
        tu, tv = hu - radial * u, hv - radial * v
        return tu, tv, radial / 2.0

    tp, t, gu, gv = evaluate(u, v)
    tu, tv, lam_it = tangent(u, v, gu, gv)
    gnorm = math.sqrt(max(_m_inner(tu, tv, tu, tv, grid, d, scheme), 0.0))
    step = cfg.step_size
    prev = None
    history = []
    converged = False
    it = 0
    stall = 0
    tol = cfg.grad_tol
    for it in range(1, cfg.max_iters + 1):
        if not (math.isfinite(t) and math.isfinite(gnorm)):
            raise NumericalFailure(f"non-finite gradient at iteration {it}")
        g_tol = tol if tol is not None else 1e-8 * max(1.0, abs(t))
        if gnorm <= g_tol:
            converged = True
            it -= 1
            break
        if not polished and gnorm <= cfg.polish_switch * max(1.0, abs(t)):
            polished = True
            out = polish(tp)
            if out is not None:
                ptp, pt, pgu, pgv = evaluate(*out)
                ptu, ptv, _ = tangent(out[0], out[1], pgu, pgv)
                pg = math.sqrt(max(_m_inner(ptu, ptv, ptu, ptv, grid, d, scheme), 0.0))
                if pg < gnorm and pt <= t + 1e-9 * max(1.0, abs(t)):
                    u, v = out
                    tp, t, gu, gv, tu, tv, gnorm = ptp, pt, pgu, pgv, ptu, ptv, pg
                    prev = None
                    history.append((t, gnorm))
                    continue
        if prev is not None:
            su, sv = u - prev[0], v - prev[1]
            yu, yv = tu - prev[2], tv - prev[3]
            sy = _m_inner(su, sv, yu, yv, grid, d, scheme)
            ss = _m_inner(su, sv, su, sv, grid, d, scheme)
            step = ss / sy if sy > 0 else min(2 * step, 1e3 * cfg.step_size)
        accepted = False
        for _ in range(60):
            nu, nv = _project(u - step * tu, v - step * tv, grid, spec, scheme)
            ntp, nt, ngu, ngv = evaluate(nu, nv)
            if math.isfinite(nt) and nt <= t - 1e-4 * step * gnorm ** 2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            log.debug("line search failed at iteration %d", it)
            break
        prev = (u, v, tu, tv)
        dt = t - nt
        u, v, tp, t, gu, gv = nu, nv, ntp, nt, ngu, ngv
        if it % cfg.rearrange_every == 0:
            sym = symmetrize(tp, spec, params, scheme)
            ts = tau(sym, params)
            if ts <= t:
                u, v = sym.u.samples.copy(), sym.v.samples.copy()
                tp, t, gu, gv = evaluate(u, v)
                prev = None
        tu, tv, lam_it = tangent(u, v, gu, gv)
        gnorm = math.sqrt(max(_m_inner(tu, tv, tu, tv, grid, d, scheme), 0.0))
        history.append((t, gnorm))
        stall = stall + 1 if dt <= cfg.stall_tol * max(1.0, abs(t)) else 0
        if stall >= 50:
            break

    g_tol = tol if tol is not None else 1e-8 * max(1.0, abs(t))
    if not converged and gnorm > g_tol:
        out = polish(tp)
        if out is not None:
            ptp, pt, pgu, pgv = evaluate(*out)
            ptu, ptv, _ = tangent(out[0], out[1], pgu, pgv)
            pg = math.sqrt(max(_m_inner(ptu, ptv, ptu, ptv, grid, d, scheme), 0.0))
            if pg < gnorm and pt <= t + 1e-9 * max(1.0, abs(t)):
                tp, t, gnorm = ptp, pt, pg
        converged = gnorm <= g_tol

    # final rearrangement keeps the output centred and monotone; it is
    # kept only when it does not spoil a converged critical point
    sym = symmetrize(tp, spec, params, scheme)
    ts = tau(sym, params)
    if ts <= t:
        gu, gv = tau_gradient(sym, params)
        tu, tv, _ = tangent(sym.u.samples, sym.v.samples, gu, gv)
        gs = math.sqrt(max(_m_inner(tu, tv, tu, tv, grid, d, scheme), 0.0))
        if gs <= max(gnorm, g_tol) or ts < t - 1e-10 * max(1.0, abs(t)):
            tp, t, gnorm = sym, ts, gs
            converged = gnorm <= g_tol
    lam = lagrange_multiplier(tp, params, spec, scheme)
    lam_r = rayleigh_multiplier(tp, params, spec, scheme)
    return MinimizeResult(tp, t, lam, it, gnorm, converged, lam_r, history)


def wave_from_minimizer(result: MinimizeResult, params: ModelParams,
                        spec: ConstraintSpec) -> WaveProfile:
    """Dilate a minimiser by ``sqrt(-lambda)``: ``c* = -lambda``, ``c = -2 lambda d``.

    The profile lives on the dilated grid, whose nodes are the images of the
    minimiser's nodes, so the samples carry over without interpolation loss.
    """
    lam = result.lam
    if not lam < 0:
        raise DomainError(
            f"multiplier not negative (lambda={lam:.6g}); increase mu (p<0) or "
            "decrease mu (p>2/3)")
    s = math.sqrt(-lam)
    grid = result.pair.grid.dilated(s)
    phi = resample(result.pair.u, s, grid)
    psi = resample(result.pair.v, s, grid)
    c = -2 * lam * spec.d
    cstar = -lam
    return WaveProfile(grid, phi, psi, c, cstar, cstar + c * c / 4, params,
                       lam=lam, mu=spec.mu, d=spec.d, provenance="minimize")


def norm_identity(profile: WaveProfile) -> float:
    """``sqrt(-l)||phi||^2 + ||phi'||^2/sqrt(-l) + d sqrt(-l)||psi||^2``, equal to mu."""
    s = math.sqrt(-profile.lam)
    return (s * l2_norm_sq(profile.phi) + dirichlet_energy(profile.phi) / s
            + profile.d * s * l2_norm_sq(profile.psi))


# -- sweeps -------------------------------------------------------------------

SWEEP_COLUMNS = ("mu", "alpha", "d", "lambda", "c", "cstar", "tau", "h1_u", "l2_v",
                 "iterations", "el_residual_1", "el_residual_2", "converged")


@dataclass
class SweepRecord:
    mu: float
    alpha: float
    d: float
    lam: float
    c: float
    cstar: float
    tau: float
    h1_u: float
    l2_v: float
    iterations: int
    el_residual_1: float
    el_residual_2: float
    converged: bool
    error: str | None = None

    def row(self) -> list:
        return [self.mu, self.alpha, self.d, self.lam, self.c, self.cstar, self.tau,
                self.h1_u, self.l2_v, self.iterations, self.el_residual_1,
                self.el_residual_2, self.converged]


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    stderr: float
    ci95: tuple[float, float]
    n: int


def fit_loglog(x, y) -> SlopeFit:
    x, y = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    reg = stats.linregress(x, y)
    n = x.size
    half = stats.t.ppf(0.975, n - 2) * reg.stderr if n > 2 else float("inf")
    return SlopeFit(float(reg.slope), float(reg.intercept), float(reg.stderr),
                    (float(reg.slope - half), float(reg.slope + half)), n)


@dataclass
class SweepReport:
    records: list[SweepRecord]
    speed_fit: SlopeFit | None
    multiplier_fit: SlopeFit | None

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def _sweep_one(params, alpha, mu, grid, cfg):
    spec = ConstraintSpec(mu, alpha)
    try:
        res = minimize(params, spec, grid, cfg)
        r1, r2 = el_residual(res.pair, res.lam, params, spec)
        wave = wave_from_minimizer(res, params, spec)
        return SweepRecord(mu, alpha, spec.d, res.lam, wave.c, wave.cstar, res.tau_value,
                           l2_norm_sq(wave.phi) + dirichlet_energy(wave.phi),
                           l2_norm_sq(wave.psi), res.iterations, r1, r2, res.converged)
    except WavesError as exc:
        nan = float("nan")
        return SweepRecord(mu, alpha, spec.d, nan, nan, nan, nan, nan, nan, 0, nan, nan,
                           False, error=str(exc))


def sweep_threads() -> int:
    env = os.environ.get("WAVES_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def sweep(params: ModelParams, alpha: float, mu_values, grid: Grid,
          cfg: MinimizeConfig | None = None, threads: int | None = None) -> SweepReport:
    """Minimise for each mu and fit ``log c ~ log mu`` and ``log(-lambda) ~ log(mu/d)``."""
    cfg = cfg or MinimizeConfig()
    mus = [float(m) for m in mu_values]
    if any(m <= 0 for m in mus) or mus != sorted(mus):
        raise ValueError("mu_values must be positive and sorted")
    p = params.p
    if p < 0 and not (1 / 3 < alpha < 1):
        warnings.warn(f"alpha={alpha} outside (1/3, 1) for p<0", stacklevel=2)
    if p > 2 / 3 and not (1 - p < alpha < 1 / 3):
        warnings.warn(f"alpha={alpha} outside (1-p, 1/3) for p>2/3", stacklevel=2)
    threads = threads or sweep_threads()
    if threads > 1 and len(mus) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(mus))) as pool:
            records = list(pool.map(lambda m: _sweep_one(params, alpha, m, grid, cfg), mus))
    else:
        records = [_sweep_one(params, alpha, m, grid, cfg) for m in mus]
    ok = [r for r in records if r.converged and r.lam < 0]
    speed = mult = None
    if len(ok) >= 2:
        speed = fit_loglog([r.mu for r in ok], [r.c for r in ok])
        mult = fit_loglog([r.mu / r.d for r in ok], [-r.lam for r in ok])
    return SweepReport(records, speed, mult)
