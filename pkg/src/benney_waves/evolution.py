"""Time integration of the full system and of its linearisation about a wave.

Full system on a periodic grid::

    i u_t + u_xx = a |u|^p u + u v,
    v_t + (-gamma v^3 - |u|^2)_x = 0.

Linearisation about ``(e^{i c x/2} phi, psi)`` (coefficients frozen in the
moving frame ``X = x - c t``)::

    i u_t + u_xx = (w - c^2/2) u + a/2 (phi+eps)^p [(p+2) u + p e^{icX} conj(u)]
                   + e^{icX/2} phi v + psi u,
    v_t - 3 gamma (psi^2 v)_x = 2 Re(e^{-icX/2} phi u)_x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ComplexField, Grid, RealField, integrate_values, interpolate
from .errors import ConfigurationError, DomainError, NumericalFailure
from .functionals import ModelParams
from .variational import WaveProfile

PERTURBATION_MODES = 16
RK4_IMAG_LIMIT = 2.5  # below the 2*sqrt(2) stability edge of RK4 on the imaginary axis


@dataclass(frozen=True)
class FieldState:
    grid: Grid
    u: ComplexField
    v: RealField
    t: float = 0.0

    def __post_init__(self):
        if not self.grid.periodic:
            raise ConfigurationError("time integration needs a periodic grid")
        if self.u.grid != self.grid or self.v.grid != self.grid:
            raise ConfigurationError("u and v must live on the state grid")
        if self.t < 0:
            raise ConfigurationError("t must be non-negative")

    @classmethod
    def from_arrays(cls, grid: Grid, u, v, t: float = 0.0) -> "FieldState":
        return cls(grid, ComplexField(grid, u), RealField(grid, v), float(t))


@dataclass(frozen=True)
class SimConfig:
    dt: float
    t_end: float
    cfl: float = 0.5
    scheme_order: int = 2
    epsilon: float = 1e-6
    record_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError("dt must be positive")
        if not self.t_end >= 0:
            raise ConfigurationError("t_end must be non-negative")
        if not 0 < self.cfl <= 1:
            raise ConfigurationError("cfl must lie in (0, 1]")
        if self.scheme_order not in (1, 2):
            raise ConfigurationError("scheme_order is 1 (Lie) or 2 (Strang)")
        if self.epsilon < 0:
            raise ConfigurationError("epsilon must be non-negative")
        if self.record_every < 1:
            raise ConfigurationError("record_every must be >= 1")


@dataclass
class EnergyTrace:
    times: np.ndarray
    mass: np.ndarray
    v_total: np.ndarray
    lin_energy: np.ndarray | None = None
    shape_error: np.ndarray | None = None
    lag_estimate: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        for name in ("mass", "v_total", "lin_energy", "shape_error", "lag_estimate"):
            arr = getattr(self, name)
            if arr is not None and len(arr) != n:
                raise ConfigurationError(f"trace column {name} has wrong length")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ConfigurationError("trace times must increase strictly")

    @property
    def growth_factor(self) -> float:
        """``sup_t E(t)/E(0)`` of a linearised run."""
        e = self.lin_energy
        return float(np.max(e) / e[0])

    @property
    def rate(self) -> float:
        """Smallest ``K`` with ``E(t) <= e^{K t} E(0)`` on the recorded times."""
        e, t = self.lin_energy, self.times
        sel = t > 0
        if not sel.any():
            return 0.0
        return float(np.max(np.log(e[sel] / e[0]) / t[sel]))


# -- full system ----------------------------------------------------------------

def _abs_power(u: np.ndarray, p: float, eps: float) -> np.ndarray:
    m2 = (u.real * u.real + u.imag * u.imag)
    if p < 0:
        return np.power(m2 + eps * eps, 0.5 * p)
    if p == 0:
        return np.ones_like(m2)
    return np.power(m2, 0.5 * p)


def _dispersion(u: np.ndarray, grid: Grid, dt: float) -> np.ndarray:
    k = grid.wavenumbers()
    return np.fft.ifft(np.exp(-1j * k * k * dt) * np.fft.fft(u))


def _phase(u: np.ndarray, v: np.ndarray, params: ModelParams, eps: float, dt: float) -> np.ndarray:
    pot = params.a * _abs_power(u, params.p, eps) + v
    return u * np.exp(-1j * pot * dt)


def _mc_slopes(q: np.ndarray) -> np.ndarray:
    dm = q - np.roll(q, 1)
    dp = np.roll(q, -1) - q
    c = 0.5 * (dm + dp)
    same = (dm * dp) > 0
    mag = np.minimum(np.minimum(2 * np.abs(dm), 2 * np.abs(dp)), np.abs(c))
    return np.where(same, np.sign(c) * mag, 0.0)


def _equilibrium_v(rho: np.ndarray, gamma: float) -> np.ndarray:
    return -np.cbrt(rho / gamma)


def _hyperbolic_rate(v: np.ndarray, rho: np.ndarray, rho_l: np.ndarray, rho_r: np.ndarray,
                     veq_l: np.ndarray, veq_r: np.ndarray, gamma: float, dx: float) -> np.ndarray:
    """``-(F_{i+1/2} - F_{i-1/2})/dx`` for ``v_t + (-gamma v^3 - rho)_x = 0``.

    Rusanov flux with MUSCL (MC-limited) reconstruction of ``eta = v - v_eq(rho)``
    and ``rho``; the dissipation acts on ``eta``, so the balanced states
    ``-gamma v^3 = rho`` are exactly stationary.
    """
    eta = v - _equilibrium_v(rho, gamma)
    s_eta = _mc_slopes(eta)
    eta_l = eta + 0.5 * s_eta
    eta_r = np.roll(eta - 0.5 * s_eta, -1)
    v_l = eta_l + veq_l
    v_r = eta_r + veq_r
    g_l = -gamma * v_l * v_l * v_l - rho_l
    g_r = -gamma * v_r * v_r * v_r - rho_r
    speed = 3 * gamma * np.maximum(np.maximum(v_l * v_l, v_r * v_r),
                                   np.maximum(v * v, np.roll(v * v, -1)))
    flux = 0.5 * (g_l + g_r) - 0.5 * speed * (eta_r - eta_l)
    return -(flux - np.roll(flux, 1)) / dx


def max_wave_speed(v: np.ndarray, gamma: float) -> float:
    return float(3 * gamma * np.max(v * v)) if v.size else 0.0


def _conservation(v: np.ndarray, u: np.ndarray, params: ModelParams, grid: Grid,
                  dt: float, cfl: float) -> np.ndarray:
    """SSP-RK2 sub-cycles of the conservation law with ``|u|^2`` frozen."""
    gamma, dx = params.gamma, grid.dx
    rho = (u.real * u.real + u.imag * u.imag)
    s_rho = _mc_slopes(rho)
    rho_l = rho + 0.5 * s_rho
    rho_r = np.roll(rho - 0.5 * s_rho, -1)
    veq_l, veq_r = _equilibrium_v(rho_l, gamma), _equilibrium_v(rho_r, gamma)
    done = 0.0
    while done < dt:
        s = max(max_wave_speed(v, gamma), 1e-300)
        h = min(dt - done, cfl * dx / s)
        if h <= 1e-14 * dt:
            raise NumericalFailure("step size underflow in conservation substep (CFL)")
        v1 = v + h * _hyperbolic_rate(v, rho, rho_l, rho_r, veq_l, veq_r, gamma, dx)
        v = 0.5 * v + 0.5 * (v1 + h * _hyperbolic_rate(v1, rho, rho_l, rho_r, veq_l, veq_r, gamma, dx))
        done += h
    return v


def _guard(arr: np.ndarray, name: str) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise NumericalFailure(f"non-finite values after {name} substep")
    return arr


def cfl_step(state: FieldState, params: ModelParams, cfg: SimConfig) -> float:
    s = max_wave_speed(state.v.samples, params.gamma)
    return cfg.dt if s == 0 else min(cfg.dt, cfg.cfl * state.grid.dx / s)


def step_full(state: FieldState, params: ModelParams, cfg: SimConfig,
              dt: float | None = None) -> FieldState:
    """One Lie (A B C) or Strang (A/2 B/2 C B/2 A/2) step.

    A: exact dispersion in Fourier space; B: exact phase rotation by
    ``a|u|^p + v``; C: conservation law for ``v`` with ``|u|^2`` frozen.
    The step is ``dt`` (default ``cfg.dt``) reduced to the hyperbolic CFL bound.
    """
    grid = state.grid
    h = cfl_step(state, params, cfg) if dt is None else dt
    if not h > 1e-14 * max(1.0, cfg.t_end):
        raise NumericalFailure("step size underflow (CFL)")
    eps = cfg.epsilon if params.p < 0 else 0.0
    u = state.u.samples
    v = state.v.samples
    if cfg.scheme_order == 1:
        u = _guard(_dispersion(u, grid, h), "dispersion")
        u = _guard(_phase(u, v, params, eps, h), "phase")
        v = _guard(_conservation(v, u, params, grid, h, cfg.cfl), "conservation")
    else:
        u = _guard(_dispersion(u, grid, 0.5 * h), "dispersion")
        u = _guard(_phase(u, v, params, eps, 0.5 * h), "phase")
        v = _guard(_conservation(v, u, params, grid, h, cfg.cfl), "conservation")
        u = _guard(_phase(u, v, params, eps, 0.5 * h), "phase")
        u = _guard(_dispersion(u, grid, 0.5 * h), "dispersion")
    return FieldState.from_arrays(grid, u, v, state.t + h)


def _mass(u: np.ndarray, grid: Grid) -> float:
    return float(integrate_values(u.real * u.real + u.imag * u.imag, grid))


def shifted_profile(profile_phi: np.ndarray, grid: Grid, shift: float) -> np.ndarray:
    """``phi(x - shift)`` on a periodic grid by a Fourier phase shift."""
    k = grid.wavenumbers()
    return np.real(np.fft.ifft(np.fft.fft(profile_phi) * np.exp(-1j * k * shift)))


def correlation_lag(a: np.ndarray, b: np.ndarray, grid: Grid) -> float:
    """Shift ``s`` (multiple of dx, in ``[-L/2, L/2)``) maximising ``sum a(x) b(x - s)``."""
    corr = np.real(np.fft.ifft(np.fft.fft(a) * np.conj(np.fft.fft(b))))
    j = int(np.argmax(corr))
    if j >= grid.n // 2:
        j -= grid.n
    return j * grid.dx


def simulate_full(initial: FieldState, params: ModelParams, cfg: SimConfig,
                  reference: WaveProfile | None = None) -> tuple[FieldState, EnergyTrace]:
    """March to ``cfg.t_end``; with a reference wave also track shape error and lag."""
    grid = initial.grid
    ref_phi = None
    if reference is not None:
        ref_phi = reference.phi.samples if reference.grid == grid else \
            interpolate(reference.phi, grid).samples
    times, mass, vtot, shape, lag = [], [], [], [], []

    def record(st):
        times.append(st.t)
        mass.append(_mass(st.u.samples, grid))
        vtot.append(float(integrate_values(st.v.samples, grid)))
        if ref_phi is not None:
            amp = np.abs(st.u.samples)
            target = shifted_profile(ref_phi, grid, reference.c * st.t)
            shape.append(float(np.max(np.abs(amp - target))))
            lag.append(correlation_lag(amp, ref_phi, grid))

    state = initial
    record(state)
    count = 0
    while state.t < cfg.t_end * (1 - 1e-14):
        h = min(cfl_step(state, params, cfg), cfg.t_end - state.t)
        state = step_full(state, params, cfg, dt=h)
        count += 1
        if count % cfg.record_every == 0 or state.t >= cfg.t_end * (1 - 1e-14):
            record(state)
    trace = EnergyTrace(np.array(times), np.array(mass), np.array(vtot),
                        shape_error=np.array(shape) if ref_phi is not None else None,
                        lag_estimate=np.array(lag) if ref_phi is not None else None)
    return state, trace


def embed(profile: WaveProfile, grid: Grid, threshold: float = 1e-6) -> FieldState:
    """Initial data ``u = e^{i c x/2} phi``, ``v = psi`` on ``grid``.

    The support (``phi >= threshold * max phi``) must keep a margin of a
    quarter of the domain length to both ends.
    """
    if not grid.periodic:
        raise ConfigurationError("embedding needs a periodic grid")
    phi = profile.phi.samples
    peak = float(np.max(phi)) if phi.size else 0.0
    if peak > 0:
        xs = profile.x[phi >= threshold * peak]
        margin = 0.25 * grid.length
        if xs.min() < grid.x_min + margin or xs.max() > grid.x_max - margin:
            raise ConfigurationError(
                f"profile support [{xs.min():.4g}, {xs.max():.4g}] leaves less than L/4 margin "
                f"on [{grid.x_min:.4g}, {grid.x_max:.4g}]")
    if profile.grid == grid:
        ph, ps = phi, profile.psi.samples
    else:
        ph = interpolate(profile.phi, grid).samples
        ps = interpolate(profile.psi, grid).samples
    u = np.exp(0.5j * profile.c * grid.x) * ph
    return FieldState.from_arrays(grid, u, ps)


# -- linearised system -------------------------------------------------------

@dataclass(frozen=True)
class _Coefficients:
    pot: np.ndarray     # real potential multiplying u
    conj: np.ndarray    # complex multiplier of conj(u)
    couple: np.ndarray  # complex multiplier of v in the u-equation
    source: np.ndarray  # complex factor inside Re(.)_x of the v-equation
    adv: np.ndarray     # 3 gamma psi^2


def _frame_coefficients(profile: WaveProfile, params: ModelParams, eps: float,
                        t: float) -> _Coefficients:
    grid = profile.grid
    c = profile.c
    if c == 0:
        phi, psi, x = profile.phi.samples, profile.psi.samples, grid.x
    else:
        phi = shifted_profile(profile.phi.samples, grid, c * t)
        psi = shifted_profile(profile.psi.samples, grid, c * t)
        x = grid.x - c * t
    p, a = params.p, params.a
    base = np.power(phi + eps, p) if p != 0 else np.ones_like(phi)
    pot = (profile.w - 0.5 * c * c) + 0.5 * a * (p + 2) * base + psi
    conj = 0.5 * a * p * base * np.exp(1j * c * x)
    couple = np.exp(0.5j * c * x) * phi
    source = np.exp(-0.5j * c * x) * phi
    return _Coefficients(pot, conj, couple, source, 3 * params.gamma * psi * psi)


def _lin_rhs(u, v, co: _Coefficients, k):
    uh = np.fft.fft(u)
    u_xx = np.fft.ifft(-k * k * uh)
    # i u_t = -u_xx + pot u + conj ubar + couple v
    du = -1j * (-u_xx + co.pot * u + co.conj * np.conj(u) + co.couple * v)
    flux = co.adv * v + 2 * np.real(co.source * u)
    dv = np.real(np.fft.ifft(1j * k * np.fft.fft(flux)))
    return du, dv


def linear_step_limit(profile: WaveProfile, params: ModelParams, cfg: SimConfig) -> float:
    """Largest admissible step: ``cfl dx^2/pi`` capped by RK4 stability."""
    grid = profile.grid
    kmax = math.pi / grid.dx
    eps = cfg.epsilon if params.p < 0 else 0.0
    co = _frame_coefficients(profile, params, eps, 0.0)
    spectral_radius = (kmax * kmax + np.max(np.abs(co.pot)) + np.max(np.abs(co.conj))
                       + kmax * np.max(co.adv))
    return min(cfg.cfl * grid.dx ** 2 / math.pi, RK4_IMAG_LIMIT / spectral_radius)


def _check_linear_window(profile: WaveProfile, params: ModelParams, cfg: SimConfig):
    if params.p < 0:
        if profile.c != 0:
            raise DomainError("the linearised flow for p < 0 requires c=0 if -2/3<p<0")
        if not cfg.epsilon > 0:
            raise DomainError("the linearised flow for p < 0 needs epsilon > 0")
    if not profile.grid.periodic:
        raise ConfigurationError("the linearised flow needs a periodic grid")


def step_linearized(state: FieldState, profile: WaveProfile, params: ModelParams,
                    cfg: SimConfig, dt: float | None = None) -> FieldState:
    """One classical RK4 step of the linearised system (spectral in space)."""
    _check_linear_window(profile, params, cfg)
    grid = state.grid
    if grid != profile.grid:
        raise ConfigurationError("state and profile must share a grid")
    h = min(cfg.dt, linear_step_limit(profile, params, cfg)) if dt is None else dt
    eps = cfg.epsilon if params.p < 0 else 0.0
    k = grid.wavenumbers()
    t0 = state.t
    moving = profile.c != 0
    co0 = _frame_coefficients(profile, params, eps, t0)
    co_half = _frame_coefficients(profile, params, eps, t0 + 0.5 * h) if moving else co0
    co1 = _frame_coefficients(profile, params, eps, t0 + h) if moving else co0
    u, v = state.u.samples, state.v.samples
    k1u, k1v = _lin_rhs(u, v, co0, k)
    k2u, k2v = _lin_rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v, co_half, k)
    k3u, k3v = _lin_rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v, co_half, k)
    k4u, k4v = _lin_rhs(u + h * k3u, v + h * k3v, co1, k)
    un = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
    vn = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
    if not (np.all(np.isfinite(un)) and np.all(np.isfinite(vn))):
        raise NumericalFailure("non-finite values in linearised step")
    return FieldState.from_arrays(grid, un, vn, t0 + h)


def linear_energy(state: FieldState) -> float:
    """``||u||_{H^1}^2 + ||v||_2^2`` with a spectral derivative."""
    grid = state.grid
    u, v = state.u.samples, state.v.samples
    k = grid.wavenumbers()
    du2 = float(np.sum(k * k * np.abs(np.fft.fft(u)) ** 2)) * grid.dx / grid.n
    return float(integrate_values(np.abs(u) ** 2, grid)) + du2 + float(integrate_values(v * v, grid))


def perturbation(grid: Grid, seed: int, delta: float, modes: int = PERTURBATION_MODES) -> FieldState:
    """Band-limited random pair of ``H^1 x L^2`` size ``delta``."""
    if not delta > 0:
        raise ConfigurationError("delta must be positive")
    rng = np.random.default_rng(seed)
    n = grid.n
    uh = np.zeros(n, dtype=complex)
    vh = np.zeros(n, dtype=complex)
    idx = np.concatenate((np.arange(0, modes), np.arange(n - modes + 1, n)))
    uh[idx] = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    vh[idx] = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    u = np.fft.ifft(uh)
    v = np.real(np.fft.ifft(vh))
    st = FieldState.from_arrays(grid, u, v)
    s = delta / math.sqrt(linear_energy(st))
    return FieldState.from_arrays(grid, s * u, s * v)


def mass_rate(state: FieldState, profile: WaveProfile, params: ModelParams,
              cfg: SimConfig) -> float:
    """Right side of ``1/2 d/dt int |u|^2 = Im int (C conj(u)^2 + S conj(u) v)``
    for the implemented linearised equation (``C``: conjugate coefficient,
    ``S``: coupling coefficient)."""
    eps = cfg.epsilon if params.p < 0 else 0.0
    co = _frame_coefficients(profile, params, eps, state.t)
    u, v = state.u.samples, state.v.samples
    ub = np.conj(u)
    return float(np.imag(integrate_values(co.conj * ub * ub + co.couple * ub * v, state.grid)))


def linstab_run(profile: WaveProfile, params: ModelParams, cfg: SimConfig,
                perturbation_seed: int = 0, delta: float = 1e-2,
                initial: FieldState | None = None) -> EnergyTrace:
    """Integrate the linearised system from a seeded perturbation and record
    ``E(t) = ||u||_{H^1}^2 + ||v||_2^2`` and ``int |u|^2``."""
    _check_linear_window(profile, params, cfg)
    if params.p <= -2.0 / 3.0:
        raise DomainError("linearised stability is studied for p > -2/3")
    grid = profile.grid
    state = initial if initial is not None else perturbation(grid, perturbation_seed, delta)
    h_max = min(cfg.dt, linear_step_limit(profile, params, cfg))
    steps = max(1, int(math.ceil(cfg.t_end / h_max - 1e-9)))
    h = cfg.t_end / steps
    times, mass, vt, energy = [0.0], [_mass(state.u.samples, grid)], \
        [float(integrate_values(state.v.samples, grid))], [linear_energy(state)]
    for j in range(1, steps + 1):
        state = step_linearized(state, profile, params, cfg, dt=h)
        if j % cfg.record_every == 0 or j == steps:
            times.append(j * h)
            mass.append(_mass(state.u.samples, grid))
            vt.append(float(integrate_values(state.v.samples, grid)))
            energy.append(linear_energy(state))
    return EnergyTrace(np.array(times), np.array(mass), np.array(vt), np.array(energy),
                       meta={"dt": h, "steps": steps, "delta": delta, "seed": perturbation_seed})
