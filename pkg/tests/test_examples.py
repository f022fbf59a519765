"""Small worked examples per operation, with closed forms or brute-force oracles."""

import math

import numpy as np
import pytest
from scipy import integrate as sint, optimize

from benney_waves.core import Grid, RealField, derivative, integrate, resample
from benney_waves.evolution import (FieldState, SimConfig, embed, simulate_full, step_full,
                                    step_linearized)
from benney_waves.functionals import (ConstraintSpec, ModelParams, TrialPair, constraint_norm,
                                      el_residual, gn_constant_check, ground_state_q,
                                      lagrange_multiplier, tau, trial_pair)
from benney_waves.profiles import (StandingWaveSpec, check_profile, find_phi0,
                                   first_integral_residual, h_of_phi, psi_from_phi,
                                   standing_wave)
from benney_waves.variational import MinimizeResult, WaveProfile, minimize, symmetrize, \
    wave_from_minimizer


# -- core ----------------------------------------------------------------------

def test_derivative_examples():
    g = Grid.centered(10.0, 256)
    assert np.max(np.abs(derivative(RealField(g, np.full(g.n, 3.0))).samples)) < 1e-14
    L = 10.0
    f = RealField(g, np.sin(2 * math.pi * g.x / L))
    exact = 2 * math.pi / L * np.cos(2 * math.pi * g.x / L)
    assert np.max(np.abs(derivative(f).samples - exact)) < 1e-12
    g = Grid.centered(20.0, 1024)
    d = derivative(RealField(g, np.exp(-g.x ** 2))).samples
    assert np.max(np.abs(d + 2 * g.x * np.exp(-g.x ** 2))) < 1e-8


def test_integrate_examples():
    assert integrate(RealField(Grid.centered(10.0, 64), np.zeros(64))) == 0.0
    g = Grid.centered(800.0, 2 ** 17)
    val = integrate(RealField(g, (1 + g.x ** 2) ** -3.0))
    assert val == pytest.approx(3 * math.pi / 8, rel=1e-6)
    g = Grid.centered(80.0, 4096)
    assert integrate(RealField(g, 2 / np.cosh(g.x) ** 2)) == pytest.approx(4.0, abs=1e-10)


def test_resample_examples():
    g = Grid.centered(40.0, 4096)
    f = RealField(g, np.exp(-g.x ** 2))
    assert np.max(np.abs(resample(f, 1.0).samples - f.samples)) < 1e-14
    assert np.max(np.abs(resample(f, 2.0).samples - np.exp(-4 * g.x ** 2))) < 1e-6


# -- functionals ----------------------------------------------------------------

def test_zero_pair():
    g = Grid.centered(10.0, 64)
    z = TrialPair.from_arrays(g, np.zeros(64), np.zeros(64))
    params, spec = ModelParams(p=-0.5), ConstraintSpec(1.0, d=2.0)
    assert tau(z, params) == 0.0
    assert constraint_norm(z, spec) == 0.0
    assert el_residual(z, -0.7, params, spec) == (0.0, 0.0)


def test_sech_constraint_norm():
    g = Grid.centered(80.0, 4096)
    pair = TrialPair.from_arrays(g, ground_state_q(g.x), np.zeros(g.n))
    for d in (0.1, 7.0):
        assert constraint_norm(pair, ConstraintSpec(1.0, d=d)) == pytest.approx(16 / 3, abs=1e-8)


def test_multiplier_pure_v_on_unit_sphere():
    # u = 0, gamma = d = 1 and ||v||^2 = 1: lambda = ||v||_4^4 / 2
    g = Grid.centered(40.0, 1024)
    v = -np.exp(-g.x ** 2)
    v /= math.sqrt(np.sum(v * v) * g.dx)
    pair = TrialPair.from_arrays(g, np.zeros(g.n), v)
    V = float(np.sum(v ** 4) * g.dx)
    assert lagrange_multiplier(pair, ModelParams(p=0.0), ConstraintSpec(1.0, d=1.0)) == \
        pytest.approx(V / 2, rel=1e-13)


def test_tau_trial_pair_against_quadrature():
    g = Grid.centered(2000.0, 2 ** 18)
    spec = ConstraintSpec(1.0, d=1.0)
    params = ModelParams(p=-0.5, a=1.0, gamma=1.0)
    u = lambda x: 1 / (1 + x * x)
    q = lambda f: sint.quad(f, -np.inf, np.inf, epsabs=1e-13, limit=200)[0]
    oracle = (2 / 1.5 * q(lambda x: u(x) ** 1.5) - q(lambda x: u(x) ** 3)
              + 0.25 * q(lambda x: u(x) ** 4))
    # the u^{3/2} tail ~ |x|^{-3} leaves ~1e-6 outside |x| < 1000
    assert tau(trial_pair(g, spec), params) == pytest.approx(oracle, abs=3e-6)


def test_tau_sees_only_abs_u():
    g = Grid.centered(20.0, 256)
    u = np.exp(-g.x ** 2)
    v = -0.5 * u
    params = ModelParams(p=0.5)
    assert tau(TrialPair.from_arrays(g, -u, v), params) == tau(TrialPair.from_arrays(g, u, v), params)


def test_residual_grows_off_solution():
    params, spec = ModelParams(p=-0.5), ConstraintSpec(100.0, 0.5)
    g = Grid.centered(40.0, 512)
    res = minimize(params, spec, g)
    base = max(el_residual(res.pair, res.lam, params, spec))
    bump = 0.1 * np.exp(-(g.x - 0.5) ** 2)
    off = TrialPair.from_arrays(g, res.pair.u.samples + bump, res.pair.v.samples)
    assert min(el_residual(off, res.lam, params, spec)) > base
    assert base < 1e-5


def test_gn_halved_resolution():
    assert gn_constant_check(Grid.centered(40.0, 2048)) == pytest.approx(1 / math.sqrt(3), abs=1e-4)


# -- variational ------------------------------------------------------------------

def test_symmetrize_fixed_point():
    g = Grid.centered(40.0, 512)
    spec = ConstraintSpec(10.0, 0.5)
    u = np.exp(-g.x ** 2 / 3)
    v = -0.5 * np.exp(-g.x ** 2 / 2)
    pair = TrialPair.from_arrays(g, u, v).scaled(
        math.sqrt(10.0 / constraint_norm(TrialPair.from_arrays(g, u, v), spec)))
    out = symmetrize(pair, spec, ModelParams(p=0.5))
    assert np.max(np.abs(out.u.samples - pair.u.samples)) < 1e-12
    assert np.max(np.abs(out.v.samples - pair.v.samples)) < 1e-12


def test_unit_dilation():
    g = Grid.centered(20.0, 256)
    pair = TrialPair.from_arrays(g, np.exp(-g.x ** 2), -np.exp(-g.x ** 2))
    spec = ConstraintSpec(1.0, d=3.0)
    res = MinimizeResult(pair, -1.0, -1.0, 1, 0.0, True, -1.0)
    wave = wave_from_minimizer(res, ModelParams(p=0.5), spec)
    assert np.max(np.abs(wave.phi.samples - pair.u.samples)) < 1e-14
    assert np.max(np.abs(wave.psi.samples - pair.v.samples)) < 1e-14
    assert wave.c == pytest.approx(6.0) and wave.cstar == pytest.approx(1.0)


# -- profiles -------------------------------------------------------------------

def test_peak_negative_p_against_bisection_and_sampling():
    params = ModelParams(p=-0.5)
    phi0 = find_phi0(params)
    oracle = optimize.bisect(lambda t: h_of_phi(t, params), 0.5, 20.0, xtol=1e-14)
    assert phi0 == pytest.approx(oracle, abs=1e-12)
    inner = np.linspace(0, phi0, 10002)[1:-1]
    assert np.all(h_of_phi(inner, params) > 0)


def test_psi_examples():
    assert psi_from_phi(0.0, 1.0, 1.0) == 0.0
    assert psi_from_phi(math.sqrt(2.0), 1.0, 1.0) == pytest.approx(-1.0, abs=1e-14)
    oracle = optimize.bisect(lambda s: 2 * s ** 3 + 0.5 * s + 1.0, -2.0, 0.0, xtol=1e-15)
    assert psi_from_phi(1.0, 0.5, 2.0) == pytest.approx(oracle, abs=1e-12)


def test_check_profile_examples():
    g = Grid.centered(80.0, 4096)
    params = ModelParams(p=0.5)
    zero = WaveProfile(g, RealField(g, np.zeros(g.n)), RealField(g, np.zeros(g.n)), 0.0, 1.0,
                       1.0, params)
    assert check_profile(zero) == (0.0, 0.0, 0.0)
    prof, _ = standing_wave(StandingWaveSpec(params, g))
    assert max(check_profile(prof)) < 1e-6
    bad = WaveProfile(g, prof.phi, RealField(g, 0.9 * prof.psi.samples), 0.0, 1.0, 1.0, params)
    assert check_profile(bad)[1] > 1e-2


def test_first_integral_second_order_under_refinement():
    params = ModelParams(p=0.5)
    errs = []
    for n in (512, 1024, 2048):
        prof, _ = standing_wave(StandingWaveSpec(params, Grid.centered(40.0, n)))
        errs.append(first_integral_residual(prof, scheme="centered2"))
    assert math.log2(errs[0] / errs[1]) > 1.9 and math.log2(errs[1] / errs[2]) > 1.9


# -- evolution ------------------------------------------------------------------

def test_zero_data_stays_zero():
    g = Grid.centered(20.0, 128)
    z = FieldState.from_arrays(g, np.zeros(g.n), np.zeros(g.n))
    params = ModelParams(p=0.5)
    out = step_full(z, params, SimConfig(dt=0.01, t_end=1.0))
    assert np.all(out.u.samples == 0) and np.all(out.v.samples == 0)
    fin, _ = simulate_full(z, params, SimConfig(dt=0.05, t_end=1.0))
    assert np.all(fin.u.samples == 0) and np.all(fin.v.samples == 0)


def test_embed_at_rest_is_phi():
    g = Grid.centered(64.0, 512)
    prof, _ = standing_wave(StandingWaveSpec(ModelParams(p=0.5), g))
    st = embed(prof, g)
    assert np.array_equal(st.u.samples.real, prof.phi.samples)
    assert np.all(st.u.samples.imag == 0)


def test_zero_perturbation_stays_zero():
    g = Grid.centered(40.0, 256)
    params = ModelParams(p=0.5)
    prof, _ = standing_wave(StandingWaveSpec(params, g))
    z = FieldState.from_arrays(g, np.zeros(g.n), np.zeros(g.n))
    out = step_linearized(z, prof, params, SimConfig(dt=1e-3, t_end=1.0))
    assert np.all(out.u.samples == 0) and np.all(out.v.samples == 0)


def test_tau_of_ground_state():
    g = Grid.centered(80.0, 4096)
    pair = TrialPair.from_arrays(g, ground_state_q(g.x), np.zeros(g.n))
    assert tau(pair, ModelParams(p=2.0, a=1.0)) == pytest.approx(8 / 3, abs=1e-8)


@pytest.mark.parametrize("seed", range(5))
def test_multiplier_makes_residuals_orthogonal(seed):
    # 2<R1,u> + <R2,v> = -2 lambda N_d + 3 int u^2 v + 2a int |u|^{p+2} + gamma int v^4
    from benney_waves.core import second_derivative_values
    rng = np.random.default_rng(seed)
    g = Grid.centered(30.0, 256)
    u = np.exp(-(g.x / rng.uniform(1, 3)) ** 2)
    v = -rng.uniform(0.2, 2) * np.exp(-(g.x / rng.uniform(1, 3)) ** 2)
    params = ModelParams(p=float(rng.choice([-0.5, 0.5, 1.0])))
    spec = ConstraintSpec(1.0, d=float(rng.uniform(0.5, 5)))
    pair = TrialPair.from_arrays(g, u, v)
    lam = lagrange_multiplier(pair, params, spec)
    r1 = lam * second_derivative_values(u, g) - lam * u + u * v + params.a * u ** (params.p + 1)
    r2 = -2 * spec.d * lam * v + u * u + params.gamma * v ** 3
    total = 2 * np.sum(r1 * u) * g.dx + np.sum(r2 * v) * g.dx
    scale = (np.sum(np.abs(r1 * u)) + np.sum(np.abs(r2 * v))) * g.dx
    assert abs(total) <= 1e-11 * scale


def test_reembedding_preserves_mass():
    params = ModelParams(p=0.5)
    coarse = Grid.centered(64.0, 1024)
    prof, _ = standing_wave(StandingWaveSpec(params, coarse))
    m0 = np.sum(np.abs(embed(prof, coarse).u.samples) ** 2) * coarse.dx
    fine = Grid.centered(64.0, 2048)
    m1 = np.sum(np.abs(embed(prof, fine).u.samples) ** 2) * fine.dx
    assert abs(m1 - m0) / m0 < 1e-8


def test_standing_peak_conditions():
    params = ModelParams(p=0.5)
    g = Grid.centered(80.0, 4096)
    prof, rep = standing_wave(StandingWaveSpec(params, g))
    c = int(np.argmin(np.abs(g.x)))
    assert prof.phi.samples[c] == pytest.approx(rep.phi0, abs=1e-8)
    assert abs(derivative(prof.phi).samples[c]) < 1e-8
