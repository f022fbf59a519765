import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from benney_waves.core import Grid, RealField, dirichlet_energy_values
from benney_waves.errors import DomainError
from benney_waves.functionals import (ConstraintSpec, ModelParams, TrialPair, constraint_norm,
                                      el_residual, lagrange_multiplier, tau)
from benney_waves.profiles import check_profile
from benney_waves.variational import (SWEEP_COLUMNS, MinimizeConfig, MinimizeResult,
                                      SweepRecord, fit_loglog, initial_pair, minimize,
                                      norm_identity, rearrange, sweep, symmetrize,
                                      wave_from_minimizer)

GRID = Grid.centered(40.0, 512)
OPEN = Grid(-20.0, 40.0 / 512, 512, False)


def _field(seed, grid):
    rng = np.random.default_rng(seed)
    kind = seed % 3
    if kind == 0:
        return rng.standard_normal(grid.n)
    env = np.exp(-(grid.x - rng.uniform(-5, 5)) ** 2 / rng.uniform(1, 20))
    if kind == 1:
        return env * (1 + 0.5 * np.sin(rng.uniform(0.5, 4) * grid.x))
    return env * rng.standard_normal(grid.n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31), st.booleans())
def test_rearrangement_shape(seed, periodic):
    grid = GRID if periodic else OPEN
    f = _field(seed, grid)
    fs = rearrange(f, grid)
    c = int(np.argmin(np.abs(grid.x)))
    assert np.array_equal(np.sort(fs), np.sort(np.abs(f)))
    assert fs[c] == np.max(np.abs(f))
    right, left = fs[c:], fs[:c + 1][::-1]
    assert np.all(np.diff(right) <= 0) and np.all(np.diff(left) <= 0)
    m = min(right.size, left.size) - 1
    # even up to the single unpaired node
    assert np.all(right[1:m] >= left[1:m]) and np.all(left[1:m] >= right[2:m + 1])


def _property_suite(seeds, grid):
    counts = {"equimeasurability": 0, "polya_szego": 0, "hardy_littlewood": 0}
    for seed in seeds:
        f = _field(seed, grid)
        g = _field(seed + 10 ** 6, grid)
        fs, gs = rearrange(f, grid), rearrange(g, grid)
        if not np.array_equal(np.sort(fs), np.sort(np.abs(f))):
            counts["equimeasurability"] += 1
        e_star = dirichlet_energy_values(fs, grid, "centered2")
        e = dirichlet_energy_values(np.abs(f), grid, "centered2")
        if e_star > e * (1 + 1e-13):
            counts["polya_szego"] += 1
        if np.sum(np.abs(f) * np.abs(g)) > np.sum(fs * gs) * (1 + 1e-13):
            counts["hardy_littlewood"] += 1
    return counts


@pytest.mark.parametrize("grid", [GRID, OPEN], ids=["periodic", "open"])
def test_symmetrization_inequalities_on_seeded_fields(grid):
    counts = _property_suite(range(100), grid)
    assert counts == {"equimeasurability": 0, "polya_szego": 0, "hardy_littlewood": 0}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from([-0.5, 0.5, 1.0]))
def test_symmetrize_lands_on_sphere_with_signs(seed, p):
    rng = np.random.default_rng(seed)
    spec = ConstraintSpec(float(rng.uniform(1, 50)), 0.5)
    u = np.abs(_field(seed, GRID)) + 1e-3
    v = -np.abs(_field(seed + 1, GRID))
    pair = TrialPair.from_arrays(GRID, u, v)
    s = math.sqrt(spec.mu / constraint_norm(pair, spec))
    out = symmetrize(pair.scaled(s), spec, ModelParams(p=p))
    assert constraint_norm(out, spec) == pytest.approx(spec.mu, rel=1e-9)
    assert np.all(out.u.samples >= 0) and np.all(out.v.samples <= 0)


def test_initial_pair_on_sphere():
    spec = ConstraintSpec(100.0, 0.5)
    pair = initial_pair(GRID, spec, MinimizeConfig())
    assert constraint_norm(pair, spec) == pytest.approx(100.0)


@pytest.fixture(scope="module")
def negative_p_run():
    params = ModelParams(p=-0.5)
    spec = ConstraintSpec(100.0, 0.5)
    return params, spec, minimize(params, spec, GRID, MinimizeConfig(seed=3))


def test_minimize_converges_negative_p(negative_p_run):
    params, spec, res = negative_p_run
    assert res.converged
    assert res.lam < 0
    assert max(el_residual(res.pair, res.lam, params, spec)) < 1e-6
    assert res.lam == pytest.approx(res.lam_rayleigh, rel=1e-6)
    assert constraint_norm(res.pair, spec) == pytest.approx(spec.mu, rel=1e-10)


def test_minimize_result_is_symmetric_and_signed(negative_p_run):
    _, _, res = negative_p_run
    u, v = res.pair.u.samples, res.pair.v.samples
    assert np.all(v <= 1e-12)
    c = int(np.argmin(np.abs(GRID.x)))
    assert np.argmax(u) == c
    assert np.max(np.abs(u[c + 1:c + 200] - u[c - 1:c - 200:-1])) < 1e-8 * u.max()


def test_minimize_is_deterministic(negative_p_run):
    params, spec, res = negative_p_run
    again = minimize(params, spec, GRID, MinimizeConfig(seed=3))
    assert np.array_equal(again.pair.u.samples, res.pair.u.samples)
    assert again.lam == res.lam


def test_minimizer_lowers_tau_below_trial_start(negative_p_run):
    params, spec, res = negative_p_run
    assert res.tau_value < tau(initial_pair(GRID, spec, MinimizeConfig(seed=3)), params)
    assert res.tau_value < 0


def test_wave_from_minimizer_solves_wave_equations(negative_p_run):
    params, spec, res = negative_p_run
    wave = wave_from_minimizer(res, params, spec)
    assert wave.cstar == pytest.approx(-res.lam)
    assert wave.c == pytest.approx(-2 * res.lam * spec.d)
    assert wave.w == pytest.approx(wave.cstar + wave.c ** 2 / 4)
    assert norm_identity(wave) == pytest.approx(spec.mu, rel=1e-9)
    assert max(check_profile(wave)) < 1e-6


def test_wave_from_minimizer_rejects_nonnegative_multiplier(negative_p_run):
    params, spec, res = negative_p_run
    bad = MinimizeResult(res.pair, res.tau_value, 0.1, 1, 0.0, True, 0.1)
    with pytest.raises(DomainError):
        wave_from_minimizer(bad, params, spec)


def test_minimize_superlinear_small_mu():
    params = ModelParams(p=1.0)
    spec = ConstraintSpec(0.01, 0.25)
    grid = Grid.centered(80.0, 1024)
    res = minimize(params, spec, grid)
    assert res.converged and res.lam < 0
    assert res.lam == pytest.approx(lagrange_multiplier(res.pair, params, spec), rel=1e-12)
    assert max(el_residual(res.pair, res.lam, params, spec)) < 1e-4


def test_fit_loglog_recovers_power_law():
    x = np.geomspace(1, 100, 7)
    fit = fit_loglog(x, 3.0 * x ** 1.7)
    assert fit.slope == pytest.approx(1.7, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)
    assert fit.ci95[0] <= fit.slope <= fit.ci95[1]


def test_sweep_record_row_order():
    rec = SweepRecord(*range(13))
    assert len(rec.row()) == len(SWEEP_COLUMNS)
    assert rec.row() == list(range(13))


def test_sweep_order_independent_of_threads():
    params = ModelParams(p=-0.5)
    mus = [100.0, 200.0, 400.0]
    one = sweep(params, 0.5, mus, GRID, threads=1)
    two = sweep(params, 0.5, mus, GRID, threads=2)
    assert [r.mu for r in two] == mus
    assert [r.row() for r in one] == [r.row() for r in two]


def test_sweep_rejects_unsorted_mu():
    with pytest.raises(ValueError):
        sweep(ModelParams(p=-0.5), 0.5, [200.0, 100.0], GRID)


def test_sweep_warns_outside_alpha_window():
    with pytest.warns(UserWarning):
        sweep(ModelParams(p=-0.5), 0.1, [100.0], GRID, MinimizeConfig(max_iters=2), threads=1)
