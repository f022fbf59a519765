import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from benney_waves.core import (ComplexField, Grid, RealField, derivative, dirichlet_energy,
                               helmholtz_solve, integrate, interpolate, l2_norm_sq, resample,
                               second_derivative_values)
from benney_waves.errors import ConfigurationError


def test_grid_centered_layout():
    g = Grid.centered(40.0, 256)
    assert g.n == 256 and g.periodic
    assert g.dx == pytest.approx(40.0 / 256)
    assert g.x[0] == pytest.approx(-20.0)
    assert np.any(g.x == 0.0)
    assert g.length == pytest.approx(40.0)


def test_grid_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        Grid.centered(40.0, 100)
    with pytest.raises(ConfigurationError):
        Grid(0.0, -1.0, 64, True)


def test_field_grid_length_checked():
    g = Grid.centered(10.0, 64)
    with pytest.raises(ConfigurationError):
        RealField(g, np.zeros(63))


def test_spectral_derivative_of_trig_is_exact():
    g = Grid.centered(2 * math.pi, 64)
    f = RealField(g, np.sin(3 * g.x))
    assert np.max(np.abs(derivative(f).samples - 3 * np.cos(3 * g.x))) < 1e-12
    d2 = second_derivative_values(f.samples, g)
    assert np.max(np.abs(d2 + 9 * np.sin(3 * g.x))) < 1e-11


def test_centered_scheme_second_order():
    errs = []
    for n in (64, 128, 256):
        g = Grid.centered(2 * math.pi, n)
        f = RealField(g, np.sin(g.x))
        errs.append(np.max(np.abs(derivative(f, "centered2").samples - np.cos(g.x))))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 1.9)


def test_gaussian_integrals():
    g = Grid.centered(40.0, 1024)
    f = RealField(g, np.exp(-g.x ** 2))
    assert integrate(f) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert l2_norm_sq(f) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-13)
    # int (d/dx e^{-x^2})^2 = sqrt(pi/2)
    assert dirichlet_energy(f) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-12)


def test_energy_consistent_with_second_derivative():
    g = Grid.centered(20.0, 256)
    f = np.exp(-g.x ** 2) * (1 + 0.3 * np.sin(g.x))
    for scheme in ("spectral", "centered2"):
        e = dirichlet_energy(RealField(g, f), scheme)
        assert e == pytest.approx(-np.sum(f * second_derivative_values(f, g, scheme)) * g.dx,
                                  rel=1e-12)


@pytest.mark.parametrize("scheme", ["spectral", "centered2"])
def test_helmholtz_inverts_operator(scheme):
    g = Grid.centered(20.0, 256)
    rhs = np.exp(-g.x ** 2)
    y = helmholtz_solve(rhs, g, scheme)
    back = y - second_derivative_values(y, g, scheme)
    assert np.max(np.abs(back - rhs)) < 1e-10


def test_resample_dilation_of_gaussian():
    g = Grid.centered(40.0, 2048)
    f = RealField(g, np.exp(-g.x ** 2))
    out = resample(f, 2.0)
    assert np.max(np.abs(out.samples - np.exp(-4 * g.x ** 2))) < 1e-3


def test_dilated_grid_keeps_samples():
    g = Grid.centered(40.0, 256)
    d = g.dilated(2.0)
    assert d.n == g.n and d.dx == pytest.approx(g.dx / 2)
    f = RealField(g, np.exp(-g.x ** 2))
    out = resample(f, 2.0, d)
    assert np.max(np.abs(out.samples - f.samples)) < 1e-12


def test_interpolate_between_grids():
    g = Grid.centered(40.0, 512)
    h = Grid.centered(40.0, 1024)
    f = ComplexField(g, np.exp(-g.x ** 2) * np.exp(0.5j * g.x))
    out = interpolate(f, h)
    assert np.max(np.abs(out.samples - np.exp(-h.x ** 2) * np.exp(0.5j * h.x))) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(-2.0, 2.0))
def test_integral_translation_invariant(width, shift):
    g = Grid.centered(60.0, 1024)
    f = RealField(g, np.exp(-((g.x - shift) / width) ** 2))
    assert integrate(f) == pytest.approx(width * math.sqrt(math.pi), rel=1e-10)
