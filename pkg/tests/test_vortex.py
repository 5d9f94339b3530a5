from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splashwave import crapper, vortex
from splashwave.curve import InterfaceCurve
from splashwave.spectral import PeriodicField, grid


def hodograph_velocity(A, points, iters=60):
    """Exact lower-fluid velocity of a Crapper wave: invert z(w), return conj(1/z'(w))."""
    w = np.array(points, dtype=complex)
    for _ in range(iters):
        e = A * np.exp(-1j * w)
        w = w - (w + 4j / (1 + e) - 4j - points) / ((1 - e) / (1 + e)) ** 2
    e = A * np.exp(-1j * w)
    return np.conj(1 / ((1 - e) / (1 + e)) ** 2), w


@pytest.fixture(scope="module")
def crapper03():
    c = crapper.curve(0.3, 512)
    k = vortex.SheetKernel(c)
    return c, k, vortex.solve_omega(c, kernel=k)


def test_flat_sheet():
    c = crapper.curve(0.0, 64)
    a = grid(64)
    assert np.allclose(vortex.br_integral(c, np.full(64, 3.0)), 0, atol=1e-14)
    # a cosine sheet on the flat interface moves it vertically
    assert np.allclose(vortex.br_integral(c, 2 * np.cos(a)), 1j * np.sin(a), atol=1e-13)
    assert np.allclose(vortex.solve_omega(c).values, 2.0)


def test_even_sheets_stay_even(crapper03):
    c, k, w = crapper03
    out = vortex.sheet_operator_apply(c, w, kernel=k)
    assert out.parity == "even"
    assert w.parity == "even"


@pytest.mark.parametrize("A", [0.1, 0.3, 0.44])
def test_solve_residual_and_kinematic_condition(A):
    c = crapper.curve(A, 512)
    k = vortex.SheetKernel(c)
    w = vortex.solve_omega(c, kernel=k)
    assert vortex.omega_residual(c, w, kernel=k) < 1e-10
    assert np.max(np.abs(vortex.normal_component(c, w, kernel=k).values)) < 1e-8


def test_omega_range_frozen(crapper03):
    # frozen from this implementation (n=512, A=0.3)
    _, _, w = crapper03
    assert w.values.min() == pytest.approx(1.0025133932, abs=1e-8)
    assert w.values.max() == pytest.approx(6.0422942427, abs=1e-8)


def test_interface_limit_matches_hodograph(crapper03):
    c, k, w = crapper03
    v1, v2 = vortex.interface_velocities(c, w, kernel=k)
    assert np.allclose(v2, np.conj(1 / c.dz), atol=1e-11)
    # the jump across the sheet is w along the unit tangent, per unit speed
    assert np.allclose(np.real((v2 - v1) * np.conj(c.dz)), w.values, atol=1e-11)


def test_velocity_below_matches_exact_flow(crapper03):
    c, _, w = crapper03
    pts = np.array([0.3 - 1.5j, 1.0 - 0.9j, -2.0 - 3j, -5j, 2.5 - 0.6j])
    exact, _ = hodograph_velocity(0.3, pts)
    assert np.allclose(vortex.velocity_field(c, w, pts), exact, atol=1e-11)


def test_far_field_directions(crapper03):
    # observed orientation: +1 deep below, -1 high above (circulation 4 pi per period)
    c, _, w = crapper03
    below = vortex.velocity_field(c, w, [-30j])
    above = vortex.velocity_field(c, w, [30j])
    assert below[0] == pytest.approx(1.0, abs=1e-10)
    assert above[0] == pytest.approx(-1.0, abs=1e-10)
    assert np.mean(w.values) * 2 * np.pi == pytest.approx(4 * np.pi)


def test_stream_function(crapper03):
    c, _, w = crapper03
    on = vortex.stream_function_on_interface(c, w)
    assert np.ptp(on) < 1e-12
    pts = np.array([0.3 - 1.5j, -2.0 - 3j])
    _, wpre = hodograph_velocity(0.3, pts)
    assert np.allclose(vortex.stream_function(c, w, pts), -wpre.imag, atol=1e-11)


def test_points_near_the_interface_are_refused(crapper03):
    c, _, w = crapper03
    with pytest.raises(ValueError):
        vortex.velocity_field(c, w, [c.z[10] + 1e-4j])


def test_touching_curve_is_refused():
    # a closed fixture whose two lobes share a node
    a = grid(64)
    z = np.sin(a) + 0.5j * np.sin(2 * a)
    c = InterfaceCurve(z=z, shift=0.0)
    with pytest.raises(vortex.CurveTouchError):
        vortex.SheetKernel(c)


def test_spectral_radius_frozen():
    # frozen from this implementation at n=1024 on even fields
    assert vortex.spectral_radius(crapper.curve(0.3, 1024)) == pytest.approx(0.37090, abs=2e-5)
    assert vortex.spectral_radius(crapper.curve(0.0, 64)) < 1e-12


def test_quadrature_converges_spectrally():
    vals = {}
    for n in (256, 512):
        c = crapper.curve(0.3, n)
        vals[n] = vortex.br_integral(c, vortex.solve_omega(c))
    assert np.max(np.abs(vals[512][::2] - vals[256])) < 1e-10


@settings(max_examples=8, deadline=None)
@given(st.floats(-3, 3))
def test_br_translation_invariant(dx):
    c = crapper.curve(0.3, 128)
    w = PeriodicField(2 + np.cos(grid(128)), "even")
    assert np.allclose(vortex.br_integral(c.translated(dx), w), vortex.br_integral(c, w), atol=1e-12)
