from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splashwave import crapper
from splashwave.spectral import (PeriodicField, TrigInterpolant, antiderivative_values,
                                 cosine_coefficients, curve_from_theta, derivative,
                                 derivative_values, from_cosine, from_sine, grid, hilbert,
                                 hilbert_values, inner, integrate_tangent, resample,
                                 sine_coefficients, tangent_mean)

coeffs = st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=12)


def test_grid_starts_at_minus_pi_and_reflects():
    a = grid(8)
    assert a[0] == -np.pi
    assert np.allclose(np.sin(a[(8 - np.arange(8)) % 8]), -np.sin(a), atol=1e-15)


def test_field_rejects_bad_sizes_and_parity():
    with pytest.raises(ValueError):
        PeriodicField(np.zeros(12))
    with pytest.raises(ValueError):
        PeriodicField(np.full(8, np.nan))
    a = grid(16)
    with pytest.raises(ValueError):
        PeriodicField(np.cos(a), "odd")
    PeriodicField(np.sin(a), "odd")
    PeriodicField(np.cos(a), "even")


def test_hilbert_convention():
    a = grid(64)
    assert np.allclose(hilbert_values(np.sin(3 * a)), np.cos(3 * a), atol=1e-14)
    assert np.allclose(hilbert_values(np.cos(2 * a)), -np.sin(2 * a), atol=1e-14)
    assert np.allclose(hilbert_values(np.ones(64)), 0, atol=1e-15)
    f = hilbert(PeriodicField(np.sin(a), "odd"))
    assert f.parity == "even"


def test_cot_kernel_is_minus_hilbert():
    # alternating-point rule: principal value at even nodes from odd nodes
    n = 256
    a = grid(n)
    f = np.exp(np.cos(a)) * np.sin(2 * a) + np.cos(a)
    h = 2 * np.pi / n
    idx = np.arange(0, n, 16)
    pv = np.array([np.sum(f[1::2] / np.tan((a[i] - a[1::2]) / 2)) * 2 * h / (2 * np.pi) for i in idx])
    assert np.allclose(pv, -hilbert_values(f)[idx], atol=1e-10)


def test_derivative_and_antiderivative():
    a = grid(32)
    assert np.allclose(derivative_values(np.sin(4 * a)), 4 * np.cos(4 * a), atol=1e-13)
    assert np.allclose(antiderivative_values(np.cos(3 * a)), np.sin(3 * a) / 3, atol=1e-15)
    # Nyquist mode is discarded
    assert np.allclose(derivative_values(np.cos(16 * a)), 0, atol=1e-13)
    assert derivative(PeriodicField(np.cos(a), "even")).parity == "odd"


@given(coeffs)
def test_hilbert_squared_is_minus_identity_on_zero_mean(b):
    f = from_sine(np.array(b), 64)
    assert np.allclose(hilbert_values(hilbert_values(f.values)), -f.values, atol=1e-12)


@given(coeffs)
def test_sine_cosine_roundtrip(b):
    b = np.array(b)
    f = from_sine(b, 64)
    assert np.allclose(sine_coefficients(f, b.size), b, atol=1e-13)
    g = from_cosine(b, 64)
    assert np.allclose(cosine_coefficients(g, b.size - 1), b, atol=1e-13)


@given(coeffs, st.sampled_from([64, 128, 256]))
def test_resample_preserves_band_limited_fields(b, m):
    f = from_sine(np.array(b), 32)
    up = resample(f, m)
    assert np.allclose(up.values, from_sine(np.array(b), m).values, atol=1e-13)
    assert np.allclose(resample(up, 32).values, f.values, atol=1e-13)


@given(coeffs, st.lists(st.floats(-10, 10), min_size=1, max_size=5))
def test_interpolant_exact_on_band_limited(b, pts):
    b = np.array(b)
    f = from_sine(b, 64)
    s = np.array(pts)
    k = np.arange(1, b.size + 1)
    exact = np.sin(np.outer(s, k)) @ b
    dexact = np.cos(np.outer(s, k)) @ (k * b)
    val, der = TrigInterpolant(f.values)(s, order=1)
    assert np.allclose(val, exact, atol=1e-12)
    assert np.allclose(der, dexact, atol=1e-11)


def test_inner_product():
    a = grid(32)
    assert inner(PeriodicField(np.cos(a)), PeriodicField(np.cos(a))) == pytest.approx(np.pi)
    with pytest.raises(ValueError):
        inner(PeriodicField(np.cos(a)), PeriodicField(np.ones(16)))


def test_integrate_tangent_flat_and_crapper():
    a = grid(64)
    assert np.allclose(integrate_tangent(np.ones(64, dtype=complex)), a, atol=1e-14)
    for A in (0.2, 0.44):
        theta, _ = crapper.theta_tau(A, 256)
        c = curve_from_theta(theta)
        assert np.allclose(c.z, crapper.profile(A, grid(256)), atol=1e-13)
        assert abs(np.mean(c.y)) < 1e-14


def test_curve_from_theta_needs_odd_angle():
    with pytest.raises(ValueError):
        curve_from_theta(PeriodicField(np.cos(grid(16)), "even"))


@settings(max_examples=50)
@given(st.lists(st.floats(-0.8, 0.8), min_size=1, max_size=8))
def test_tangent_mean_is_one(b):
    theta = from_sine(np.array(b), 256)
    assert abs(tangent_mean(theta) - 1.0) < 1e-10
