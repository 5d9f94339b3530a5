from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from splashwave import crapper
from splashwave.spectral import derivative_values, grid, hilbert_values


def test_q_of_A_values_and_inverse():
    assert crapper.q_of_A(0.0) == 1.0
    assert crapper.q_of_A(0.5) == pytest.approx(5.0 / 3.0)
    with pytest.raises(ValueError):
        crapper.q_of_A(1.0)
    with pytest.raises(ValueError):
        crapper.A_of_q(0.5)


@given(st.floats(0.01, 0.99))
def test_A_of_q_inverts_q_of_A(A):
    assert crapper.A_of_q(crapper.q_of_A(A)) == pytest.approx(A, abs=1e-12)


@pytest.mark.parametrize("A", [0.1, 0.3, 0.45])
def test_boundary_trace_matches_odd_series(A):
    a = grid(128)
    theta, tau = crapper.theta_tau(A, 128)
    series = sum(4 * A ** k * np.sin(k * a) / k for k in range(1, 200, 2))
    assert np.allclose(theta.values, series, atol=1e-13)
    assert np.allclose(tau.values, hilbert_values(theta.values), atol=1e-13)
    assert theta.parity == "odd" and tau.parity == "even"


@pytest.mark.parametrize("A", [0.1, 0.3, 0.44])
def test_tangent_is_derivative_of_profile(A):
    a = np.linspace(-3, 3, 13)
    h = 1e-6
    fd = (crapper.profile(A, a + h) - crapper.profile(A, a - h)) / (2 * h)
    assert np.allclose(crapper.tangent(A, a), fd, atol=1e-8)
    theta, tau = crapper.theta_tau(A, 64)
    assert np.allclose(crapper.tangent(A, grid(64)), np.exp(-tau.values + 1j * theta.values), atol=1e-13)


@pytest.mark.parametrize("A", [0.1, 0.2, 0.3, 0.4])
def test_capillary_equation(A):
    theta, tau = crapper.theta_tau(A, 512)
    q = crapper.q_of_A(A)
    assert np.max(np.abs(q * derivative_values(theta.values) - np.sinh(tau.values))) < 1e-9


def test_profile_geometry():
    A = 0.3
    z = crapper.profile(A, np.array([0.0, np.pi]))
    assert z[0] == pytest.approx(1j * (4 / (1 + A) - 4))
    assert z[1].imag == pytest.approx(4 / (1 - A) - 4)
    c = crapper.curve(A, 64)
    assert c.symmetric and c.n == 64


def test_resolution_and_truncation():
    n = crapper.resolution(0.3)
    assert 0.3 ** (n // 2) < 1e-14 <= 0.3 ** (n // 4)
    assert crapper.resolution(0.0) == 64
    assert crapper.truncation_error(0.3, n) < 1e-14


def test_critical_constants():
    graph, splash = crapper.critical_constants()
    assert graph == pytest.approx(math.sqrt(2) - 1)
    assert splash == pytest.approx(0.45467, abs=5e-5)
    assert graph < splash
