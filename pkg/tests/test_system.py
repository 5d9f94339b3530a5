from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splashwave import crapper, system
from splashwave.spectral import (PeriodicField, cosine_coefficients, from_sine, grid, inner,
                                 sine_coefficients)
from splashwave.system import WaveParams


def test_params_from_physical():
    p = system.params_from_physical(0.0, 1.0, 1.0, 0.0)
    assert (p.eps, p.q, p.A) == (0.0, 1.0, 0.0)
    p = system.params_from_physical(0.01, 1.0, crapper.q_of_A(0.4), 0.0)
    assert p.eps == pytest.approx(0.02 / 0.99)
    assert p.A == pytest.approx(0.4)
    for bad in [(1.0, 1.0, 1.0, 0.0), (0.0, 0.0, 1.0, 0.0), (0.0, 1.0, -1.0, 0.0)]:
        with pytest.raises(ValueError):
            system.params_from_physical(*bad)


def test_wave_params_validation():
    with pytest.raises(ValueError):
        WaveParams(1.0)
    with pytest.raises(ValueError):
        WaveParams(0.3, eps=-1.0)


def test_flat_residuals():
    zero = PeriodicField(np.zeros(64), "odd")
    assert system.residual_G1(zero, 2.0, WaveParams(0.0)).max_abs() == 0.0
    assert system.residual_G2(zero, 2.0).max_abs() < 1e-14
    assert system.residual_normal(zero, 2.0).max_abs() < 1e-14
    assert system.residual_G1(zero, 2.0, WaveParams(0.0, eps=0.1)).max_abs() == 0.0
    # with omega = 1 only the density term survives: (eps/4) * 1 * (1 - 2)
    g1 = system.residual_G1(zero, 1.0, WaveParams(0.0, eps=0.1))
    assert np.allclose(g1.values, -0.025)


def test_crapper_residuals():
    theta, _ = crapper.theta_tau(0.3, 512)
    g2 = system.residual_G2(theta, 0.0)
    assert g2.mean() == pytest.approx(-2.0)
    st_ = system.crapper_state(0.3, 512)
    assert system.residual_G1(st_.theta, st_.omega, WaveParams(0.3)).max_abs() < 1e-12
    assert system.residual_G2(st_.theta, st_.omega).max_abs() < 1e-10
    assert system.residual_normal(st_.theta, st_.omega).max_abs() < 1e-8


def test_normal_residual_negative_control():
    theta = from_sine(np.array([0.2, 0.1]), 128)
    w = PeriodicField(2 + np.cos(grid(128)), "even")
    assert system.residual_normal(theta, w).max_abs() > 1e-3


def test_gamma_flat_and_finite_difference():
    a = grid(64)
    zero = PeriodicField(np.zeros(64), "odd")
    u = PeriodicField(np.sin(a), "odd")
    q = 1.7
    assert np.allclose(system.gamma_apply(zero, u, q).values, (q - 1) * np.cos(a), atol=1e-13)
    A = 0.3
    theta, _ = crapper.theta_tau(A, 256)
    u = from_sine(np.array([0.3, -0.2, 0.1, 0.05]), 256)
    h = 1e-6
    p = WaveParams(A)
    fd = (system.residual_G1(theta + u.scaled(h), None, p).values
          - system.residual_G1(theta - u.scaled(h), None, p).values) / (2 * h)
    assert np.allclose(system.gamma_apply(theta, u, p.q).values, fd, atol=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=10))
def test_gamma_range_is_orthogonal_to_cos_theta(b):
    A = 0.3
    theta, _ = crapper.theta_tau(A, 256)
    u = from_sine(np.array(b), 256)
    val = inner(system.gamma_apply(theta, u, crapper.q_of_A(A)), PeriodicField(np.cos(theta.values)))
    assert abs(val) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-0.7, 0.7), min_size=1, max_size=10), st.floats(1.0, 4.0))
def test_orthogonality_identity(b, q):
    assert abs(system.orthogonality_check(from_sine(np.array(b), 256), q)) < 1e-9


def test_orthogonality_examples():
    assert system.orthogonality_check(PeriodicField(np.zeros(32), "odd")) == 0.0
    assert abs(system.orthogonality_check(PeriodicField(0.3 * np.sin(grid(128)), "odd"))) < 1e-10
    assert abs(system.orthogonality_check(crapper.theta_tau(0.44, 256)[0], crapper.q_of_A(0.44))) < 1e-10


def test_cauchy_integral_sign():
    theta, tau = crapper.theta_tau(0.3, 256)
    val = inner(PeriodicField(np.exp(-tau.values)), PeriodicField(np.cos(theta.values)))
    assert val == pytest.approx(2 * np.pi, abs=1e-10)


def test_flat_jacobian_structure():
    st_ = system.crapper_state(0.0, 64)
    q = 1.5
    J = system.assemble_jacobian(st_, WaveParams(crapper.A_of_q(q)))
    m = st_.m
    k = np.arange(1, m + 1)
    assert np.allclose(np.diag(J[1:m + 1, :m]), q * k - 1, atol=1e-12)
    kappa = J[: m + 1, -1]
    assert kappa[0] == pytest.approx(-1.0)
    assert np.allclose(kappa[1:], 0, atol=1e-14)


def test_jacobian_triangular_at_zero_eps():
    st_ = system.crapper_state(0.3, 128)
    J = system.assemble_jacobian(st_, WaveParams(0.3, 0.0, 1e-3))
    m = st_.m
    assert np.all(J[: m + 1, m: 2 * m + 1] == 0.0)


def test_analytic_jacobian_matches_finite_differences():
    st_ = system.crapper_state(0.3, 128)
    p = WaveParams(0.3, 1e-2, 1e-2, 0.01)
    Ja = system.assemble_jacobian(st_, p, "analytic")
    Jf = system.assemble_jacobian(st_, p, "fd")
    assert np.max(np.abs(Ja - Jf)) < 1e-5


@pytest.mark.parametrize("A", [0.2, 0.44])
def test_augmented_jacobian_is_regular_and_cokernel_is_cos_theta(A):
    st_ = system.crapper_state(A, 256)
    m = st_.m
    J = system.assemble_jacobian(st_, WaveParams(A))
    assert np.linalg.svd(J, compute_uv=False).min() > 1e-6
    j11 = J[: m + 1, :m]
    left = np.linalg.svd(j11)[0][:, -1]
    # <f, c> = 2 pi (a_0 c_0 + sum a_k c_k / 2) in cosine coefficients
    c = cosine_coefficients(PeriodicField(np.cos(st_.theta.values)), m)
    weights = np.r_[1.0, np.full(m, 0.5)]
    target = weights * c
    cosang = abs(left @ target) / np.linalg.norm(target)
    assert np.arccos(min(cosang, 1.0)) < 1e-3


def test_newton_at_crapper_root():
    st_ = system.newton_solve(None, WaveParams(0.3))
    assert st_.converged
    assert len(st_.log) - 1 <= 2
    assert abs(st_.kappa) < 1e-12
    assert system.theta_deviation(st_) < 1e-12


def test_newton_gravity_scaling():
    devs = [system.theta_deviation(system.newton_solve(None, WaveParams(0.44, 0.0, g)))
            for g in (1e-3, 5e-4)]
    assert devs[1] / devs[0] == pytest.approx(0.5, rel=0.1)


def test_newton_two_fluid_and_parity():
    st_ = system.newton_solve(None, WaveParams(0.44, 1e-3, 1e-3))
    assert st_.converged
    assert st_.residuals["G1"] + st_.residuals["G2"] < 1e-10
    assert st_.residuals["normal"] < 1e-8
    assert st_.theta.parity == "odd" and st_.omega.parity == "even"
    a = st_.theta.values
    assert np.array_equal(a[(st_.n - np.arange(st_.n)) % st_.n], -a)


def test_root_does_not_depend_on_tolerance():
    p = WaveParams(0.44, 1e-3, 1e-3)
    s1 = system.newton_solve(None, p, tol=1e-10)
    s2 = system.newton_solve(None, p, tol=1e-9)
    d = np.linalg.norm(sine_coefficients(s1.theta, s1.m) - sine_coefficients(s2.theta, s2.m))
    assert d < 1e-8


def test_newton_refuses_crossing_curves():
    seed = system.crapper_state(0.46, 512, omega=False)
    with pytest.raises(system.NewtonError):
        system.newton_solve(seed, WaveParams(0.46, 1e-3, 0.0))


@pytest.mark.parametrize("A", [0.1, 0.3, 0.44])
def test_kappa_derivative(A):
    assert system.kappa_derivative_check(A) == pytest.approx(-2 * np.pi, rel=1e-5)


def test_continuation_in_amplitude_tracks_crapper():
    seed = system.crapper_state(0.02, 256, omega=False)
    sched = [WaveParams(round(a, 2)) for a in np.arange(0.04, 0.4401, 0.02)]
    branch = system.continuation(sched, seed)
    assert len(branch) == len(sched)
    assert max(system.theta_deviation(s) for s in branch) < 1e-8


def test_continuation_in_gravity_drifts_monotonically():
    seed = system.crapper_state(0.44, 512, omega=False)
    sched = [WaveParams(0.44, 0.0, g) for g in (1e-5, 1e-4, 5e-4, 1e-3)]
    devs = [system.theta_deviation(s) for s in system.continuation(sched, seed)]
    assert all(b > a for a, b in zip(devs, devs[1:]))


def test_two_fluid_branch():
    branch = system.solve_branch(WaveParams(0.40, 1e-3, 1e-4))
    assert all(s.converged for s in branch)
    assert branch[-1].params.eps == 1e-3


def test_splash_search_without_gravity():
    A, st_, report = system.splash_search(0.0)
    assert A == pytest.approx(0.45467, abs=5e-4)
    assert report.classification == "splash"
    assert report.eta < 1e-6


def test_splash_search_errors():
    with pytest.raises(system.SplashSearchError):
        system.splash_search(0.0, bracket=(0.3, 0.4))
    with pytest.raises(ValueError):
        system.splash_search(1e-3, eps=1e-3)
