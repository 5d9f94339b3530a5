from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from splashwave import crapper, geometry
from splashwave.curve import InterfaceCurve
from splashwave.spectral import PeriodicField, grid


def circle(n=256, r=2.0):
    a = grid(n)
    return InterfaceCurve(z=r * np.exp(1j * a), dz=1j * r * np.exp(1j * a), shift=0.0)


def figure_eight(n=256):
    a = grid(n)
    return InterfaceCurve(z=np.sin(a) + 0.5j * np.sin(2 * a), shift=0.0)


def test_curvature_of_circle_and_crapper():
    assert np.allclose(geometry.coordinate_curvature(circle()), 0.5, atol=1e-12)
    theta, _ = crapper.theta_tau(0.3, 256)
    k1 = geometry.curvature(theta).values
    k2 = geometry.coordinate_curvature(crapper.curve(0.3, 256))
    assert np.allclose(k1, k2, atol=1e-10)
    with pytest.raises(ValueError):
        geometry.curvature(PeriodicField(np.cos(grid(16)), "even"))


def test_arclength_reparam_has_unit_speed():
    A = 0.4
    c = crapper.curve(A, 256)
    r = geometry.arclength_reparam(c, 64)
    alpha, length = geometry.arclength_nodes(c, 64)
    total = integrate.quad(lambda a: abs(crapper.tangent(A, a)), -np.pi, np.pi, epsabs=1e-13, limit=200)[0]
    assert length == pytest.approx(total, rel=1e-12)
    for a0, a1 in zip(alpha[:5], alpha[1:6]):
        ds = integrate.quad(lambda a: abs(crapper.tangent(A, a)), a0, a1, epsabs=1e-14)[0]
        assert ds == pytest.approx(length / 64, rel=1e-10)
    assert np.allclose(np.abs(r.dz), 1.0)
    assert np.allclose(r.z, crapper.profile(A, alpha), atol=1e-12)


def test_closed_fixtures():
    assert geometry.self_intersections(circle()) == []
    crossings = geometry.self_intersections(figure_eight())
    assert len(crossings) == 1
    assert abs(crossings[0].point) < 1e-10


@pytest.mark.parametrize("A,expected", [(0.0, "graph"), (0.2, "graph"), (0.43, "simple"), (0.46, "crossing")])
def test_classification_of_crapper_waves(A, expected):
    assert geometry.classify(crapper.curve(A, 1024)).classification == expected


def test_crossing_pair_is_symmetric():
    crossings = geometry.self_intersections(crapper.curve(0.46, 1024))
    assert len(crossings) == 2
    for cr in crossings:
        assert cr.converged
        assert cr.alpha == pytest.approx(-cr.beta, abs=1e-9)
        assert abs(cr.point.real) < 1e-9


def test_graph_predicate_and_threshold():
    ok, dx = geometry.is_graph(crapper.curve(0.41, 512))
    assert ok and dx > 0
    ok, dx = geometry.is_graph(crapper.curve(0.42, 512))
    assert not ok and dx < 0


def test_flat_curve_chord_arc_is_one():
    assert geometry.chord_arc_eta(crapper.curve(0.0, 256)).eta == pytest.approx(1.0, abs=1e-10)


def test_eta_decreases_towards_the_splash():
    etas = [geometry.chord_arc_eta(crapper.curve(A, 1024)).eta for A in (0.40, 0.43, 0.45, 0.4546)]
    assert all(b < a for a, b in zip(etas, etas[1:]))
    # frozen from this implementation at n=1024
    assert etas[0] == pytest.approx(0.36498, abs=1e-4)
    assert etas[-1] == pytest.approx(6.67e-4, rel=2e-2)


def test_near_splash_report():
    rep = geometry.classify(crapper.curve(0.45467, 1024))
    assert rep.classification == "splash"
    assert rep.arc_separation > 1
    a, b = rep.pair
    assert a == pytest.approx(-b, abs=1e-6)
    assert all(length < 0.5 for length in rep.interval_lengths)


@settings(max_examples=10, deadline=None)
@given(st.floats(-5, 5))
def test_eta_is_translation_invariant(dx):
    c = crapper.curve(0.43, 512)
    e0 = geometry.chord_arc_eta(c, m=1024).eta
    assert geometry.chord_arc_eta(c.translated(dx), m=1024).eta == pytest.approx(e0, abs=1e-9)


def test_find_splash_parameter_needs_a_separating_bracket():
    with pytest.raises(ValueError):
        geometry.find_splash_parameter(lambda A: crapper.curve(A, 512), (0.3, 0.4))


def test_opening_map_separates_the_splash():
    c = crapper.curve(crapper.splash_amplitude(), 1024)
    opened = geometry.open_map(c)
    assert opened.simple
    assert opened.right_half_plane
    assert opened.axis_distance < 1e-4


def test_opening_map_rejects_cut_crossing():
    c = crapper.curve(0.3, 256)
    y_trough = 4 / 1.3 - 4
    with pytest.raises(geometry.BranchCutError):
        geometry.open_map(c, a=np.exp(y_trough - 1.0))
