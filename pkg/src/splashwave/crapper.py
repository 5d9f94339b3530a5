"""Exact Crapper capillary waves.

The boundary trace is ``f_A(a) = 2i log((1 + A e^{-ia}) / (1 - A e^{-ia}))``
with ``theta = Re f_A`` and ``tau = Im f_A``; the profile is
``z_A(a) = a + 4i/(1 + A e^{-ia}) - 4i`` and the surface tension
coefficient is ``q = (1 + A^2)/(1 - A^2)``.
"""
from __future__ import annotations

import functools
import math

import numpy as np

from . import geometry
from .curve import InterfaceCurve
from .spectral import PeriodicField, grid

GRAPH_THRESHOLD = math.sqrt(2.0) - 1.0

# bracket used when recomputing the splash parameter
SPLASH_BRACKET = (0.44, 0.47)


def _check_amplitude(A: float) -> None:
    if not abs(A) < 1.0:
        raise ValueError(f"Crapper amplitude must satisfy |A| < 1, got {A}")


def q_of_A(A: float) -> float:
    _check_amplitude(A)
    return (1.0 + A * A) / (1.0 - A * A)


def A_of_q(q: float) -> float:
    """Inverse of :func:`q_of_A` on ``A >= 0``."""
    if q < 1.0:
        raise ValueError(f"q must be at least 1, got {q}")
    return math.sqrt((q - 1.0) / (q + 1.0))


def boundary_trace(A: float, alpha) -> np.ndarray:
    _check_amplitude(A)
    e = A * np.exp(-1j * np.asarray(alpha))
    return 2j * np.log((1.0 + e) / (1.0 - e))


def theta_tau(A: float, n: int) -> tuple[PeriodicField, PeriodicField]:
    f = boundary_trace(A, grid(n))
    return (PeriodicField.projected(f.real, "odd"),
            PeriodicField.projected(f.imag, "even"))


def profile(A: float, alpha) -> np.ndarray:
    _check_amplitude(A)
    return np.asarray(alpha) + 4j / (1.0 + A * np.exp(-1j * np.asarray(alpha))) - 4j


def tangent(A: float, alpha) -> np.ndarray:
    e = A * np.exp(-1j * np.asarray(alpha))
    return ((1.0 - e) / (1.0 + e)) ** 2


def curve(A: float, n: int) -> InterfaceCurve:
    a = grid(n)
    return InterfaceCurve(z=profile(A, a), dz=tangent(A, a), symmetric=True)


def resolution(A: float, tol: float = 1e-14, n_min: int = 64, n_max: int = 8192) -> int:
    """Smallest power of two with ``A**(n/2) < tol``, clipped to the bounds."""
    A = abs(A)
    if A == 0.0:
        return n_min
    n = n_min
    while A ** (n // 2) >= tol and n < n_max:
        n *= 2
    return n


def truncation_error(A: float, n: int) -> float:
    """Size of the first discarded Fourier mode of theta_A on an n-point grid."""
    k = n // 2
    return 4.0 * abs(A) ** k / k


@functools.lru_cache(maxsize=8)
def splash_amplitude(n: int = 4096, tol: float = 1e-12) -> float:
    """A_0: the Crapper amplitude at which z_A first touches itself."""
    return geometry.find_splash_parameter(lambda A: curve(A, n), SPLASH_BRACKET, tol)


def critical_constants(n: int = 4096) -> tuple[float, float]:
    """``(sqrt(2) - 1, A_0)``, the graph and splash thresholds of z_A."""
    return GRAPH_THRESHOLD, splash_amplitude(n)
