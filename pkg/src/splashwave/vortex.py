"""Birkhoff-Rott integral, the sheet operator and induced velocities.

With ``(a, b)^perp = (-b, a)`` and the periodized kernel
``sum_k 1/(w + 2 pi k) = cot(w/2)/2`` the Birkhoff-Rott integral reads

    BR(a) = conj( 1/(4 pi i) PV int w(b) cot((z(a) - z(b))/2) db ).

The principal value is handled by subtracting ``cot((a - b)/2)/z'(a)``
inside the integral, integrating the smooth remainder with the trapezoid
rule (its diagonal limit is ``z''(a)/z'(a)^2``) and restoring the subtracted
part exactly with the Hilbert transform.  Complex numbers stand for planar
vectors throughout.
"""
from __future__ import annotations

import logging

import numpy as np
from scipy import linalg

from .curve import InterfaceCurve
from .spectral import PeriodicField, hilbert_values, symmetrize

logger = logging.getLogger(__name__)

TOUCH_GUARD = 1e-9
DENSE_LIMIT = 4096


class CurveTouchError(ValueError):
    """Two non-neighbouring nodes of the curve (nearly) coincide."""

    def __init__(self, i: int, j: int, distance: float):
        super().__init__(f"curve nodes {i} and {j} are {distance:.3e} apart; "
                         "the sheet kernel is singular there")
        self.pair = (i, j)
        self.distance = distance


class SheetSolveError(RuntimeError):
    """The system (1 + A(z)) w = 2 is singular to working precision."""

    def __init__(self, message: str, rcond: float):
        super().__init__(message)
        self.rcond = rcond


def _values(omega) -> np.ndarray:
    return omega.values if isinstance(omega, PeriodicField) else np.asarray(omega, dtype=float)


def _grid_cot(n: int) -> np.ndarray:
    """``cot((a_i - a_j)/2)`` on the uniform grid, zero on the diagonal."""
    d = np.arange(n)
    with np.errstate(divide="ignore"):
        row = 1.0 / np.tan(np.pi * d / n)
    row[0] = 0.0
    return row[(d[:, None] - d[None, :]) % n]


class SheetKernel:
    """Dense collocation matrices of the Birkhoff-Rott operator on a curve.

    ``tangential`` is the matrix of ``A(z) w = 2 BR(z, w) . z'``;
    ``normal_smooth`` gives ``BR . z'^perp`` up to the term ``-H(w)/2``.
    """

    def __init__(self, c: InterfaceCurve, guard: float = TOUCH_GUARD):
        n = c.n
        if n > DENSE_LIMIT:
            raise ValueError(f"dense sheet kernel limited to n <= {DENSE_LIMIT}, got {n}")
        self.curve = c
        self.n = n
        z = c.z
        self.dz = c.dz
        self.zeta = c.second_derivative() / c.dz  # diagonal limit of the remainder
        half = 0.5 * (z[:, None] - z[None, :])
        np.fill_diagonal(half, 1.0)
        s = np.sin(half)
        self._check_touch(np.abs(s), guard)
        cot = np.cos(half) / s
        np.fill_diagonal(cot, 0.0)
        self.sin = s  # unit diagonal
        self.cot = cot
        zc = self.dz[:, None] * cot
        self.tangential = zc.imag / n
        np.fill_diagonal(self.tangential, self.zeta.imag / n)
        self.normal_smooth = (zc.real - _grid_cot(n)) / (2 * n)
        np.fill_diagonal(self.normal_smooth, self.zeta.real / (2 * n))

    def _check_touch(self, abs_sin: np.ndarray, guard: float) -> None:
        n = self.n
        d = np.arange(n)
        band = np.abs((d[:, None] - d[None, :] + n // 2) % n - n // 2) <= 1
        masked = np.where(band, np.inf, abs_sin)
        k = int(np.argmin(masked))
        i, j = divmod(k, n)
        # |sin(w/2)| ~ |w|/2 near a (translated) coincidence
        if 2.0 * masked[i, j] < guard:
            raise CurveTouchError(i, j, 2.0 * masked[i, j])
        self.min_gap = float(2.0 * masked[i, j])

    def integral(self, omega: np.ndarray) -> np.ndarray:
        """``z'(a) * PV int w(b) cot((z(a) - z(b))/2) db`` at the nodes."""
        n = self.n
        rem = (self.dz[:, None] * self.cot - _grid_cot(n)) @ omega
        rem += self.zeta * omega
        return (2 * np.pi / n) * rem - 2 * np.pi * hilbert_values(omega)

    def br(self, omega: np.ndarray) -> np.ndarray:
        t = self.integral(omega)
        return np.conj(t / (4j * np.pi * self.dz))

    def apply(self, omega: np.ndarray) -> np.ndarray:
        return self.tangential @ omega

    def normal(self, omega: np.ndarray) -> np.ndarray:
        return self.normal_smooth @ omega - 0.5 * hilbert_values(omega)

    def even_block(self) -> np.ndarray:
        """Matrix of A(z) acting on even fields, in the half-grid unknowns.

        Unknowns are the samples at nodes ``0..n/2`` (a in [-pi, 0]); an even
        field is recovered by reflection.
        """
        n = self.n
        h = n // 2
        cols = self.tangential[: h + 1]
        out = cols[:, : h + 1].copy()
        # node j and node n - j carry the same even value
        out[:, 1:h] += cols[:, n - 1: h: -1]
        return out

    def csc2(self) -> np.ndarray:
        """``1/(2 sin^2((z_i - z_j)/2))`` off the diagonal, zero on it."""
        out = 0.5 / self.sin ** 2
        np.fill_diagonal(out, 0.0)
        return out


def _expand_even(half_values: np.ndarray, n: int) -> np.ndarray:
    h = n // 2
    full = np.empty(n)
    full[: h + 1] = half_values
    full[h + 1:] = half_values[h - 1: 0: -1]
    return full


def br_integral(c: InterfaceCurve, omega, kernel: SheetKernel | None = None) -> np.ndarray:
    """Birkhoff-Rott velocity at the curve nodes, as complex numbers."""
    kernel = kernel or SheetKernel(c)
    return kernel.br(_values(omega))


def sheet_operator_apply(c: InterfaceCurve, omega, kernel: SheetKernel | None = None) -> PeriodicField:
    """``A(z) w = 2 BR(z, w) . z'``."""
    kernel = kernel or SheetKernel(c)
    w = _values(omega)
    parity = omega.parity if isinstance(omega, PeriodicField) else "none"
    out = kernel.apply(w)
    if parity == "even" and c.symmetric:
        return PeriodicField.projected(out, "even")
    return PeriodicField(out, "none")


def normal_component(c: InterfaceCurve, omega, kernel: SheetKernel | None = None) -> PeriodicField:
    """``BR(z, w) . z'^perp``; vanishes on a streamline."""
    kernel = kernel or SheetKernel(c)
    return PeriodicField(kernel.normal(_values(omega)), "none")


def solve_omega(c: InterfaceCurve, rhs: float = 2.0, kernel: SheetKernel | None = None,
                rcond_min: float = 1e-13) -> PeriodicField:
    """Solve ``(1 + A(z)) w = 2`` for the even vorticity amplitude."""
    kernel = kernel or SheetKernel(c)
    n = kernel.n
    mat = np.eye(n // 2 + 1) + kernel.even_block()
    lu, piv = linalg.lu_factor(mat)
    anorm = np.linalg.norm(mat, 1)
    rcond = linalg.lapack.dgecon(lu, anorm, norm="1")[0]
    if rcond < rcond_min:
        raise SheetSolveError(f"1 + A(z) is numerically singular (rcond={rcond:.2e})", rcond)
    half = linalg.lu_solve((lu, piv), np.full(n // 2 + 1, rhs))
    omega = _expand_even(half, n)
    # one step of iterative refinement on the full grid
    resid = rhs - omega - kernel.apply(omega)
    omega = omega + _expand_even(linalg.lu_solve((lu, piv), symmetrize(resid, "even")[: n // 2 + 1]), n)
    return PeriodicField.projected(omega, "even")


def omega_residual(c: InterfaceCurve, omega, rhs: float = 2.0,
                   kernel: SheetKernel | None = None) -> float:
    kernel = kernel or SheetKernel(c)
    w = _values(omega)
    return float(np.max(np.abs(w + kernel.apply(w) - rhs)))


def spectral_radius(c: InterfaceCurve, kernel: SheetKernel | None = None) -> float:
    """Largest eigenvalue modulus of A(z) restricted to even fields."""
    kernel = kernel or SheetKernel(c)
    ev = linalg.eigvals(kernel.even_block())
    return float(np.max(np.abs(ev)))


def interface_velocities(c: InterfaceCurve, omega, kernel: SheetKernel | None = None):
    """One-sided limits ``(v1, v2)`` on the interface (upper, lower fluid)."""
    kernel = kernel or SheetKernel(c)
    w = _values(omega)
    br = kernel.br(w)
    jump = 0.5 * w * c.dz / np.abs(c.dz) ** 2
    return br - jump, br + jump


def dot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Euclidean dot product of planar vectors stored as complex numbers."""
    return np.real(u * np.conj(v))


# -- off-interface evaluation ------------------------------------------------

def _upsampled(c: InterfaceCurve, omega: np.ndarray, factor: int):
    if factor == 1:
        return c.z, omega
    n = c.n
    m = n * factor
    p = np.fft.fft(c.periodic_part())
    w = np.fft.fft(omega)

    def pad(coef):
        out = np.zeros(m, dtype=complex)
        h = n // 2
        out[:h] = coef[:h]
        out[-h + 1:] = coef[-h + 1:]
        out[h] = 0.5 * coef[h]
        out[-h] = 0.5 * coef[h]
        return np.fft.ifft(out) * factor

    s = c.start + c.period * np.arange(m) / m
    z = pad(p) + c.shift * (s - c.start) / c.period
    return z, pad(w).real


def _distances(z: np.ndarray, points: np.ndarray, shift) -> np.ndarray:
    d = np.full(points.shape, np.inf)
    for k in (-1, 0, 1):
        for lo in range(0, z.size, 4096):
            zz = z[lo:lo + 4096] + k * shift
            d = np.minimum(d, np.min(np.abs(points[:, None] - zz[None, :]), axis=1))
    return d


def interface_distance(c: InterfaceCurve, points) -> np.ndarray:
    """Distance from each point to the nearest curve node (any period)."""
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    shift = c.shift
    if shift != 0:
        # fold points into the period window centred on the curve
        k = np.round((points - np.mean(c.z)).real / np.real(shift))
        points = points - k * shift
    return _distances(c.z, points, shift)


def _evaluation_setup(c: InterfaceCurve, omega, points, digits: float):
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    w = _values(omega)
    spacing = float(np.max(np.abs(np.diff(c.z))))
    dist = interface_distance(c, points)
    if np.any(dist < spacing):
        k = int(np.argmin(dist))
        raise ValueError(f"point {points[k]} lies within one grid spacing of the interface")
    # trapezoid error decays like exp(-2 pi d / h); pick h to reach the target
    need = spacing * (digits * np.log(10) / (2 * np.pi)) / max(float(dist.min()), 1e-300)
    factor = 1
    while factor < need and factor < 64:
        factor *= 2
    z, wv = _upsampled(c, w, factor)
    return points, z, wv


def velocity_field(c: InterfaceCurve, omega, points, digits: float = 13.0) -> np.ndarray:
    """Velocity induced by the sheet at points off the interface.

    Returns ``u + i v`` with ``v = grad^perp psi``; the curve is upsampled
    spectrally so that the trapezoid rule reaches about ``digits`` digits.
    """
    points, z, w = _evaluation_setup(c, omega, points, digits)
    m = z.size
    out = np.empty(points.size, dtype=complex)
    for lo in range(0, points.size, 256):
        p = points[lo:lo + 256]
        k = 1.0 / np.tan(0.5 * (p[:, None] - z[None, :]))
        out[lo:lo + 256] = (k @ w) * (2 * np.pi / m)
    return np.conj(out / (4j * np.pi))


def stream_function_on_interface(c: InterfaceCurve, omega) -> np.ndarray:
    """``psi(z(a)) = (1/2 pi) int ln|sin((z(a) - z(b))/2)| w(b) db`` at the nodes.

    The logarithmic singularity is split off as ``ln|sin((a - b)/2)|`` and
    integrated exactly in Fourier space.
    """
    w = _values(omega)
    n = c.n
    z = c.z
    half = 0.5 * (z[:, None] - z[None, :])
    d = np.arange(n)
    grid_sin = np.abs(np.sin(np.pi * ((d[:, None] - d[None, :]) % n) / n))
    np.fill_diagonal(half, 1.0)
    np.fill_diagonal(grid_sin, 1.0)
    smooth = np.log(np.abs(np.sin(half)) / grid_sin)
    # |sin(z' d/2)| / |sin(d/2)| -> |z'| on the diagonal
    np.fill_diagonal(smooth, np.log(np.abs(c.dz)))
    part_smooth = smooth @ w / n
    coef = np.fft.rfft(w) / n
    k = np.arange(coef.size, dtype=float)
    mult = np.empty(coef.size)
    mult[0] = -np.log(2.0)
    mult[1:] = -0.5 / k[1:]
    part_log = np.fft.irfft(coef * mult * n, n)
    return part_smooth + part_log


def stream_function(c: InterfaceCurve, omega, points, digits: float = 13.0,
                    offset: float | None = None) -> np.ndarray:
    """Stream function at points off the interface, zero on the interface.

    ``offset`` is the interface value to subtract; by default it is the mean
    of :func:`stream_function_on_interface`.
    """
    if offset is None:
        offset = float(np.mean(stream_function_on_interface(c, omega)))
    points, z, w = _evaluation_setup(c, omega, points, digits)
    m = z.size
    out = np.empty(points.size)
    for lo in range(0, points.size, 256):
        p = points[lo:lo + 256]
        k = np.log(np.abs(np.sin(0.5 * (p[:, None] - z[None, :]))))
        out[lo:lo + 256] = (k @ w) / m
    return out - offset
