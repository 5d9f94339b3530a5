"""Uniform-grid Fourier machinery for real 2*pi-periodic functions.

Samples live on the nodes ``alpha_j = -pi + 2*pi*j/n``, so the reflection
``alpha -> -alpha`` maps node ``j`` to node ``(n - j) % n`` and parity can be
checked sample by sample.

The Hilbert transform uses the multiplier ``i*sgn(k)``, i.e.
``H sin(k a) = cos(k a)`` and ``H cos(k a) = -sin(k a)``.  With this choice
the boundary trace ``theta + i*H(theta)`` of a function analytic in the lower
half-plane is consistent with the Crapper family.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curve import InterfaceCurve

PARITIES = ("odd", "even", "none")

_PARITY_FLIP = {"odd": "even", "even": "odd", "none": "none"}


def grid(n: int) -> np.ndarray:
    """Nodes ``-pi + 2*pi*j/n`` for ``j = 0..n-1``."""
    return -np.pi + 2.0 * np.pi * np.arange(n) / n


def is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


def reflect(values: np.ndarray) -> np.ndarray:
    """Samples of ``f(-alpha)`` given samples of ``f(alpha)`` (axis 0)."""
    n = values.shape[0]
    return values[(-np.arange(n)) % n]


def symmetrize(values: np.ndarray, parity: str) -> np.ndarray:
    if parity == "odd":
        return 0.5 * (values - reflect(values))
    if parity == "even":
        return 0.5 * (values + reflect(values))
    return values


@dataclass(frozen=True)
class PeriodicField:
    """Real samples of a 2*pi-periodic function with a parity tag."""

    values: np.ndarray
    parity: str = "none"
    n: int = field(init=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("PeriodicField needs a 1-D array of samples")
        n = values.shape[0]
        if not is_power_of_two(n):
            raise ValueError(f"grid size must be a power of two, got {n}")
        if not np.all(np.isfinite(values)):
            raise ValueError("PeriodicField samples must be finite")
        if self.parity not in PARITIES:
            raise ValueError(f"unknown parity {self.parity!r}")
        if self.parity != "none":
            amp = max(np.max(np.abs(values)), 1.0)
            sign = -1.0 if self.parity == "odd" else 1.0
            defect = np.max(np.abs(values - sign * reflect(values)))
            if defect > 1e-12 * amp:
                raise ValueError(
                    f"samples are not {self.parity} (defect {defect:.3e})")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_function(cls, func, n: int, parity: str = "none") -> PeriodicField:
        vals = np.asarray(func(grid(n)), dtype=float)
        return cls(symmetrize(vals, parity), parity)

    @classmethod
    def projected(cls, values, parity: str) -> PeriodicField:
        """Build a field after projecting ``values`` onto the given parity."""
        return cls(symmetrize(np.asarray(values, dtype=float), parity), parity)

    @property
    def alpha(self) -> np.ndarray:
        return grid(self.n)

    def mean(self) -> float:
        return float(np.mean(self.values))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __add__(self, other):
        if isinstance(other, PeriodicField):
            parity = self.parity if self.parity == other.parity else "none"
            return PeriodicField(self.values + other.values, parity)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, PeriodicField):
            parity = self.parity if self.parity == other.parity else "none"
            return PeriodicField(self.values - other.values, parity)
        return NotImplemented

    def scaled(self, c: float) -> PeriodicField:
        return PeriodicField(c * self.values, self.parity)


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients ``c_k`` with ``f(a) = sum_k c_k exp(i k a)``.

    Only ``k = 0..n/2`` is stored; ``c_{-k} = conj(c_k)`` for real fields.
    """

    n: int
    coeffs: np.ndarray

    def full(self) -> tuple[np.ndarray, np.ndarray]:
        """Wavenumbers ``-n/2+1..n/2`` and the matching coefficients."""
        k = np.arange(-self.n // 2 + 1, self.n // 2 + 1)
        c = np.where(k >= 0, self.coeffs[np.abs(k)], np.conj(self.coeffs[np.abs(k)]))
        return k, c

    def to_field(self, parity: str = "none") -> PeriodicField:
        return PeriodicField.projected(_from_coeffs(self.coeffs, self.n), parity)


def _phase(n: int, axis_len: int | None = None) -> np.ndarray:
    m = n // 2 + 1 if axis_len is None else axis_len
    return (-1.0) ** np.arange(m)


def _to_coeffs(values: np.ndarray) -> np.ndarray:
    """Coefficients ``c_k``, ``k = 0..n/2``, along axis 0 (grid starts at -pi)."""
    n = values.shape[0]
    c = np.fft.rfft(values, axis=0) / n
    ph = _phase(n).reshape((-1,) + (1,) * (values.ndim - 1))
    return c * ph


def _from_coeffs(coeffs: np.ndarray, n: int) -> np.ndarray:
    ph = _phase(n, coeffs.shape[0]).reshape((-1,) + (1,) * (coeffs.ndim - 1))
    return np.fft.irfft(coeffs * ph * n, n, axis=0)


def spectrum(f: PeriodicField) -> Spectrum:
    return Spectrum(f.n, _to_coeffs(f.values))


def _multiplier_apply(values: np.ndarray, mult: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    c = np.fft.rfft(values, axis=0)
    c *= mult.reshape((-1,) + (1,) * (values.ndim - 1))
    return np.fft.irfft(c, n, axis=0)


def _hilbert_multiplier(n: int) -> np.ndarray:
    m = np.full(n // 2 + 1, 1j)
    m[0] = 0.0
    m[-1] = 0.0
    return m


def _derivative_multiplier(n: int) -> np.ndarray:
    m = 1j * np.arange(n // 2 + 1, dtype=float)
    m[-1] = 0.0
    return m


def hilbert_values(values: np.ndarray) -> np.ndarray:
    """Hilbert transform of raw samples along axis 0 (real or complex)."""
    if np.iscomplexobj(values):
        return hilbert_values(values.real) + 1j * hilbert_values(values.imag)
    return _multiplier_apply(values, _hilbert_multiplier(values.shape[0]))


def derivative_values(values: np.ndarray) -> np.ndarray:
    """Spectral derivative of raw samples along axis 0 (real or complex)."""
    if np.iscomplexobj(values):
        return derivative_values(values.real) + 1j * derivative_values(values.imag)
    return _multiplier_apply(values, _derivative_multiplier(values.shape[0]))


def antiderivative_values(values: np.ndarray) -> np.ndarray:
    """Zero-mean periodic antiderivative of the non-constant part of ``values``."""
    if np.iscomplexobj(values):
        return (antiderivative_values(values.real)
                + 1j * antiderivative_values(values.imag))
    n = values.shape[0]
    k = np.arange(n // 2 + 1, dtype=float)
    m = np.zeros(n // 2 + 1, dtype=complex)
    m[1:-1] = 1.0 / (1j * k[1:-1])
    return _multiplier_apply(values, m)


def hilbert(f: PeriodicField) -> PeriodicField:
    """Hilbert transform; the mean and the Nyquist mode are annihilated."""
    return PeriodicField.projected(hilbert_values(f.values), _PARITY_FLIP[f.parity])


def derivative(f: PeriodicField) -> PeriodicField:
    return PeriodicField.projected(derivative_values(f.values), _PARITY_FLIP[f.parity])


def inner(f: PeriodicField, g: PeriodicField) -> float:
    """L2 pairing on [-pi, pi] by the trapezoidal rule."""
    if f.n != g.n:
        raise ValueError(f"size mismatch: {f.n} vs {g.n}")
    return float(2.0 * np.pi * np.mean(f.values * g.values))


def resample(f: PeriodicField, n_new: int) -> PeriodicField:
    """Fourier pad or truncate to ``n_new`` points.

    Upsampling splits the source Nyquist coefficient evenly between +-n/2.
    Downsampling keeps ``|k| < n_new/2`` and drops the new Nyquist mode.
    """
    if not is_power_of_two(n_new):
        raise ValueError(f"grid size must be a power of two, got {n_new}")
    c = _to_coeffs(f.values)
    out = np.zeros(n_new // 2 + 1, dtype=complex)
    if n_new >= f.n:
        out[: f.n // 2] = c[: f.n // 2]
        if n_new > f.n:
            # real-valued Nyquist mode cos(n a/2) shares its weight with k = -n/2
            out[f.n // 2] = 0.5 * c[f.n // 2]
        else:
            out[f.n // 2] = c[f.n // 2]
    else:
        out[: n_new // 2] = c[: n_new // 2]
    return PeriodicField.projected(_from_coeffs(out, n_new), f.parity)


class TrigInterpolant:
    """Trigonometric interpolant of samples at ``start + period*j/n``.

    Values may be complex.  Evaluation is a direct sum, O(n) per point,
    done in blocks to bound memory.
    """

    def __init__(self, values, period: float = 2.0 * np.pi, start: float = -np.pi):
        values = np.asarray(values)
        n = values.shape[0]
        self.n = n
        self.period = period
        self.start = start
        self.real = not np.iscomplexobj(values)
        c = np.fft.fft(values) / n
        k = np.fft.fftfreq(n, 1.0 / n)
        nyq = n // 2
        k[nyq] = nyq
        # Nyquist term shared between +-n/2 so real data interpolates to real values
        c_nyq = 0.5 * c[nyq]
        c[nyq] = c_nyq
        self.k = np.append(k, -nyq) * (2.0 * np.pi / period)
        self.c = np.append(c, c_nyq)

    def __call__(self, s, order: int = 0, block: int = 256):
        s = np.atleast_1d(np.asarray(s, dtype=float)) - self.start
        out = np.empty((order + 1, s.size), dtype=complex)
        weights = [self.c * (1j * self.k) ** d for d in range(order + 1)]
        w = np.stack(weights, axis=1)
        for lo in range(0, s.size, block):
            e = np.exp(1j * np.outer(s[lo:lo + block], self.k))
            out[:, lo:lo + block] = (e @ w).T
        if self.real:
            out = out.real
        return out[0] if order == 0 else tuple(out)


def interpolate(values, alpha, derivatives: int = 0):
    """Evaluate the interpolant of grid samples at ``alpha``.

    Returns ``(f, f', ...)`` up to the requested derivative order.
    """
    res = TrigInterpolant(values)(alpha, derivatives)
    return (res,) if derivatives == 0 else res


def sine_coefficients(f: PeriodicField, m: int) -> np.ndarray:
    """``b_k`` for ``f = sum_{k=1..m} b_k sin(k a)``."""
    c = _to_coeffs(f.values)
    return -2.0 * c[1 : m + 1].imag


def cosine_coefficients(f: PeriodicField, m: int) -> np.ndarray:
    """``a_k`` for ``f = a_0 + sum_{k=1..m} a_k cos(k a)``."""
    c = _to_coeffs(f.values)
    a = 2.0 * c[: m + 1].real
    a[0] = c[0].real
    return a


def from_sine(b: np.ndarray, n: int) -> PeriodicField:
    c = np.zeros(n // 2 + 1, dtype=complex)
    c[1 : len(b) + 1] = -0.5j * np.asarray(b)
    return PeriodicField.projected(_from_coeffs(c, n), "odd")


def from_cosine(a: np.ndarray, n: int) -> PeriodicField:
    c = np.zeros(n // 2 + 1, dtype=complex)
    c[: len(a)] = 0.5 * np.asarray(a)
    c[0] = a[0]
    return PeriodicField.projected(_from_coeffs(c, n), "even")


def sine_basis(n: int, m: int) -> np.ndarray:
    """Grid samples of ``sin(k a)``, ``k = 1..m``, as columns."""
    return np.sin(np.outer(grid(n), np.arange(1, m + 1)))


def cosine_basis(n: int, m: int) -> np.ndarray:
    """Grid samples of ``cos(k a)``, ``k = 0..m``, as columns."""
    return np.cos(np.outer(grid(n), np.arange(m + 1)))


def cosine_projector(n: int, m: int) -> np.ndarray:
    """Matrix mapping grid samples to cosine coefficients ``a_0..a_m``."""
    p = 2.0 / n * cosine_basis(n, m).T
    p[0] *= 0.5
    return p


def integrate_tangent(dz: np.ndarray) -> np.ndarray:
    """Curve samples from tangent samples ``dz`` (axis 0), normalized.

    The result is ``m*(a + pi) + P(a) + const`` where ``m`` is the mean of
    ``dz``, ``P`` the zero-mean antiderivative of ``dz - m``, and the real
    constant makes ``Re z(0) = 0``.  Linear in ``dz``.
    """
    n = dz.shape[0]
    a = grid(n).reshape((-1,) + (1,) * (dz.ndim - 1))
    m = np.mean(dz, axis=0)
    z = m * (a + np.pi) + antiderivative_values(dz - m)
    return z - z[n // 2].real


def curve_from_theta(theta: PeriodicField) -> InterfaceCurve:
    """Interface ``z(a) = int_{-pi}^{a} exp(-H theta + i theta)`` for odd theta."""
    if theta.parity != "odd":
        raise ValueError("curve_from_theta needs an odd angle field")
    tau = hilbert_values(theta.values)
    dz = np.exp(-tau + 1j * theta.values)
    z = integrate_tangent(dz)
    return InterfaceCurve(z=z, dz=dz, symmetric=True)


def tangent_mean(theta: PeriodicField, sign: int = -1) -> complex:
    """Mean of ``exp(sign * H theta + i theta)``; equals 1 for odd theta."""
    tau = hilbert_values(theta.values)
    return complex(np.mean(np.exp(sign * tau + 1j * theta.values)))
