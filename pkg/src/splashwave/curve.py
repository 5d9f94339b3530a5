"""The interface curve container shared by the geometry and vortex code."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class InterfaceCurve:
    """Samples ``z_j = z(s_j)`` of a planar curve at uniform parameter nodes.

    The nodes are ``s_j = start + period*j/n``.  A pseudo-periodic interface
    satisfies ``z(s + period) = z(s) + shift``; ``shift = 0`` gives a closed
    curve (used for test fixtures only).  ``dz`` holds ``dz/ds`` when known
    in closed form; otherwise it is obtained spectrally.
    """

    z: np.ndarray
    dz: np.ndarray | None = None
    period: float = 2.0 * np.pi
    shift: complex = 2.0 * np.pi
    start: float = -np.pi
    symmetric: bool = False

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        if z.ndim != 1 or z.shape[0] < 4:
            raise ValueError("InterfaceCurve needs at least 4 samples")
        if not np.all(np.isfinite(z)):
            raise ValueError("curve samples must be finite")
        object.__setattr__(self, "z", z)
        if self.dz is None:
            object.__setattr__(self, "dz", self._spectral_derivative(z))
        else:
            dz = np.asarray(self.dz, dtype=complex)
            if dz.shape != z.shape:
                raise ValueError("tangent samples must match positions")
            object.__setattr__(self, "dz", dz)

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def alpha(self) -> np.ndarray:
        return self.start + self.period * np.arange(self.n) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.z.real

    @property
    def y(self) -> np.ndarray:
        return self.z.imag

    def periodic_part(self) -> np.ndarray:
        """``z(s) - shift*(s - start)/period``; a genuinely periodic sequence."""
        return self.z - self.shift * (self.alpha - self.start) / self.period

    def _spectral_derivative(self, z: np.ndarray) -> np.ndarray:
        n = z.shape[0]
        s = self.start + self.period * np.arange(n) / n
        p = z - self.shift * (s - self.start) / self.period
        k = np.fft.fftfreq(n, 1.0 / n)
        k[n // 2] = 0.0
        dp = np.fft.ifft(1j * k * np.fft.fft(p)) * (2.0 * np.pi / self.period)
        return dp + self.shift / self.period

    def second_derivative(self) -> np.ndarray:
        n = self.n
        k = np.fft.fftfreq(n, 1.0 / n)
        k[n // 2] = 0.0
        scale = 2.0 * np.pi / self.period
        return np.fft.ifft(1j * k * np.fft.fft(self.dz)) * scale

    def speed(self) -> np.ndarray:
        return np.abs(self.dz)

    def periodicity_defect(self) -> float:
        """Spectral tail of the periodic part, relative to its size.

        A jump between ``z(start + period)`` and ``z(start) + shift`` shows up
        as slowly decaying coefficients; a smooth pseudo-periodic curve has a
        tail at rounding level.
        """
        c = np.abs(np.fft.fft(self.periodic_part())) / self.n
        n = self.n
        k = np.abs(np.fft.fftfreq(n, 1.0 / n))
        tail = c[k >= 3 * n // 8]
        return float(tail.max() / max(c.max(), 1.0)) if tail.size else 0.0

    def translated(self, dx: float) -> InterfaceCurve:
        # mirror symmetry about the lines x = k*pi survives only shifts by k*pi
        k = dx / np.pi
        sym = self.symmetric and abs(k - round(k)) < 1e-12
        return InterfaceCurve(self.z + dx, self.dz, self.period, self.shift,
                              self.start, sym)

    def points(self, periods=(0,)) -> np.ndarray:
        """Concatenated samples of the curve over several periods."""
        return np.concatenate([self.z + k * self.shift for k in periods])
