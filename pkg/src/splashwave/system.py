"""Residual system for perturbed Crapper waves and its Newton solver.

Unknowns are the odd angle ``theta`` (sine coefficients), the even
vorticity amplitude ``omega`` (cosine coefficients) and the Bernoulli
perturbation ``kappa``.  With ``tau = H theta`` and ``z`` the curve built from
``z' = exp(-tau + i theta)``:

    G1 = q(1 + eps/2) theta' - sinh tau - g e^{-tau} Im z
         - kappa e^{-tau} + (eps/4) e^{tau} omega (omega - 2)
    G2 = omega + A(z) omega - 2

At ``eps = 0`` the first equation does not involve ``omega`` and the system
is block triangular: ``(theta, kappa)`` come from G1 alone and ``omega`` from
the linear sheet solve.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import crapper, geometry, vortex
from .curve import InterfaceCurve
from .spectral import (PeriodicField, cosine_basis, cosine_projector, curve_from_theta,
                       derivative_values, from_cosine, from_sine, hilbert_values, inner,
                       integrate_tangent, sine_basis, sine_coefficients, cosine_coefficients)

logger = logging.getLogger(__name__)

MAX_CROSSING_REJECTIONS = 8
MAX_BISECTIONS = 6


class NewtonError(RuntimeError):
    """Newton failed; ``state`` holds the last accepted iterate."""

    def __init__(self, message: str, state: SolveState | None = None):
        super().__init__(message)
        self.state = state


class ContinuationError(RuntimeError):
    def __init__(self, message: str, branch: list):
        super().__init__(message)
        self.branch = branch


class SplashSearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class WaveParams:
    A: float
    eps: float = 0.0
    g: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if not abs(self.A) < 1.0:
            raise ValueError(f"need |A| < 1, got A={self.A}")
        if not self.eps >= 0.0:
            raise ValueError(f"need eps >= 0, got eps={self.eps}")
        for name in ("A", "eps", "g", "kappa"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def q(self) -> float:
        return crapper.q_of_A(self.A)

    def replace(self, **kw) -> WaveParams:
        return dataclasses.replace(self, **kw)

    def as_dict(self) -> dict:
        return {"A": self.A, "eps": self.eps, "g": self.g, "kappa": self.kappa, "q": self.q}


def params_from_physical(rho1: float, rho2: float, sigma: float, g: float) -> WaveParams:
    """Nondimensional parameters from densities, surface tension and gravity."""
    if not rho2 > 0:
        raise ValueError("rho2 must be positive")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if rho1 < 0:
        raise ValueError("rho1 must be nonnegative")
    if rho1 >= rho2:
        raise ValueError("need rho1 < rho2 (the lower fluid is the heavier one)")
    eps = 2.0 * rho1 / (rho2 - rho1)
    return WaveParams(A=crapper.A_of_q(sigma / rho2), eps=eps, g=g)


@dataclass
class SolveState:
    theta: PeriodicField
    omega: PeriodicField | None
    kappa: float
    params: WaveParams
    m: int
    residuals: dict = field(default_factory=dict)
    log: list = field(default_factory=list)
    converged: bool = False

    @property
    def n(self) -> int:
        return self.theta.n

    @property
    def curve(self) -> InterfaceCurve:
        return curve_from_theta(self.theta)

    @property
    def tau(self) -> np.ndarray:
        return hilbert_values(self.theta.values)


# -- residuals ---------------------------------------------------------------

def _theta_field(theta) -> PeriodicField:
    if isinstance(theta, PeriodicField):
        return theta
    return PeriodicField.projected(np.asarray(theta, dtype=float), "odd")


def _omega_values(omega, n: int) -> np.ndarray:
    if omega is None:
        return np.full(n, 2.0)
    if isinstance(omega, PeriodicField):
        return omega.values
    w = np.asarray(omega, dtype=float)
    return np.full(n, float(w)) if w.ndim == 0 else w


def _g1_values(theta: PeriodicField, omega: np.ndarray, q: float, eps: float, g: float,
               kappa: float, z: np.ndarray | None = None) -> np.ndarray:
    t = theta.values
    tau = hilbert_values(t)
    out = q * (1.0 + 0.5 * eps) * derivative_values(t) - np.sinh(tau) - kappa * np.exp(-tau)
    if g != 0.0:
        if z is None:
            z = curve_from_theta(theta).z
        out -= g * np.exp(-tau) * z.imag
    if eps != 0.0:
        out += 0.25 * eps * np.exp(tau) * omega * (omega - 2.0)
    return out


def residual_G1(theta, omega, params: WaveParams, kappa: float | None = None) -> PeriodicField:
    theta = _theta_field(theta)
    kappa = params.kappa if kappa is None else kappa
    w = _omega_values(omega, theta.n)
    return PeriodicField.projected(_g1_values(theta, w, params.q, params.eps, params.g, kappa), "even")


def residual_G2(theta, omega, params: WaveParams | None = None,
                kernel: vortex.SheetKernel | None = None) -> PeriodicField:
    theta = _theta_field(theta)
    w = _omega_values(omega, theta.n)
    kernel = kernel or vortex.SheetKernel(curve_from_theta(theta))
    return PeriodicField.projected(w + kernel.apply(w) - 2.0, "even")


def residual_normal(theta, omega, kernel: vortex.SheetKernel | None = None) -> PeriodicField:
    """``BR . z'^perp``, the kinematic equation left out of the system."""
    theta = _theta_field(theta)
    kernel = kernel or vortex.SheetKernel(curve_from_theta(theta))
    return PeriodicField(kernel.normal(_omega_values(omega, theta.n)), "none")


def gamma_apply(theta_base, u, q: float) -> PeriodicField:
    """``q u' - cosh(H theta_base) H u``: linearized capillary operator."""
    theta_base = _theta_field(theta_base)
    u = _theta_field(u)
    tau = hilbert_values(theta_base.values)
    out = q * derivative_values(u.values) - np.cosh(tau) * hilbert_values(u.values)
    return PeriodicField.projected(out, "even")


def orthogonality_check(theta, q: float = 1.0) -> float:
    """``<G1(theta; eps=g=kappa=0), cos theta>``; zero for every odd theta."""
    theta = _theta_field(theta)
    g1 = _g1_values(theta, np.full(theta.n, 2.0), q, 0.0, 0.0, 0.0)
    return inner(PeriodicField(g1), PeriodicField(np.cos(theta.values)))


def theta_deviation(state: SolveState) -> float:
    """Sup-norm distance of ``theta`` from the Crapper angle at the same A."""
    theta_a, _ = crapper.theta_tau(state.params.A, state.n)
    return float(np.max(np.abs(state.theta.values - theta_a.values)))


# -- seeds and resolution ----------------------------------------------------

def crapper_state(A: float, n: int = 512, m: int | None = None, omega: bool = True) -> SolveState:
    """The exact pure-capillary state at amplitude A, truncated to m modes."""
    m = m or n // 4
    theta_a, _ = crapper.theta_tau(A, n)
    theta = from_sine(sine_coefficients(theta_a, m), n)
    w = None
    if omega:
        c = curve_from_theta(theta)
        if not geometry.has_self_intersection(c):
            w = vortex.solve_omega(c)
    return SolveState(theta, w, 0.0, WaveParams(A), m, converged=True)


def suggested_resolution(A: float, two_fluid: bool, tol: float = 1e-11, n_max: int = 2048) -> int:
    """Grid size resolving theta_A and, for two fluids, the sheet quadrature.

    The sheet check doubles n until the kinematic residual of the Crapper
    state (zero in exact arithmetic) drops below ``tol``.
    """
    n = max(4 * crapper.resolution(A, 1e-15), 256)
    if not two_fluid:
        return min(n, n_max)
    n = max(n, 512)
    while n < n_max:
        c = crapper.curve(A, n)
        if not geometry.has_self_intersection(c):
            k = vortex.SheetKernel(c)
            w = vortex.solve_omega(c, kernel=k)
            if np.max(np.abs(k.normal(w.values))) < tol:
                break
        n *= 2
    return n


# -- linearization -----------------------------------------------------------

class _Linearization:
    """Grid-level Jacobian columns at a state, projected to coefficients."""

    def __init__(self, theta: PeriodicField, omega: np.ndarray, kappa: float,
                 params: WaveParams, m: int):
        n = theta.n
        self.n, self.m = n, m
        self.params = params
        self.theta = theta
        self.omega = omega
        self.kappa = kappa
        self.tau = hilbert_values(theta.values)
        self.curve = curve_from_theta(theta)
        self.proj = cosine_projector(n, m)
        self.U = sine_basis(n, m)
        cos = cosine_basis(n, m)
        self.V = cos
        self.HU = cos[:, 1:]
        self.dU = self.HU * np.arange(1, m + 1)
        self.dz_cols = self.curve.dz[:, None] * (-self.HU + 1j * self.U)
        self.z_cols = integrate_tangent(self.dz_cols)

    def g1_theta(self) -> np.ndarray:
        p = self.params
        tau, w, z = self.tau, self.omega, self.curve.z
        et, emt = np.exp(tau), np.exp(-tau)
        coef_h = -np.cosh(tau) + self.kappa * emt + p.g * emt * z.imag
        if p.eps:
            coef_h = coef_h + 0.25 * p.eps * et * w * (w - 2.0)
        cols = p.q * (1 + 0.5 * p.eps) * self.dU + coef_h[:, None] * self.HU
        if p.g:
            cols = cols - (p.g * emt)[:, None] * self.z_cols.imag
        return self.proj @ cols

    def g1_omega(self) -> np.ndarray:
        p = self.params
        if not p.eps:
            return np.zeros((self.m + 1, self.m + 1))
        d = 0.25 * p.eps * np.exp(self.tau) * (2.0 * self.omega - 2.0)
        return self.proj @ (d[:, None] * self.V)

    def g1_kappa(self) -> np.ndarray:
        return self.proj @ (-np.exp(-self.tau))

    def g2_blocks(self, kernel: vortex.SheetKernel) -> tuple[np.ndarray, np.ndarray]:
        n, w = self.n, self.omega
        dz = self.curve.dz
        csc2 = kernel.csc2()
        cw = kernel.cot @ w
        ew = csc2 @ w
        zc = self.z_cols
        inner_ = zc * ew[:, None] - csc2 @ (zc * w[:, None])
        d_theta = (np.imag(self.dz_cols * cw[:, None]) - np.imag(dz[:, None] * inner_)) / n
        d_theta += self.dU * (w / n)[:, None]
        d_omega = self.V + kernel.tangential @ self.V
        return self.proj @ d_theta, self.proj @ d_omega


def _pack(theta: PeriodicField, omega, kappa: float, m: int, two_fluid: bool) -> np.ndarray:
    parts = [sine_coefficients(theta, m)]
    if two_fluid:
        parts.append(cosine_coefficients(omega, m))
    parts.append([kappa])
    return np.concatenate(parts)


def _unpack(x: np.ndarray, n: int, m: int, two_fluid: bool):
    theta = from_sine(x[:m], n)
    omega = from_cosine(x[m:2 * m + 1], n) if two_fluid else None
    return theta, omega, float(x[-1])


def _residual_vector(theta, omega, kappa, params, m, two_fluid, check_crossing=False):
    """Coefficient residual and grid diagnostics; raises on a bad curve."""
    c = curve_from_theta(theta)
    if check_crossing and geometry.has_self_intersection(c):
        raise vortex.CurveTouchError(-1, -1, 0.0)
    w = omega.values if two_fluid else np.full(theta.n, 2.0)
    g1 = _g1_values(theta, w, params.q, params.eps, params.g, kappa, z=c.z)
    proj = cosine_projector(theta.n, m)
    parts = [proj @ g1]
    info = {"G1": float(np.max(np.abs(g1)))}
    kernel = None
    if two_fluid:
        kernel = vortex.SheetKernel(c)
        g2 = w + kernel.apply(w) - 2.0
        parts.append(proj @ g2)
        info["G2"] = float(np.max(np.abs(g2)))
    return np.concatenate(parts), info, kernel


def assemble_jacobian(state: SolveState, params: WaveParams | None = None,
                      method: str = "analytic", two_fluid: bool = True) -> np.ndarray:
    """Jacobian over (theta sine coefficients, omega cosine coefficients, kappa).

    Rows are the cosine coefficients ``0..m`` of G1 then of G2.  ``method``
    selects analytic theta-columns or forward differences with step
    ``1e-7 (1 + |b_k|)``; the omega and kappa columns are always analytic.
    With ``two_fluid=False`` only the G1 rows and the (theta, kappa) columns
    are returned.
    """
    params = params or state.params
    m, n = state.m, state.n
    if two_fluid and state.omega is None:
        raise ValueError("state has no vorticity amplitude")
    w = _omega_values(state.omega, n)
    lin = _Linearization(state.theta, w, state.kappa, params, m)
    kernel = vortex.SheetKernel(lin.curve) if two_fluid else None
    if method == "analytic":
        j11 = lin.g1_theta()
        j21, j22 = lin.g2_blocks(kernel) if two_fluid else (None, None)
    elif method == "fd":
        j11, j21 = _fd_theta_columns(state, params, two_fluid)
        j22 = lin.g2_blocks(kernel)[1] if two_fluid else None
    else:
        raise ValueError(f"unknown jacobian method {method!r}")
    jk = lin.g1_kappa()
    if not two_fluid:
        return np.column_stack([j11, jk])
    top = np.hstack([j11, lin.g1_omega(), jk[:, None]])
    bottom = np.hstack([j21, j22, np.zeros((m + 1, 1))])
    return np.vstack([top, bottom])


def _fd_theta_columns(state: SolveState, params: WaveParams, two_fluid: bool):
    m, n = state.m, state.n
    b = sine_coefficients(state.theta, m)
    base, _, _ = _residual_vector(state.theta, state.omega, state.kappa, params, m, two_fluid)
    cols = np.empty((base.size, m))
    for k in range(m):
        h = 1e-7 * (1.0 + abs(b[k]))
        bk = b.copy()
        bk[k] += h
        f, _, _ = _residual_vector(from_sine(bk, n), state.omega, state.kappa, params, m, two_fluid)
        cols[:, k] = (f - base) / h
    if two_fluid:
        return cols[: m + 1], cols[m + 1:]
    return cols, None


# -- Newton ------------------------------------------------------------------

def _finish(theta, omega, kappa, params, m, two_fluid, log, tol, need_omega=True) -> SolveState:
    c = curve_from_theta(theta)
    w = omega.values if two_fluid else np.full(theta.n, 2.0)
    g1 = _g1_values(theta, w, params.q, params.eps, params.g, kappa, z=c.z)
    res = {"G1": float(np.max(np.abs(g1))), "G2": float("nan"), "normal": float("nan")}
    if not two_fluid and need_omega:
        omega = None
        if not geometry.has_self_intersection(c):
            try:
                omega = vortex.solve_omega(c)
            except (vortex.CurveTouchError, vortex.SheetSolveError) as exc:
                logger.warning("vorticity solve skipped: %s", exc)
    if omega is not None:
        try:
            kernel = vortex.SheetKernel(c)
            res["G2"] = float(np.max(np.abs(omega.values + kernel.apply(omega.values) - 2.0)))
            res["normal"] = float(np.max(np.abs(kernel.normal(omega.values))))
        except vortex.CurveTouchError:
            pass
    total = res["G1"] + (res["G2"] if math.isfinite(res["G2"]) else 0.0)
    return SolveState(theta, omega, kappa, params.replace(kappa=kappa), m, res, log,
                      converged=total < tol)


def newton_solve(initial: SolveState | None, params: WaveParams, tol: float = 1e-10,
                 max_iter: int = 25, n: int | None = None, m: int | None = None,
                 jacobian: str = "analytic", allow_crossing: bool = False,
                 need_omega: bool = True) -> SolveState:
    """Damped Newton on the kappa-augmented system.

    The initial state defaults to the Crapper state at ``params.A``.  Steps
    producing a self-crossing curve are halved (unless ``allow_crossing``),
    with a hard failure after 8 such rejections.  At ``eps = 0`` only the
    (theta, kappa) block is iterated and omega is obtained afterwards from
    the linear sheet solve.
    """
    if initial is None:
        n = n or suggested_resolution(params.A, params.eps > 0)
        initial = crapper_state(params.A, n, m, omega=params.eps > 0)
    n = initial.n
    m = initial.m
    two_fluid = params.eps > 0
    omega0 = initial.omega
    if two_fluid and omega0 is None:
        omega0 = vortex.solve_omega(initial.curve)
    x = _pack(initial.theta, omega0, initial.kappa, m, two_fluid)
    theta, omega, kappa = _unpack(x, n, m, two_fluid)
    check = two_fluid or not allow_crossing
    try:
        F, info, kernel = _residual_vector(theta, omega, kappa, params, m, two_fluid, check)
    except vortex.CurveTouchError as exc:
        raise NewtonError(f"initial curve is not simple: {exc}", initial) from exc
    log = []
    last_good = initial
    for it in range(max_iter + 1):
        total = info["G1"] + info.get("G2", 0.0)
        log.append({"iter": it, "G1": info["G1"], "G2": info.get("G2"), "coef_norm": float(np.linalg.norm(F))})
        if total < tol:
            return _finish(theta, omega, kappa, params, m, two_fluid, log, tol, need_omega)
        if it == max_iter:
            break
        lin = _Linearization(theta, omega.values if two_fluid else np.full(n, 2.0), kappa, params, m)
        if two_fluid:
            j21, j22 = lin.g2_blocks(kernel)
            J = np.vstack([np.hstack([lin.g1_theta(), lin.g1_omega(), lin.g1_kappa()[:, None]]),
                           np.hstack([j21, j22, np.zeros((m + 1, 1))])])
        else:
            J = np.column_stack([lin.g1_theta(), lin.g1_kappa()])
        if jacobian == "fd":
            st = SolveState(theta, omega, kappa, params, m)
            J = assemble_jacobian(st, params, "fd", two_fluid)
        try:
            dx = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            raise NewtonError(f"singular Jacobian at iteration {it}", last_good) from exc
        fnorm = np.linalg.norm(F)
        lam, rejections = 1.0, 0
        while True:
            trial = x + lam * dx
            t_theta, t_omega, t_kappa = _unpack(trial, n, m, two_fluid)
            try:
                F_new, info_new, k_new = _residual_vector(t_theta, t_omega, t_kappa, params, m,
                                                         two_fluid, check)
            except vortex.CurveTouchError:
                rejections += 1
                if rejections > MAX_CROSSING_REJECTIONS:
                    raise NewtonError("iterates keep producing self-crossing curves", last_good)
                lam *= 0.5
                continue
            if np.linalg.norm(F_new) <= (1.0 - 1e-4 * lam) * fnorm:
                break
            lam *= 0.5
            if lam < 2.0 ** -20:
                raise NewtonError(f"line search failed at iteration {it} "
                                  f"(residual {total:.3e})", last_good)
        x, F, info, kernel = trial, F_new, info_new, k_new
        theta, omega, kappa = t_theta, t_omega, t_kappa
        log[-1]["step"] = lam
        last_good = SolveState(theta, omega, kappa, params.replace(kappa=kappa), m, dict(info), list(log))
    raise NewtonError(f"no convergence in {max_iter} iterations (residual {total:.3e})", last_good)


# -- kappa derivative --------------------------------------------------------

def kappa_derivative_check(A: float, n: int = 256, h: float = 1e-4, tol: float = 1e-13) -> float:
    """Finite-difference ``d/dkappa <cos theta_A, G1(Theta(kappa); kappa)>``.

    ``Theta(kappa)`` solves the equation with the ``cos theta_A`` component of
    G1 removed (a least-squares Gauss-Newton over sine modes).  The value is
    ``-2 pi`` up to the differencing error.
    """
    if A >= crapper.splash_amplitude():
        raise ValueError("kappa_derivative_check needs A below the splash amplitude")
    m = n // 4
    params = WaveParams(A)
    base = crapper_state(A, n, m, omega=False).theta
    c = np.cos(base.values)
    cc = np.dot(c, c)

    def project(v):
        return v - np.outer(c, c @ v) / cc if v.ndim == 2 else v - c * (c @ v) / cc

    proj = cosine_projector(n, m)

    def reduced(kappa):
        theta = base
        for _ in range(30):
            g1 = _g1_values(theta, np.full(n, 2.0), params.q, 0.0, 0.0, kappa)
            r = proj @ project(g1)
            if np.max(np.abs(project(g1))) < tol:
                break
            lin = _Linearization(theta, np.full(n, 2.0), kappa, params, m)
            cols = params.q * lin.dU + (-np.cosh(lin.tau) + kappa * np.exp(-lin.tau))[:, None] * lin.HU
            J = proj @ project(cols)
            step = np.linalg.lstsq(J, -r, rcond=None)[0]
            theta = from_sine(sine_coefficients(theta, m) + step, n)
        else:
            raise NewtonError(f"projected solve did not converge for kappa={kappa}")
        g1 = _g1_values(theta, np.full(n, 2.0), params.q, 0.0, 0.0, kappa)
        return inner(PeriodicField(c), PeriodicField(g1))

    return (reduced(h) - reduced(-h)) / (2.0 * h)


# -- continuation ------------------------------------------------------------

def _interpolate(p0: WaveParams, p1: WaveParams, t: float) -> WaveParams:
    return WaveParams(A=p0.A + t * (p1.A - p0.A), eps=p0.eps + t * (p1.eps - p0.eps),
                      g=p0.g + t * (p1.g - p0.g), kappa=p1.kappa)


def tangent_predictor(state: SolveState, target: WaveParams) -> SolveState:
    """Euler step ``x - J^{-1} (dF/dp) (target - p)`` along the solution branch.

    Newton started directly from ``state`` linearizes in q, which is
    quadratic in A near the flat state and overshoots onto the mirrored
    branch ``-theta``; stepping along the tangent in the parameter itself
    avoids that.
    """
    two_fluid = target.eps > 0
    m, n = state.m, state.n
    cur = state.params.replace(kappa=state.kappa)
    omega = state.omega
    if two_fluid and omega is None:
        omega = vortex.solve_omega(state.curve)
    x = _pack(state.theta, omega, state.kappa, m, two_fluid)
    base = SolveState(state.theta, omega, state.kappa, cur, m)
    J = assemble_jacobian(base, cur, two_fluid=two_fluid)
    # forward difference: eps and g enter linearly and eps must stay >= 0
    h = 1e-4
    f_step = _residual_vector(state.theta, omega, state.kappa, _interpolate(cur, target, h), m, two_fluid)[0]
    f_here = _residual_vector(state.theta, omega, state.kappa, cur, m, two_fluid)[0]
    dx = np.linalg.solve(J, -(f_step - f_here) / h)
    theta, w, kappa = _unpack(x + dx, n, m, two_fluid)
    return SolveState(theta, w if two_fluid else state.omega, kappa, cur, m)


def continuation(schedule, seed: SolveState, tol: float = 1e-10, predictor: bool = True,
                 **newton_kw) -> list[SolveState]:
    """Natural-parameter continuation along ``schedule``.

    Each converged state seeds the next target through a tangent predictor;
    a failed step is split in half, recursively, at most six times.
    """
    branch: list[SolveState] = []
    state = seed

    def advance(state, target, depth):
        try:
            start = state
            if predictor:
                try:
                    start = tangent_predictor(state, target)
                except (np.linalg.LinAlgError, vortex.CurveTouchError, vortex.SheetSolveError):
                    start = state
            return newton_solve(start, target, tol=tol, **newton_kw)
        except (NewtonError, vortex.CurveTouchError, vortex.SheetSolveError) as exc:
            if depth >= MAX_BISECTIONS:
                raise NewtonError(f"step to {target} failed after {depth} bisections: {exc}")
            mid = _interpolate(state.params, target, 0.5)
            logger.info("bisecting continuation step: %s", mid)
            return advance(advance(state, mid, depth + 1), target, depth + 1)

    for target in schedule:
        try:
            state = advance(state, target, 0)
        except NewtonError as exc:
            raise ContinuationError(str(exc), branch) from exc
        branch.append(state)
    return branch


def default_schedule(target: WaveParams, start: float = 1e-6, factor: float = 10.0) -> list[WaveParams]:
    """Crapper state at ``target.A``, then eps and g ramped geometrically from ``start``."""
    sched = [WaveParams(target.A)]
    scale = max(target.eps, abs(target.g))
    if scale == 0.0:
        return sched
    t = start / scale
    while t < 1.0:
        sched.append(WaveParams(target.A, target.eps * t, target.g * t))
        t *= factor
    sched.append(dataclasses.replace(target, kappa=0.0))
    return sched


def solve_branch(target: WaveParams, n: int | None = None, m: int | None = None,
                 tol: float = 1e-10, seed: SolveState | None = None, **kw) -> list[SolveState]:
    """Continuation from the Crapper state (or ``seed``) to ``target``."""
    if seed is None:
        n = n or suggested_resolution(target.A, target.eps > 0)
        seed = crapper_state(target.A, n, m, omega=target.eps > 0)
        schedule = default_schedule(target)
    else:
        schedule = default_schedule(target)
        schedule = [_interpolate(seed.params, s, 1.0) for s in schedule]
        if seed.params.A != target.A:
            schedule = [WaveParams(target.A, seed.params.eps, seed.params.g)] + schedule[1:]
    return continuation(schedule, seed, tol=tol, **kw)


# -- splash search -----------------------------------------------------------

def splash_search(g: float, eps: float = 0.0, bracket: tuple[float, float] | None = None,
                  tol_A: float = 1e-10, eta: float | None = None, n: int | None = None,
                  tol: float = 1e-10):
    """Locate the splash amplitude ``A*`` for given gravity (and density ratio).

    At ``eps = 0`` the amplitude is bisected on the predicate "the solved
    curve crosses itself"; the simple-side state at the final bracket is
    returned.  With ``eps > 0`` a target ``eta`` is required: the amplitude
    is chosen so that the Crapper curve has chord-arc constant ``eta`` (below
    the splash amplitude) and the perturbed state is solved there.

    Returns ``(A, state, report)``.
    """
    if eps > 0:
        if eta is None:
            raise ValueError("eps > 0 needs an eta target; a true splash requires eps = 0")
        return _eta_splash(g, eps, eta, bracket, n, tol)
    a0 = crapper.splash_amplitude()
    lo, hi = bracket or (a0 - 0.01, a0 + 0.01)
    n = n or 512
    m = n // 4
    cache: dict[float, SolveState] = {}

    def solve(A):
        near = min(cache, key=lambda a: abs(a - A)) if cache else None
        seed = cache[near] if near is not None else crapper_state(A, n, m, omega=False)
        st = newton_solve(seed, WaveParams(A, 0.0, g), tol=tol, allow_crossing=True,
                          need_omega=False)
        cache[A] = st
        return st, geometry.has_self_intersection(st.curve)

    s_lo, x_lo = solve(lo)
    s_hi, x_hi = solve(hi)
    if x_lo == x_hi:
        raise SplashSearchError(f"bracket [{lo}, {hi}] does not separate simple from crossing curves")
    if x_lo:
        lo, hi, s_lo, s_hi = hi, lo, s_hi, s_lo
    while abs(hi - lo) > tol_A:
        mid = 0.5 * (lo + hi)
        st, crossed = solve(mid)
        if crossed:
            hi = mid
        else:
            lo, s_lo = mid, st
    state = _finish(s_lo.theta, None, s_lo.kappa, s_lo.params, m, False, s_lo.log, tol)
    report = geometry.classify(state.curve)
    return lo, state, report


def eta_amplitude(eta: float, bracket: tuple[float, float] | None = None, n: int = 1024,
                  xtol: float = 1e-10) -> float:
    """Crapper amplitude whose curve has chord-arc constant ``eta``."""
    a0 = crapper.splash_amplitude()
    lo, hi = bracket or (crapper.GRAPH_THRESHOLD, a0 - 1e-7)
    hi = min(hi, a0 - 1e-7)

    def f(A):
        return geometry.chord_arc_eta(crapper.curve(A, n)).eta - eta

    if f(lo) * f(hi) > 0:
        raise SplashSearchError(f"eta={eta} is not attained for A in [{lo}, {hi}]")
    return optimize.brentq(f, lo, hi, xtol=xtol)


def _eta_splash(g, eps, eta, bracket, n, tol):
    A = eta_amplitude(eta, bracket)
    target = WaveParams(A, eps, g)
    branch = solve_branch(target, n=n, tol=tol)
    state = branch[-1]
    return A, state, geometry.classify(state.curve)
