"""Acceptance checks shared by ``splashwave validate`` and the test suite.

Each check returns a :class:`CheckResult`; none of them raise on a failed
tolerance.  ``QUICK`` lists the checks cheap enough for a smoke run.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import crapper, geometry, system, vortex
from .spectral import PeriodicField, from_sine, inner, tangent_mean

A0_REFERENCE = 0.45467


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def random_odd_fields(count: int, n: int = 512, modes: int = 10, seed: int = 20240611):
    """Band-limited odd fields with O(1) amplitude, reproducible."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        b = rng.normal(size=modes) * 0.6 / np.arange(1, modes + 1)
        out.append(from_sine(b, n))
    return out


# -- independent chord-arc oracle --------------------------------------------

def brute_force_eta(A: float, samples: int = 4096, min_separation: float = 0.25) -> float:
    """Chord-arc constant of z_A from the closed-form profile and a polyline.

    Arc length is accumulated along a fine polyline, the curve is resampled
    at uniform arc length, and every pair up to two periods apart is scanned.
    """
    fine = 16 * samples
    a = -np.pi + 2 * np.pi * np.arange(fine + 1) / fine
    z = crapper.profile(A, a)
    s = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(z)))])
    length = s[-1]
    targets = length * np.arange(samples) / samples
    zs = np.interp(targets, s, z.real) + 1j * np.interp(targets, s, z.imag)
    ds = length / samples
    best = np.inf
    offsets = np.arange(int(math.ceil(min_separation / ds)), 2 * samples)
    for lo in range(0, offsets.size, 512):
        off = offsets[lo:lo + 512]
        wrap, j = np.divmod(np.arange(samples)[:, None] + off[None, :], samples)
        chord = np.abs(zs[j] + 2 * np.pi * wrap - zs[:, None])
        ratio = chord / np.minimum(off * ds, 1.0)[None, :]
        best = min(best, float(ratio.min()))
    return best


def oracle_eta_amplitude(eta: float) -> float:
    return optimize.brentq(lambda A: brute_force_eta(A) - eta, 0.40, 0.4546, xtol=1e-7)


# -- the checks --------------------------------------------------------------

def check_splash_amplitude() -> CheckResult:
    A0 = geometry.find_splash_parameter(lambda A: crapper.curve(A, 4096), crapper.SPLASH_BRACKET, 1e-12)
    ok = abs(A0 - A0_REFERENCE) < 5e-4
    return CheckResult(1, "Crapper splash amplitude", ok, f"A0={A0:.10f} vs {A0_REFERENCE}")


def check_graph_threshold(n: int = 1024) -> CheckResult:
    lo, hi = 0.3, 0.5
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if geometry.is_graph(crapper.curve(mid, n))[0]:
            lo = mid
        else:
            hi = mid
    ok = abs(lo - 0.4142) < 5e-4 and abs(lo - crapper.GRAPH_THRESHOLD) < 5e-4
    return CheckResult(2, "graph threshold", ok, f"flip at A={lo:.10f}, sqrt(2)-1={crapper.GRAPH_THRESHOLD:.10f}")


def check_capillary_residual(n: int = 512) -> CheckResult:
    worst = 0.0
    for A in (0.1, 0.2, 0.3, 0.4):
        theta, _ = crapper.theta_tau(A, n)
        worst = max(worst, system.residual_G1(theta, None, system.WaveParams(A)).max_abs())
    return CheckResult(3, "pure-capillary residual", worst < 1e-9, f"max |G1(theta_A)|={worst:.2e}")


def check_cauchy_identity() -> CheckResult:
    fields = [crapper.theta_tau(A, 512)[0] for A in (0.1, 0.2, 0.3, 0.4)]
    fields += random_odd_fields(100)
    worst = max(abs(tangent_mean(f) - 1.0) for f in fields)
    return CheckResult(4, "Cauchy identity", worst < 1e-10, f"max |mean(exp(-H th + i th)) - 1|={worst:.2e}")


def check_orthogonality() -> CheckResult:
    rng = np.random.default_rng(7)
    thetas = random_odd_fields(100) + [crapper.theta_tau(0.3, 512)[0]]
    qs = rng.uniform(1.0, 3.0, size=len(thetas))
    worst_g1 = max(abs(system.orthogonality_check(t, q)) for t, q in zip(thetas, qs))
    A = 0.3
    theta_a = crapper.theta_tau(A, 512)[0]
    c = PeriodicField(np.cos(theta_a.values))
    worst_gamma = 0.0
    for u in random_odd_fields(50, seed=99):
        gu = system.gamma_apply(theta_a, u, crapper.q_of_A(A))
        worst_gamma = max(worst_gamma, abs(inner(gu, c)))
    ok = worst_g1 < 1e-9 and worst_gamma < 1e-9
    return CheckResult(5, "cokernel orthogonality", ok,
                       f"max|<G1,cos th>|={worst_g1:.2e}, max|<Gamma u,cos th_A>|={worst_gamma:.2e}")


def check_kappa_derivative() -> CheckResult:
    vals = {A: system.kappa_derivative_check(A) for A in (0.1, 0.3, 0.44)}
    rel = max(abs(abs(v) / (2 * np.pi) - 1.0) for v in vals.values())
    txt = ", ".join(f"A={A}: {v:.9f}" for A, v in vals.items())
    return CheckResult(6, "reduced kappa derivative", rel < 1e-5, f"{txt}; rel err {rel:.1e}")


def check_spectral_radius(n: int = 1024) -> CheckResult:
    amps = (0.1, 0.2, 0.3, 0.4, 0.45)
    rho = [vortex.spectral_radius(crapper.curve(A, n)) for A in amps]
    ok = all(r < 1 for r in rho) and all(b > a for a, b in zip(rho, rho[1:]))
    return CheckResult(7, "sheet operator spectrum", ok, "rho=" + ", ".join(f"{r:.5f}" for r in rho))


def check_vorticity_solve(n: int = 1024) -> CheckResult:
    worst_res = worst_norm = 0.0
    for A in (0.1, 0.2, 0.3, 0.4, 0.44):
        c = crapper.curve(A, n)
        k = vortex.SheetKernel(c)
        w = vortex.solve_omega(c, kernel=k)
        worst_res = max(worst_res, vortex.omega_residual(c, w, kernel=k))
        worst_norm = max(worst_norm, float(np.max(np.abs(k.normal(w.values)))))
    ok = worst_res < 1e-10 and worst_norm < 1e-8
    return CheckResult(8, "vorticity solve", ok, f"|w + Aw - 2|={worst_res:.2e}, |BR.n|={worst_norm:.2e}")


def check_perturbed_existence() -> CheckResult:
    full = system.newton_solve(None, system.WaveParams(0.44, 1e-3, 1e-3))
    half = system.newton_solve(None, system.WaveParams(0.44, 5e-4, 5e-4))
    res = full.residuals["G1"] + full.residuals["G2"]
    ratio = system.theta_deviation(half) / system.theta_deviation(full)
    ok = full.converged and res < 1e-10 and abs(ratio - 0.5) < 0.05
    return CheckResult(9, "perturbed existence", ok,
                       f"|G1|+|G2|={res:.2e}, normal={full.residuals['normal']:.2e}, halving ratio={ratio:.4f}")


def check_water_wave_splash(g: float = 1e-3) -> CheckResult:
    found = [system.splash_search(g / 2 ** k) for k in range(3)]
    A_star = [f[0] for f in found]
    report = found[0][2]
    d1, d2 = abs(A_star[0] - A_star[1]), abs(A_star[1] - A_star[2])
    ok = report.eta < 1e-5 and report.arc_separation > 1 and d2 < d1
    return CheckResult(10, "water-wave splash", ok,
                       f"A*(g)={A_star[0]:.10f}, eta={report.eta:.2e}, sep={report.arc_separation:.3f}, "
                       f"dA: {d1:.2e} -> {d2:.2e}")


def check_two_fluid_eta_splash(target: float = 0.05) -> CheckResult:
    A = oracle_eta_amplitude(target)
    branch = system.solve_branch(system.WaveParams(A, 1e-3, 1e-3))
    state = branch[-1]
    eta = geometry.chord_arc_eta(state.curve).eta
    ok = state.converged and abs(eta - target) < 0.01
    return CheckResult(11, "two-fluid eta-splash", ok, f"A_eta={A:.8f}, eta={eta:.5f}, n={state.n}")


def check_quadrature_convergence(sizes=(512, 1024, 2048)) -> CheckResult:
    vals = {}
    for n in sizes:
        c = crapper.curve(0.3, n)
        k = vortex.SheetKernel(c)
        vals[n] = vortex.br_integral(c, vortex.solve_omega(c, kernel=k), kernel=k)
    diffs = [float(np.max(np.abs(vals[b][::b // a] - vals[a]))) for a, b in zip(sizes, sizes[1:])]
    ok = max(diffs) < 1e-10
    return CheckResult(12, "quadrature convergence", ok, "max diff n vs 2n: " + ", ".join(f"{d:.2e}" for d in diffs))


CHECKS = {
    1: check_splash_amplitude,
    2: check_graph_threshold,
    3: check_capillary_residual,
    4: check_cauchy_identity,
    5: check_orthogonality,
    6: check_kappa_derivative,
    7: check_spectral_radius,
    8: check_vorticity_solve,
    9: check_perturbed_existence,
    10: check_water_wave_splash,
    11: check_two_fluid_eta_splash,
    12: check_quadrature_convergence,
}

QUICK = (2, 3, 4, 5, 6, 8, 12)


def run(number: int) -> CheckResult:
    t0 = time.perf_counter()
    try:
        result = CHECKS[number]()
    except Exception as exc:  # a crash is a failed check, not a crashed suite
        result = CheckResult(number, CHECKS[number].__name__, False, f"error: {exc!r}")
    result.seconds = time.perf_counter() - t0
    return result


def run_level(level: str) -> list[CheckResult]:
    if level == "quick":
        numbers = QUICK
    elif level == "full":
        numbers = tuple(CHECKS)
    else:
        raise ValueError(f"unknown validation level {level!r}")
    return [run(k) for k in numbers]
