"""Geometry of periodic interface curves.

Curvature, arc-length resampling, the chord-arc (eta-splash) functional,
self-intersection detection and the opening map ``P(z) = sqrt(a - e^{-iz})``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .curve import InterfaceCurve
from .spectral import (PeriodicField, TrigInterpolant, antiderivative_values,
                       derivative_values, hilbert_values)

logger = logging.getLogger(__name__)

SPLASH_TOL = 1e-6
MIN_SEPARATION = 0.25

__all__ = [
    "InterfaceCurve", "SplashReport", "Crossing", "OpenedCurve",
    "curvature", "coordinate_curvature", "arclength_reparam", "chord_arc_eta",
    "self_intersections", "has_self_intersection", "is_graph", "classify",
    "open_map", "find_splash_parameter", "BranchCutError",
]


class BranchCutError(ValueError):
    """The curve crosses the branch cut of the opening map."""


@dataclass(frozen=True)
class Crossing:
    alpha: float
    beta: float
    point: complex
    converged: bool = True


@dataclass
class SplashReport:
    eta: float
    pair: tuple[float, float]
    arc_separation: float
    intersections: int
    classification: str
    interval_lengths: tuple[float, float] = (0.0, 0.0)
    chord: float = float("nan")
    min_tangent_x: float = float("nan")

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "pair": list(self.pair),
            "arc_separation": self.arc_separation,
            "intersections": self.intersections,
            "classification": self.classification,
            "interval_lengths": list(self.interval_lengths),
            "chord": self.chord,
        }


class CurveEvaluator:
    """Continuous evaluation of a sampled pseudo-periodic curve."""

    def __init__(self, c: InterfaceCurve):
        self.curve = c
        self.slope = c.shift / c.period
        self.start = c.start
        self._p = TrigInterpolant(c.periodic_part(), c.period, c.start)

    def __call__(self, s, order: int = 0):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        vals = self._p(s, order)
        if order == 0:
            return vals + self.slope * (s - self.start)
        vals = list(vals)
        vals[0] = vals[0] + self.slope * (s - self.start)
        vals[1] = vals[1] + self.slope
        return tuple(vals)


# -- curvature ---------------------------------------------------------------

def curvature(theta: PeriodicField) -> PeriodicField:
    """``K = exp(H theta) * theta'`` for the hodograph parametrization."""
    if theta.parity != "odd":
        raise ValueError("curvature needs an odd angle field")
    tau = hilbert_values(theta.values)
    return PeriodicField.projected(np.exp(tau) * derivative_values(theta.values), "even")


def coordinate_curvature(c: InterfaceCurve) -> np.ndarray:
    """``(x' y'' - y' x'') / |z'|^3`` from the curve samples."""
    dz = c.dz
    d2z = c.second_derivative()
    return np.imag(np.conj(dz) * d2z) / np.abs(dz) ** 3


# -- arc length --------------------------------------------------------------

class _ArcLength:
    def __init__(self, c: InterfaceCurve):
        speed = np.abs(c.dz)
        if speed.min() <= 0.0:
            raise ValueError("degenerate tangent: curve speed vanishes")
        self.curve = c
        self.mean_speed = float(np.mean(speed))
        self.length = self.mean_speed * c.period
        scale = c.period / (2.0 * np.pi)
        q = antiderivative_values(speed - self.mean_speed) * scale
        self._q = TrigInterpolant(q, c.period, c.start)
        self._q0 = float(self._q(c.start)[0])
        self._speed = TrigInterpolant(speed, c.period, c.start)
        self.nodes = self.mean_speed * (c.alpha - c.start) + q - self._q0

    def s(self, alpha):
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        return self.mean_speed * (alpha - self.curve.start) + self._q(alpha) - self._q0

    def speed(self, alpha):
        return self._speed(alpha)

    def invert(self, targets: np.ndarray, tol: float = 1e-14, max_iter: int = 30):
        c = self.curve
        nodes_ext = np.append(self.nodes, self.length)
        alpha_ext = np.append(c.alpha, c.start + c.period)
        alpha = np.interp(targets, nodes_ext, alpha_ext)
        for _ in range(max_iter):
            step = (self.s(alpha) - targets) / self.speed(alpha)
            alpha = alpha - step
            if np.max(np.abs(step)) < tol * max(1.0, c.period):
                break
        return alpha


def arclength_reparam(c: InterfaceCurve, m: int) -> InterfaceCurve:
    """Resample ``c`` at ``m`` points equally spaced in arc length.

    The returned curve has ``start = 0``, ``period`` equal to the length of
    one period of ``c`` and unit-speed tangent samples.  The first node is the
    image of ``c.start``.
    """
    arc = _ArcLength(c)
    targets = arc.length * np.arange(m) / m
    alpha = arc.invert(targets)
    z, dz = CurveEvaluator(c)(alpha, 1)
    return InterfaceCurve(z=z, dz=dz / np.abs(dz), period=arc.length,
                          shift=c.shift, start=0.0, symmetric=False)


def arclength_nodes(c: InterfaceCurve, m: int) -> tuple[np.ndarray, float]:
    """Parameter values of the arc-length nodes, and the period length."""
    arc = _ArcLength(c)
    return arc.invert(arc.length * np.arange(m) / m), arc.length


# -- self-intersections ------------------------------------------------------

def _segment_crossings(pts: np.ndarray, min_gap: int = 2):
    """All proper crossings between non-adjacent segments of a polyline.

    Returns arrays ``(i, j, t, u)`` with segment indices ``i < j`` and local
    segment parameters.  Candidate pairs come from a sort-and-sweep over the
    x-extents of the segments.
    """
    a = pts[:-1]
    b = pts[1:]
    xmin = np.minimum(a.real, b.real)
    xmax = np.maximum(a.real, b.real)
    ymin = np.minimum(a.imag, b.imag)
    ymax = np.maximum(a.imag, b.imag)
    order = np.argsort(xmin, kind="stable")
    xs = xmin[order]
    hi = np.searchsorted(xs, xmax[order], side="right")
    pos = np.arange(order.size)
    counts = np.maximum(hi - pos - 1, 0)
    if counts.sum() == 0:
        return (np.empty(0, int),) * 2 + (np.empty(0),) * 2
    p_rep = np.repeat(pos, counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    q_rep = p_rep + 1 + offs
    i = order[p_rep]
    j = order[q_rep]
    i, j = np.minimum(i, j), np.maximum(i, j)
    keep = (j - i >= min_gap) & (ymin[i] <= ymax[j]) & (ymin[j] <= ymax[i])
    i, j = i[keep], j[keep]
    d1 = b[i] - a[i]
    d2 = b[j] - a[j]
    r = a[j] - a[i]
    den = d1.real * d2.imag - d1.imag * d2.real
    ok = den != 0.0
    i, j, d1, d2, r, den = i[ok], j[ok], d1[ok], d2[ok], r[ok], den[ok]
    t = (r.real * d2.imag - r.imag * d2.real) / den
    u = (r.real * d1.imag - r.imag * d1.real) / den
    hit = (t >= 0.0) & (t < 1.0) & (u >= 0.0) & (u < 1.0)
    return i[hit], j[hit], t[hit], u[hit]


def _newton_crossing(ev: CurveEvaluator, alpha: float, beta: float, h: float,
                     tol: float = 1e-12, max_iter: int = 50):
    """Refine ``z(alpha) = z(beta)`` with a trust region of one cell."""
    for _ in range(max_iter):
        za, dza = ev(alpha, 1)
        zb, dzb = ev(beta, 1)
        f = za[0] - zb[0]
        if abs(f) < tol:
            return alpha, beta, complex(za[0]), True
        jac = np.array([[dza[0].real, -dzb[0].real], [dza[0].imag, -dzb[0].imag]])
        try:
            step = np.linalg.solve(jac, -np.array([f.real, f.imag]))
        except np.linalg.LinAlgError:
            break
        norm = np.max(np.abs(step))
        if norm > h:
            step *= h / norm
        alpha += step[0]
        beta += step[1]
    za = ev(alpha)[0]
    zb = ev(beta)[0]
    return alpha, beta, complex(za), bool(abs(za - zb) < tol)


def _axis_crossings(c: InterfaceCurve, ev: CurveEvaluator) -> list[tuple[float, float]]:
    """Crossings of a reflection-symmetric curve, located on its symmetry axes.

    For ``z(-a) = -conj(z(a))`` a crossing ``z(a) = z(-a) + k*shift`` is a
    root of ``x(a) = k*shift/2`` with ``0 < a < period/2``.  Extrema of x are
    located first so that arbitrarily small overlaps near a splash are found.
    """
    n = c.n
    half = c.period / 2.0
    a = c.alpha[n // 2 + 1:]
    x = c.z.real[n // 2 + 1:]
    dx = c.dz.real[n // 2 + 1:]
    # refine interior extrema of x(a)
    ext = []
    sgn = np.sign(dx)
    for idx in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        lo, hi = a[idx], a[idx + 1]
        g = lambda s: ev(s, 1)[1][0].real
        try:
            ext.append(optimize.brentq(g, lo, hi, xtol=1e-15))
        except ValueError:
            continue
    knots = np.unique(np.concatenate([[a[0]], ext, [a[-1]]]))
    out = []
    shift = float(np.real(c.shift))
    levels = [k * shift / 2.0 for k in range(-2, 3)]
    for lo, hi in zip(knots[:-1], knots[1:]):
        # x is monotone on [lo, hi]
        xl, xh = ev([lo, hi])[:].real
        for level in levels:
            if (xl - level) * (xh - level) < 0.0:
                r = optimize.brentq(lambda s: ev(s)[0].real - level, lo, hi, xtol=1e-15)
                if 1e-9 < r < half - 1e-9:
                    k = int(round(2.0 * level / shift)) if shift else 0
                    # z(r) = z(-r) + k*shift  ->  pair (-r + k*period, r) up to order
                    out.append((-r + k * c.period, r))
    return out


def _canonical(c: InterfaceCurve, alpha: float, beta: float) -> tuple[float, float]:
    alpha, beta = min(alpha, beta), max(alpha, beta)
    k = np.floor((alpha - c.start) / c.period)
    return alpha - k * c.period, beta - k * c.period


def self_intersections(c: InterfaceCurve) -> list[Crossing]:
    """Transverse self-crossings of one period against itself and translates.

    Each crossing is reported once, as ``(alpha, beta)`` with ``alpha`` in the
    base period and ``alpha < beta``.
    """
    ev = CurveEvaluator(c)
    closed = c.shift == 0
    periods = (0,) if closed else (-1, 0, 1)
    pts = c.points(periods)
    pts = np.append(pts, c.z[0] + (0 if closed else 2 * c.shift))
    h = c.period / c.n
    s0 = c.start + periods[0] * c.period
    i, j, t, u = _segment_crossings(pts)
    seeds = [(s0 + (ii + tt) * h, s0 + (jj + uu) * h) for ii, jj, tt, uu in zip(i, j, t, u)]
    if closed:
        # the closing segment is adjacent to the first one
        seeds = [(sa, sb) for sa, sb in seeds
                 if not (abs(sa - s0) < 2 * h and abs(sb - s0 - c.period) < 2 * h)]
    found: list[Crossing] = []

    def add(alpha, beta, point, conv):
        alpha, beta = _canonical(c, alpha, beta)
        if beta - alpha < 2 * h:
            return
        if closed and beta - alpha > c.period - 2 * h:
            return
        for cr in found:
            if abs(cr.alpha - alpha) < 1e-7 and abs(cr.beta - beta) < 1e-7:
                return
        found.append(Crossing(alpha, beta, point, conv))

    if c.symmetric and not closed:
        for alpha, beta in _axis_crossings(c, ev):
            add(alpha, beta, complex(ev(beta)[0]), True)
    for alpha, beta in seeds:
        alpha, beta, point, conv = _newton_crossing(ev, alpha, beta, h)
        if not conv:
            logger.warning("crossing refinement did not converge near (%g, %g)", alpha, beta)
        add(alpha, beta, point, conv)
    found.sort(key=lambda cr: (cr.alpha, cr.beta))
    return found


def has_self_intersection(c: InterfaceCurve) -> bool:
    return len(self_intersections(c)) > 0


def is_graph(c: InterfaceCurve) -> tuple[bool, float]:
    """Whether ``Re z' > 0`` everywhere, and the (refined) minimum of ``Re z'``."""
    dx = c.dz.real
    j = int(np.argmin(dx))
    h = c.period / c.n
    ev = CurveEvaluator(c)
    a0 = c.alpha[j]
    res = optimize.minimize_scalar(lambda s: ev(s, 1)[1][0].real,
                                   bounds=(a0 - h, a0 + h), method="bounded",
                                   options={"xatol": 1e-13})
    m = min(float(res.fun), float(dx[j]))
    return m > 0.0, m


# -- chord-arc functional ----------------------------------------------------

def _brute_force_ratio(zs: np.ndarray, shift: complex, length: float,
                       min_sep: float, reach: float, block: int = 256):
    """Row minima of the chord-arc ratio on an arc-length grid.

    For node ``i`` compares against nodes ``t`` with
    ``min_sep <= t - s_i <= reach`` (across periods).
    """
    m = zs.size
    ds = length / m
    d_min = int(np.ceil(min_sep / ds - 1e-12))
    d_max = int(np.floor(reach / ds))
    offsets = np.arange(d_min, d_max + 1)
    sep = offsets * ds
    denom = np.minimum(sep, 1.0)
    row_min = np.empty(m)
    row_arg = np.empty(m, dtype=int)
    for lo in range(0, m, block):
        idx = np.arange(lo, min(lo + block, m))
        tgt = idx[:, None] + offsets[None, :]
        wrap, pos = np.divmod(tgt, m)
        chord = np.abs(zs[pos] + wrap * shift - zs[idx][:, None])
        ratio = chord / denom[None, :]
        k = np.argmin(ratio, axis=1)
        row_min[idx] = ratio[np.arange(idx.size), k]
        row_arg[idx] = offsets[k]
    return row_min, row_arg


def _refine_pair(ev: CurveEvaluator, arc: _ArcLength, alpha: float, beta: float,
                 min_sep: float):
    """Locally minimize the chord-arc ratio near a seed pair of parameters."""

    def separation(a, b):
        return float(arc.s(b)[0] - arc.s(a)[0])

    s_ab = separation(alpha, beta)
    if s_ab > 1.0 + 1e-3:
        # denominator is 1: minimize |z(a) - z(b)|^2 by Newton
        x = np.array([alpha, beta])
        for _ in range(50):
            za, dza, d2za = ev(x[0], 2)
            zb, dzb, d2zb = ev(x[1], 2)
            d = za[0] - zb[0]
            grad = np.array([np.real(np.conj(d) * dza[0]), -np.real(np.conj(d) * dzb[0])])
            hess = np.array([
                [abs(dza[0]) ** 2 + np.real(np.conj(d) * d2za[0]), -np.real(np.conj(dzb[0]) * dza[0])],
                [-np.real(np.conj(dzb[0]) * dza[0]), abs(dzb[0]) ** 2 - np.real(np.conj(d) * d2zb[0])],
            ])
            try:
                step = -np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(step)):
                break
            step = np.clip(step, -0.05, 0.05)
            x = x + step
            if np.max(np.abs(step)) < 1e-15:
                break
        chord = float(abs(ev(x[0])[0] - ev(x[1])[0]))
        s_new = separation(x[0], x[1])
        if s_new >= 1.0:
            return chord, x[0], x[1], s_new

    def objective(v):
        a, b = v
        s = separation(a, b)
        if s < min_sep:
            return 1e3
        return float(abs(ev(a)[0] - ev(b)[0])) / min(s, 1.0)

    res = optimize.minimize(objective, [alpha, beta], method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    a, b = res.x
    return float(res.fun), a, b, separation(a, b)


def _interval_length(row_min: np.ndarray, i: int, level: float, ds: float) -> float:
    m = row_min.size
    if row_min[i] > level:
        return 0.0
    count = 1
    k = 1
    while k < m and row_min[(i + k) % m] <= level:
        count += 1
        k += 1
    k = 1
    while k < m - count + 1 and row_min[(i - k) % m] <= level:
        count += 1
        k += 1
    return count * ds


def chord_arc_eta(c: InterfaceCurve, m: int = 2048, min_separation: float = MIN_SEPARATION,
                  level_factor: float = 2.0, crossings: list | None = None) -> SplashReport:
    """Chord-arc infimum ``inf |z(a)-z(b)| / min(b - a, 1)`` in arc length.

    Pairs closer than ``min_separation`` in arc length are excluded.  The
    reported pair is in the curve's own parameter.  ``interval_lengths`` are
    the arc lengths of the grid sublevel sets ``ratio <= level_factor*eta``
    around the two members of the pair.
    """
    if crossings is None:
        crossings = self_intersections(c)
    graph, min_dx = is_graph(c) if c.shift != 0 else (False, float("nan"))
    arc = _ArcLength(c)
    ev = CurveEvaluator(c)
    if crossings:
        cr = crossings[0]
        sep = float(arc.s(cr.beta)[0] - arc.s(cr.alpha)[0])
        return SplashReport(0.0, (cr.alpha, cr.beta), sep, len(crossings), "crossing",
                            (0.0, 0.0), 0.0, min_dx)
    alpha_nodes = arc.invert(arc.length * np.arange(m) / m)
    zs = ev(alpha_nodes)
    ds = arc.length / m
    reach = 2.0 * arc.length if c.shift != 0 else arc.length - min_separation
    row_min, row_arg = _brute_force_ratio(zs, c.shift, arc.length, min_separation, reach)
    i = int(np.argmin(row_min))
    off = int(row_arg[i])
    wrap, jpos = divmod(i + off, m)
    alpha0 = alpha_nodes[i]
    beta0 = alpha_nodes[jpos] + wrap * c.period
    eta, a_star, b_star, sep = _refine_pair(ev, arc, alpha0, beta0, min_separation)
    if eta > row_min[i]:
        eta, a_star, b_star, sep = float(row_min[i]), alpha0, beta0, off * ds
    chord = eta * min(sep, 1.0)
    level = level_factor * float(row_min[i])
    len_a = _interval_length(row_min, i, level, ds)
    # the partner interval: rows whose best partner lies near jpos
    col = np.full(m, np.inf)
    partner = (np.arange(m) + row_arg) % m
    np.minimum.at(col, partner, row_min)
    len_b = _interval_length(col, jpos, level, ds)
    return SplashReport(float(eta), (float(a_star), float(b_star)), float(sep), 0,
                        "simple", (len_a, len_b), float(chord), min_dx)


def classify(c: InterfaceCurve, splash_tol: float = SPLASH_TOL, m: int = 2048) -> SplashReport:
    """graph / simple / splash / crossing classification with diagnostics."""
    crossings = self_intersections(c)
    report = chord_arc_eta(c, m=m, crossings=crossings)
    if crossings:
        report.classification = "crossing"
        return report
    graph, min_dx = is_graph(c)
    report.min_tangent_x = min_dx
    if graph:
        report.classification = "graph"
    elif report.eta < splash_tol and report.arc_separation > 1.0:
        report.classification = "splash"
    else:
        report.classification = "simple"
    return report


def find_splash_parameter(factory, bracket: tuple[float, float], tol: float = 1e-12,
                          max_iter: int = 200) -> float:
    """Bisection for the boundary between simple and self-crossing curves.

    ``factory(A)`` returns the curve for parameter ``A``; the lower end of the
    bracket must be simple and the upper end self-crossing.
    """
    lo, hi = bracket
    if has_self_intersection(factory(lo)) or not has_self_intersection(factory(hi)):
        raise ValueError(f"bracket {bracket} does not separate simple from crossing curves")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if has_self_intersection(factory(mid)):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# -- opening map -------------------------------------------------------------

@dataclass
class OpenedCurve:
    points: np.ndarray
    a: float
    simple: bool
    axis_distance: float
    axis_touches: list = field(default_factory=list)
    right_half_plane: bool = True


def default_opening_constant(c: InterfaceCurve, report: SplashReport | None = None) -> float:
    """``a`` with the branch point between the trough and the neck on x = 0.

    For curves without a near-touch on the axis the branch point is placed
    one unit above the trough.
    """
    ev = CurveEvaluator(c)
    y0 = float(ev(0.0)[0].imag)
    if report is None:
        report = chord_arc_eta(c)
    a_s, b_s = report.pair
    za, zb = ev([a_s, b_s])
    mid = 0.5 * (za + zb)
    on_axis = abs(mid.real - np.round(mid.real / 2 / np.pi) * 2 * np.pi) < 1e-3
    if report.eta < 0.5 and on_axis and mid.imag > y0:
        return float(np.exp(0.5 * (y0 + mid.imag)))
    return float(np.exp(y0 + 1.0))


def open_map(c: InterfaceCurve, a: float | None = None, touch_tol: float = 1e-6) -> OpenedCurve:
    """Image of one period of ``c`` under ``P(z) = sqrt(a - exp(-iz))``.

    The principal square root has its cut on the negative real axis; a
    transverse crossing of the cut by the curve raises ``BranchCutError``.
    """
    if a is None:
        a = default_opening_constant(c)
    if a < 0:
        raise ValueError("opening constant must be non-negative")
    w = a - np.exp(-1j * c.z)
    w_next = np.roll(w, -1)
    sg = np.sign(w.imag)
    flip = sg * np.roll(sg, -1) < 0
    # crossing abscissa of the real axis on each flipping segment
    t = np.where(flip, w.imag / np.where(flip, w.imag - w_next.imag, 1.0), 0.0)
    cross_re = w.real + t * (w_next.real - w.real)
    # a crossing can also land exactly on a node (symmetric curves)
    on_node = (sg == 0) & (np.roll(sg, 1) * np.roll(sg, -1) < 0)
    bad = (flip & (cross_re < 0.0)) | (on_node & (w.real < 0.0))
    if np.any(bad):
        j = int(np.nonzero(bad)[0][0])
        raise BranchCutError(
            f"curve crosses the branch cut near alpha={c.alpha[j]:.6f}; adjust a={a}")
    p = np.sqrt(w)
    closed = InterfaceCurve(z=p, period=c.period, shift=0.0, start=c.start)
    simple = len(self_intersections(closed)) == 0
    re = p.real
    # local minima of the distance to the imaginary axis
    touches = []
    for j in np.nonzero((re <= np.roll(re, 1)) & (re <= np.roll(re, -1)))[0]:
        if re[j] < touch_tol:
            touches.append(complex(p[j]))
    return OpenedCurve(points=p, a=float(a), simple=simple, axis_distance=float(re.min()),
                       axis_touches=touches, right_half_plane=bool(re.min() > 0.0))
