"""JSON state files and CSV field exports.

A state file is a JSON object::

    {"schema": "splashwave.curve", "version": 1, "n": ..., "m": ...,
     "params": {"A", "eps", "g", "kappa", "q"},
     "arrays": {"alpha", "x", "y", "theta", "tau", "omega"},
     "diagnostics": {"classification", "eta", "intersections",
                     "arc_separation", "residuals": {"G1", "G2", "normal"}}}

``omega`` is ``null`` when no vorticity amplitude is available (a crossing
curve).  Floats are written with Python's shortest round-trip repr, so a
read-write cycle is exact; non-finite diagnostics are written as ``null``.
"""
from __future__ import annotations

import csv
import json
import math

import numpy as np

from . import geometry
from .spectral import PeriodicField, curve_from_theta, hilbert_values
from .system import SolveState, WaveParams

SCHEMA = "splashwave.curve"
VERSION = 1


class StateFileError(ValueError):
    pass


def _num(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _array(a) -> list:
    return [float(v) for v in np.asarray(a, dtype=float)]


def diagnostics(state: SolveState, report: geometry.SplashReport | None = None) -> dict:
    if report is None:
        report = geometry.classify(state.curve)
    res = state.residuals or {}
    return {
        "classification": report.classification,
        "eta": _num(report.eta),
        "intersections": int(report.intersections),
        "arc_separation": _num(report.arc_separation),
        "pair": [_num(v) for v in report.pair],
        "min_tangent_x": _num(report.min_tangent_x),
        "converged": bool(state.converged),
        "residuals": {k: _num(res.get(k)) for k in ("G1", "G2", "normal")},
        "omega_max": _num(np.max(state.omega.values)) if state.omega is not None else None,
    }


def state_to_dict(state: SolveState, report: geometry.SplashReport | None = None) -> dict:
    c = state.curve
    params = state.params.replace(kappa=state.kappa)
    return {
        "schema": SCHEMA,
        "version": VERSION,
        "n": state.n,
        "m": state.m,
        "params": {k: _num(v) for k, v in params.as_dict().items()},
        "arrays": {
            "alpha": _array(state.theta.alpha),
            "x": _array(c.x),
            "y": _array(c.y),
            "theta": _array(state.theta.values),
            "tau": _array(hilbert_values(state.theta.values)),
            "omega": _array(state.omega.values) if state.omega is not None else None,
        },
        "diagnostics": diagnostics(state, report),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def write_state(path, state: SolveState, report: geometry.SplashReport | None = None) -> dict:
    doc = state_to_dict(state, report)
    with open(path, "w") as fh:
        fh.write(dumps(doc))
    return doc


def state_from_dict(doc: dict) -> SolveState:
    if doc.get("schema") != SCHEMA:
        raise StateFileError("not a splashwave state file")
    if doc.get("version") != VERSION:
        raise StateFileError(f"unsupported state file version {doc.get('version')}")
    try:
        n = int(doc["n"])
        arrays = doc["arrays"]
        p = doc["params"]
        theta = np.asarray(arrays["theta"], dtype=float)
        omega = arrays.get("omega")
        if theta.shape != (n,) or (omega is not None and len(omega) != n):
            raise StateFileError("array lengths do not match n")
        params = WaveParams(A=p["A"], eps=p["eps"], g=p["g"], kappa=p["kappa"])
        theta_f = PeriodicField.projected(theta, "odd")
        omega_f = PeriodicField.projected(np.asarray(omega, dtype=float), "even") if omega is not None else None
    except (KeyError, TypeError) as exc:
        raise StateFileError(f"malformed state file: {exc}") from exc
    diag = doc.get("diagnostics", {})
    res = {k: (v if v is not None else float("nan")) for k, v in diag.get("residuals", {}).items()}
    return SolveState(theta_f, omega_f, float(p["kappa"]), params, int(doc.get("m", n // 4)),
                      res, converged=bool(diag.get("converged", False)))


def read_state(path) -> SolveState:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    return state_from_dict(doc)


def revalidate(doc: dict, eta_tol: float = 1e-8, xy_tol: float = 1e-12) -> list[str]:
    """Recompute geometry from the stored theta; return a list of mismatches."""
    problems = []
    state = state_from_dict(doc)
    c = curve_from_theta(state.theta)
    arrays = doc["arrays"]
    for key, vals in (("x", c.x), ("y", c.y)):
        if np.max(np.abs(np.asarray(arrays[key]) - vals)) > xy_tol:
            problems.append(f"{key} does not match the curve built from theta")
    report = geometry.classify(c)
    diag = doc["diagnostics"]
    if report.classification != diag["classification"]:
        problems.append(f"classification {report.classification} != {diag['classification']}")
    if report.intersections != diag["intersections"]:
        problems.append("intersection count differs")
    if diag["eta"] is not None and abs(report.eta - diag["eta"]) > eta_tol:
        problems.append(f"eta {report.eta} != {diag['eta']}")
    return problems


def write_field_csv(path, x, y, u, v, psi) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "u", "v", "psi"])
        for row in zip(x, y, u, v, psi):
            w.writerow([repr(float(val)) for val in row])
