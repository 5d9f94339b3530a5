"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage or input error,
3 numerical failure.  ``SPLASHWAVE_THREADS`` caps the BLAS thread pool.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys

import numpy as np

from . import acceptance, crapper, geometry, states, system, vortex

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

log = logging.getLogger("splashwave")


class UsageError(Exception):
    pass


def _power_of_two(text: str) -> int:
    n = int(text)
    if n < 16 or n & (n - 1):
        raise argparse.ArgumentTypeError(f"n must be a power of two >= 16, got {text}")
    return n


def _summary(state: system.SolveState, report: geometry.SplashReport | None = None) -> dict:
    out = {"A": state.params.A, "eps": state.params.eps, "g": state.params.g,
           "kappa": state.kappa, "n": state.n, "converged": state.converged,
           "residuals": {k: states._num(v) for k, v in state.residuals.items()}}
    if report is not None:
        out.update(classification=report.classification, eta=report.eta,
                   arc_separation=report.arc_separation)
    return out


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=1))


# -- commands ----------------------------------------------------------------

def cmd_crapper(args) -> int:
    if not 0.0 <= args.A < 1.0:
        raise UsageError(f"--A must satisfy 0 <= A < 1, got {args.A}")
    n = args.n or max(crapper.resolution(args.A), 256)
    theta, _ = crapper.theta_tau(args.A, n)
    c = crapper.curve(args.A, n)
    report = geometry.classify(c)
    omega = None
    res = {"G1": system.residual_G1(theta, None, system.WaveParams(args.A)).max_abs()}
    if report.classification != "crossing":
        try:
            kernel = vortex.SheetKernel(c)
            omega = vortex.solve_omega(c, kernel=kernel)
        except (vortex.CurveTouchError, vortex.SheetSolveError) as exc:
            log.error("vorticity solve failed: %s", exc)
            return EXIT_NUMERICAL
        res["G2"] = vortex.omega_residual(c, omega, kernel=kernel)
        res["normal"] = float(np.max(np.abs(kernel.normal(omega.values))))
    state = system.SolveState(theta, omega, 0.0, system.WaveParams(args.A), n // 4, res, converged=True)
    states.write_state(args.out, state, report)
    _print_json(_summary(state, report))
    return EXIT_OK


def _check_params(args) -> system.WaveParams:
    try:
        return system.WaveParams(args.A, args.eps, args.g)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_solve(args) -> int:
    target = _check_params(args)
    seed = states.read_state(args.seed) if args.seed else None
    try:
        branch = system.solve_branch(target, n=args.n, tol=args.tol, seed=seed)
    except system.ContinuationError as exc:
        log.error("continuation failed: %s", exc)
        if exc.branch:
            side = f"{args.out}.partial.json"
            states.write_state(side, exc.branch[-1])
            log.error("last converged state written to %s", side)
        return EXIT_NUMERICAL
    state = branch[-1]
    report = geometry.classify(state.curve)
    states.write_state(args.out, state, report)
    _print_json(_summary(state, report))
    return EXIT_OK if state.converged else EXIT_NUMERICAL


def cmd_splash_find(args) -> int:
    if args.eps < 0:
        raise UsageError("--eps must be nonnegative")
    if args.eps > 0 and args.eta is None:
        raise UsageError("--eps > 0 needs --eta (a true splash requires eps = 0)")
    try:
        A, state, report = system.splash_search(args.g, args.eps, tol_A=args.tolA, eta=args.eta, n=args.n)
    except (system.SplashSearchError, system.NewtonError, system.ContinuationError) as exc:
        log.error("splash search failed: %s", exc)
        return EXIT_NUMERICAL
    states.write_state(args.out, state, report)
    out = _summary(state, report)
    out["A_star"] = A
    out["omega_max"] = float(np.max(state.omega.values)) if state.omega is not None else None
    _print_json(out)
    return EXIT_OK


def cmd_validate(args) -> int:
    results = acceptance.run_level(args.level)
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    return EXIT_OK if passed == len(results) else EXIT_VALIDATION


def parse_grid(text: str):
    """``x0:x1:nx,y0:y1:ny`` -> (xs, ys)."""
    try:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError
        axes = []
        for p in parts:
            lo, hi, cnt = p.split(":")
            cnt = int(cnt)
            if cnt < 1:
                raise ValueError
            axes.append(np.linspace(float(lo), float(hi), cnt))
    except ValueError:
        raise UsageError(f"malformed grid {text!r}; expected x0:x1:nx,y0:y1:ny") from None
    return axes[0], axes[1]


def cmd_field(args) -> int:
    xs, ys = parse_grid(args.grid)
    state = states.read_state(args.state)
    if state.omega is None:
        raise UsageError("state file has no vorticity amplitude (crossing curve?)")
    c = state.curve
    X, Y = np.meshgrid(xs, ys)
    pts = (X + 1j * Y).ravel()
    spacing = float(np.max(np.abs(np.diff(c.z))))
    keep = vortex.interface_distance(c, pts) >= spacing
    pts = pts[keep]
    vel = vortex.velocity_field(c, state.omega, pts) if pts.size else np.array([])
    psi = vortex.stream_function(c, state.omega, pts) if pts.size else np.array([])
    states.write_field_csv(args.out, pts.real, pts.imag, vel.real, vel.imag, psi)
    _print_json({"points": int(pts.size), "excluded": int((~keep).sum())})
    return EXIT_OK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="splashwave", description="Splash-forming capillary waves")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crapper", help="export an exact Crapper wave")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--n", type=_power_of_two, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_crapper)

    p = sub.add_parser("solve", help="solve for a perturbed wave by continuation")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--n", type=_power_of_two, default=None)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", default=None, help="state file to continue from")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("splash-find", help="locate the splash amplitude")
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=None, help="target chord-arc constant (eps > 0)")
    p.add_argument("--tolA", type=float, default=1e-10)
    p.add_argument("--n", type=_power_of_two, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_splash_find)

    p = sub.add_parser("validate", help="run the acceptance checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("field", help="export velocity and stream function on a grid")
    p.add_argument("--state", required=True)
    p.add_argument("--grid", required=True, help="x0:x1:nx,y0:y1:ny")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_field)
    return ap


def _thread_limit():
    value = os.environ.get("SPLASHWAVE_THREADS")
    if not value:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=int(value))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with _thread_limit():
            return args.func(args)
    except (UsageError, states.StateFileError, OSError) as exc:
        print(f"splashwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
