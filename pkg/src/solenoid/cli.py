"""Command-line front end.

Exit status is 1 for malformed input, 2 when a computation that had to
succeed did not (no convergence, no solution, no admissible Lipschitz
budget) and 0 otherwise, including an ``Undetermined`` verdict.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import formats
from .affine import ConvergenceError, SkewParams, boundary_fixed_point, sample_attractor
from .circle import CircleFunction, interpolate
from .cohomology import NotSolvable, decompose, scan_jordan, solve_L
from .examples import (annulus_scan_log_quadratic, build_fat_hole, region_top,
                       verify_fat_hole)
from .formats import SpecError
from .orbits import coboundary_witness, periodic_orbits
from .perturbed import (FailsPreservation, MonotonicityError, classify_map,
                        estimate_constants, perturbed_boundaries)
from .render import BAND, POINTS, REGION, EmptyInput, blank, draw_band, draw_points
from .topology import classify


NUMERIC_FAILURES = (ConvergenceError, NotSolvable, FailsPreservation, MonotonicityError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ell", type=int, default=2, help="degree of the base map")
    p.add_argument("--lambda", dest="lam", type=float, help="fibre contraction")
    p.add_argument("--tau", help="fibre term: JSON file or inline JSON")
    p.add_argument("--grid", type=int, help="number of grid points")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default: stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="solenoid", description="Attractors of skew products over expanding circle maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boundaries", parents=[common], help="CSV of the lower and upper boundary")
    p.add_argument("--cloud", type=int, metavar="N", help="write N sampled attractor points instead")

    sub.add_parser("classify", parents=[common], help="JSON topology verdict")

    p = sub.add_parser("scan-jordan", parents=[common], help="JSON list of Jordan-curve contractions")
    p.add_argument("--lam-min", type=float, default=0.005)
    p.add_argument("--lam-max", type=float, default=1.0)
    p.add_argument("--lam-steps", type=int, default=400)

    sub.add_parser("solve-cohomology", parents=[common], help="solve mu o m - lam mu = tau")
    sub.add_parser("decompose", parents=[common], help="factor tau into cohomological operators")

    p = sub.add_parser("birkhoff", parents=[common], help="Birkhoff sums over periodic orbits")
    p.add_argument("--max-period", type=int, default=8)
    p.add_argument("--witness", action="store_true", help="report the non-coboundary test instead")

    p = sub.add_parser("render", parents=[common], help="PGM picture of the attractor")
    p.add_argument("--example", choices=["fat-hole"])
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--points", type=int, default=0, help="number of sampled points to overlay")

    p = sub.add_parser("example", parents=[common], help="worked examples")
    p.add_argument("family", choices=["fat-hole", "log-quadratic"])
    p.add_argument("--c-mod", type=float, default=1e-3)
    p.add_argument("--c-arg", type=float, default=0.0, help="argument of c in turns")
    p.add_argument("--verify", action="store_true", help="fat-hole: also run the verification")

    p = sub.add_parser("perturbed", parents=[common], help="boundaries of a perturbed map")
    p.add_argument("--csv", help="also write the boundaries as CSV here")
    p.add_argument("--safety", type=float, default=0.05)
    return parser


# -- helpers -----------------------------------------------------------------


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    _emit(args, formats.dumps(obj) + "\n")


def _tau(args) -> CircleFunction:
    if not args.tau:
        raise SpecError("--tau is required")
    return formats.tau_from_spec(formats.load_json(args.tau), args.grid)


def _lam(args) -> float:
    if args.lam is None:
        raise SpecError("--lambda is required")
    return args.lam


def _params(args) -> SkewParams:
    try:
        return SkewParams(args.ell, _lam(args), _tau(args))
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


# -- subcommands -------------------------------------------------------------


def cmd_boundaries(args) -> int:
    p = _params(args)
    if args.cloud:
        theta, t = sample_attractor(p, args.cloud, seed=args.seed)
        _emit(args, formats.points_csv(theta, t))
        return 0
    _emit(args, formats.boundaries_csv(boundary_fixed_point(p, args.grid, args.tol)))
    return 0


def cmd_classify(args) -> int:
    p = _params(args)
    b = boundary_fixed_point(p, args.grid, args.tol)
    _emit_json(args, classify(p, b).to_dict())
    return 0


def cmd_scan_jordan(args) -> int:
    tau = _tau(args)
    roots = scan_jordan(tau, args.ell, (args.lam_min, args.lam_max, args.lam_steps), args.tol)
    _emit_json(args, formats.roots_to_list(roots))
    return 0


def cmd_solve(args) -> int:
    tau = _tau(args)
    mu, residual = solve_L(_lam(args), tau, args.ell, tol=args.tol)
    _emit_json(args, {"mu_spec": formats.tau_to_spec(mu), "residual": residual, "tol": args.tol})
    return 0


def cmd_decompose(args) -> int:
    d = decompose(_tau(args), args.ell, args.tol)
    _emit_json(args, formats.decomposition_to_dict(d, args.tol))
    return 0


def cmd_birkhoff(args) -> int:
    tau = _tau(args)
    try:
        orbits = periodic_orbits(args.ell, args.max_period)
    except OverflowError as exc:
        raise SpecError(str(exc)) from exc
    if args.witness:
        v = coboundary_witness(tau, args.ell, args.max_period)
        out = {"kind": v.kind, "positive_sum": v.positive_sum, "negative_sum": v.negative_sum,
               "positive": None if v.positive is None else formats.orbit_to_dict(v.positive, tau),
               "negative": None if v.negative is None else formats.orbit_to_dict(v.negative, tau)}
        _emit_json(args, out)
        return 0
    _emit_json(args, [formats.orbit_to_dict(o, tau) for o in orbits])
    return 0


def _fat_hole_args(args):
    lam = _lam(args)
    try:
        return build_fat_hole(lam, args.grid or 2 ** 17)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def cmd_render(args) -> int:
    params = None
    if args.example == "fat-hole":
        tau, params = _fat_hole_args(args)
        p = SkewParams(2, params.lam, tau)
    else:
        p = _params(args)
    b = boundary_fixed_point(p, args.grid, args.tol)
    img = blank(args.width, args.height, p.t0)
    lo, hi = b.rho_minus.samples, b.rho_plus.samples
    draw_band(img, lambda x: interpolate(lo, x), lambda x: interpolate(hi, x), BAND)
    if params is not None:
        draw_band(img, lambda x: interpolate(lo, x), lambda x: region_top(params, x), REGION)
    if args.points:
        theta, t = sample_attractor(p, args.points, seed=args.seed)
        draw_points(img, theta, t, POINTS)
    data = img.to_pgm()
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


def cmd_example(args) -> int:
    if args.family == "fat-hole":
        tau, params = _fat_hole_args(args)
        out = {"tau_spec": {"type": "fat_hole", "lambda": params.lam, "n_samples": tau.n_samples},
               "params": params.to_dict(), "invariants": params.check_invariants()}
        if args.verify:
            p = SkewParams(2, params.lam, tau)
            b = boundary_fixed_point(p, tol=args.tol)
            out["verification"] = verify_fat_hole(tau, params, b).to_dict()
            out["classification"] = classify(p, b).to_dict()
        _emit_json(args, out)
        return 0
    entry = annulus_scan_log_quadratic(_lam(args), [args.c_mod], [args.c_arg],
                                       args.grid or 1024, args.tol)[0]
    _emit_json(args, vars(entry))
    return 2 if entry.failure else 0


def cmd_perturbed(args) -> int:
    if not args.tau:
        raise SpecError("--tau is required")
    spec = formats.load_json(args.tau)
    lam = args.lam if args.lam is not None else spec.get("lambda") if isinstance(spec, dict) else None
    if lam is None:
        raise SpecError("--lambda is required")
    F = formats.map_from_spec(spec, args.ell, lam, args.grid)
    gc = estimate_constants(F, safety=args.safety)
    b = perturbed_boundaries(F, gc, n=args.grid or 1024, tol=args.tol)
    cls = classify_map(F, gc, b)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(formats.boundaries_csv(b))
    _emit_json(args, {"classification": cls.to_dict(), "iterations": b.iterations,
                      "residual": b.residual,
                      "constants": {"ell0": gc.ell0, "lambda0": gc.lambda0, "c12": gc.c12,
                                    "c21": gc.c21, "c": gc.c, "lambda_hat": gc.lambda_hat,
                                    "amplification": gc.amplification}})
    return 0


COMMANDS = {
    "boundaries": cmd_boundaries,
    "classify": cmd_classify,
    "scan-jordan": cmd_scan_jordan,
    "solve-cohomology": cmd_solve,
    "decompose": cmd_decompose,
    "birkhoff": cmd_birkhoff,
    "render": cmd_render,
    "example": cmd_example,
    "perturbed": cmd_perturbed,
}


def run(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BrokenPipeError:
        return 0
    except NUMERIC_FAILURES as exc:
        print(f"solenoid: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (SpecError, EmptyInput, ValueError, OSError) as exc:
        print(f"solenoid: {exc}", file=sys.stderr)
        return 1


def main(argv: Optional[list] = None) -> None:
    sys.exit(run(argv))
