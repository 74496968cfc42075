"""Command-line interface.

    bilinsphere larc        --system sys.json [--samples N] [--depth D] [--tol T]
    bilinsphere normal-form --system sys.json [--tol T]
    bilinsphere plan        --system sys.json --from x,y,z --to x,y,z [--tol T]
    bilinsphere simulate    --system sys.json --plan plan.json [--step H] [--csv out.csv]

Results go to stdout as JSON. Exit codes: 0 success, 1 input error,
2 when the system fails the rank condition or cannot be steered.
Negative coordinates need the ``--from=-1,0,0`` spelling.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .errors import BilinSphereError, BracketVanishes, InternalValidation, NotSkew, ZeroMatrix
from .larc import DEFAULT_DEPTH, DEFAULT_SAMPLES, check_larc
from .normal_form import conjugated_bracket, ensure_b3_nonzero, reduce_system
from .planner import SteeringPlan, plan as make_plan, validate_plan
from .simulator import DEFAULT_STEP, integrate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILED = 2


class InputError(Exception):
    pass


def _load_system(path):
    try:
        return serialize.load_system(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _require_skew(system):
    if not system.skew:
        raise InputError("this command needs skew-symmetric A and B")


def cmd_larc(args) -> int:
    system = _load_system(args.system)
    if args.samples < 1 or args.depth < 2:
        raise InputError("--samples must be >= 1 and --depth >= 2")
    report = check_larc(system, n_samples=args.samples, depth=args.depth, tol=args.tol)
    out = report.to_dict()
    out["skew"] = system.skew
    if system.label is not None:
        out["label"] = system.label
    _emit(out)
    return EXIT_OK if report.satisfied else EXIT_FAILED


def cmd_normal_form(args) -> int:
    system = _load_system(args.system)
    _require_skew(system)
    nf = reduce_system(system.A, system.B, args.tol)
    bracket = conjugated_bracket(nf)
    vanishes = nf.alpha <= args.tol
    if not vanishes:
        nf = ensure_b3_nonzero(nf, args.tol)
    out = nf.to_dict()
    out["bracket_vanishes"] = vanishes
    out["conjugated_bracket"] = bracket.tolist()
    _emit(out)
    return EXIT_OK


def cmd_plan(args) -> int:
    system = _load_system(args.system)
    _require_skew(system)
    try:
        start = serialize.parse_point(args.start)
        target = serialize.parse_point(args.target)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        p = make_plan(system.A, system.B, start, target, tol=args.tol)
    except BracketVanishes as exc:
        print(f"error: {exc}. Controllability on the sphere is only guaranteed "
              "when [A, B] != 0.", file=sys.stderr)
        return EXIT_FAILED
    out = p.to_dict()
    out["validation_error"] = validate_plan(p, system.A, system.B)
    _emit(out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    system = _load_system(args.system)
    try:
        plan = SteeringPlan.from_dict(serialize.load_json(args.plan))
    except OSError as exc:
        raise InputError(f"cannot read {args.plan}: {exc.strerror or exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad plan file: {exc}") from exc
    if not args.step > 0:
        raise InputError("--step must be positive")
    traj = integrate(system, plan.waypoints[0], plan.segments, args.step,
                     record=args.csv is not None)
    if args.csv is not None:
        Path(args.csv).write_text(traj.to_csv())
    err = float(np.linalg.norm(traj.endpoint - plan.target))
    _emit({
        "endpoint": traj.endpoint.tolist(),
        "target": plan.target.tolist(),
        "endpoint_error": err,
        "step": args.step,
        "samples": len(traj),
        "total_time": plan.total_time,
    })
    return EXIT_OK


def _emit(obj) -> None:
    sys.stdout.write(serialize.dumps(obj))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilinsphere",
        description="Rank-condition checks and steering plans for s' = A s + u B s on the sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("larc", help="check the Lie algebra rank condition")
    p.add_argument("--system", required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_larc)

    p = sub.add_parser("normal-form", help="print the normal-form frame of a skew pair")
    p.add_argument("--system", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("plan", help="build a piecewise-constant steering plan")
    p.add_argument("--system", required=True)
    p.add_argument("--from", dest="start", required=True, metavar="X,Y,Z")
    p.add_argument("--to", dest="target", required=True, metavar="X,Y,Z")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="replay a plan with RK4")
    p.add_argument("--system", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--step", type=float, default=DEFAULT_STEP)
    p.add_argument("--csv", default=None, help="write the sampled trajectory here")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; map to the input-error code
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, NotSkew, ZeroMatrix) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalValidation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BilinSphereError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
