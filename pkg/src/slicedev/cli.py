"""Command-line front end.

Exit codes: 0 pass, 1 invariant failure, 2 input validation failure,
3 I/O or parse failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import polytope as pt
from . import tolerance
from .arm import trial_seed
from .chain import configure
from .develop import (
    NOTHING_TO_PROVE,
    boundary_spec,
    check_curve,
    check_slice_theorem,
    congruent,
)
from .indicatrix import build_indicatrix
from .polytope import OFFParseError, PlaneSpec, PolytopeError, SliceCurve, SliceVariant
from .suites import SUITES, run_all
from .svg import render

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("slicedev")


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    trials: int = 1
    tol: tolerance.Tolerance = tolerance.DEFAULT
    report: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise CLIError("--trials must be >= 1", EXIT_INVALID)
        if not 0 <= self.seed < 2**64:
            raise CLIError("--seed must be a 64-bit unsigned integer", EXIT_INVALID)


def _dump(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _write_text(path: str, text: str):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _load_polytope(path: str) -> pt.Polytope:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}", EXIT_IO) from None
    try:
        return pt.load_off(text)
    except OFFParseError as exc:
        raise CLIError(f"{path}: {exc}", EXIT_IO) from None
    except PolytopeError as exc:
        raise CLIError(f"{path}: invalid polytope: {exc}", EXIT_INVALID) from None


def _parse_plane(text: str) -> PlaneSpec:
    try:
        return PlaneSpec.parse(text)
    except ValueError as exc:
        raise CLIError(f"bad --plane: {exc}", EXIT_IO) from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}", EXIT_IO) from None
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: {exc}", EXIT_IO) from None


# ---------------------------------------------------------------- commands

def cmd_slice(args) -> int:
    p = _load_polytope(args.polytope)
    plane = _parse_plane(args.plane)
    result = pt.slice(p, plane)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _dump(result.to_dict(), args.out)
    if args.out:
        print(f"{result.variant.value}: {len(result.curve.corners) if result.curve else 0} corners")
    return EXIT_OK


def _status(flag: bool) -> str:
    return "PASS" if flag else "FAIL"


def _develop_one(curve: SliceCurve, args) -> int:
    rep = check_curve(curve)
    sides = {"right": [rep.right], "left": [rep.left], "both": [rep.right, rep.left]}[args.side]
    out = [d.to_dict() for d in sides]
    _dump(out[0] if len(out) == 1 else out, args.out)
    print(f"{_status(rep.angle_bounds and rep.edge_sums)} angle bounds")
    print(f"{_status(rep.valid_reconfiguration)} valid reconfiguration")
    print(f"{_status(rep.right_simple)} simplicity (right development)")
    if args.side in ("left", "both"):
        print(f"{'yes' if rep.left_simple else 'no'}: left development simple (reported only)")
    if args.side == "both":
        print(f"congruent right/left: {'yes' if congruent(rep.right, rep.left) else 'no'}")
    if args.svg:
        a = configure(boundary_spec(curve))
        dev = sides[0]
        _write_text(args.svg, render(a.joints, dev.chain.joints, a.hand_distance(),
                                     title=f"{dev.side.value} development"))
    if args.dump_indicatrix:
        for d in sides:
            print(json.dumps({"side": d.side.value, **build_indicatrix(d.chain).to_dict()},
                             sort_keys=True))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _degenerate(variant: str, args) -> int:
    _dump({"variant": variant, "message": NOTHING_TO_PROVE}, args.out)
    print(f"PASS {variant}: {NOTHING_TO_PROVE}")
    return EXIT_OK


def _batch(args) -> int:
    seed = args.seed
    passed = nondegenerate = 0
    for i in range(args.batch):
        rng = np.random.default_rng(trial_seed(seed, i))
        p = pt.random_hull(int(rng.integers(4, args.points + 1)), rng)
        rep = check_slice_theorem(p, pt.random_plane(p, rng))
        passed += rep.passed
        nondegenerate += rep.variant is SliceVariant.CURVE
        if not rep.passed:
            print(f"FAIL trial {i} (trial seed {trial_seed(seed, i)})")
    print(f"batch: {passed}/{args.batch} slices pass ({nondegenerate} nondegenerate), seed {seed}")
    return EXIT_OK if passed == args.batch else EXIT_FAIL


def cmd_develop(args) -> int:
    if args.batch:
        return _batch(args)
    if args.slice:
        data = _load_json(args.slice)
        variant = data.get("variant", SliceVariant.CURVE.value)
        if variant != SliceVariant.CURVE.value:
            return _degenerate(variant, args)
        try:
            curve = SliceCurve.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise CLIError(f"{args.slice}: malformed slice JSON ({exc})", EXIT_IO) from None
        return _develop_one(curve, args)
    if not (args.polytope and args.plane):
        raise CLIError("give --slice, or --polytope with --plane, or --batch", EXIT_INVALID)
    p = _load_polytope(args.polytope)
    result = pt.slice(p, _parse_plane(args.plane))
    if result.variant is not SliceVariant.CURVE:
        return _degenerate(result.variant.value, args)
    return _develop_one(result.curve, args)


def cmd_verify(args, tol: tolerance.Tolerance) -> int:
    cfg = RunConfig(seed=args.seed, trials=args.trials, tol=tol, report=args.report, jobs=args.jobs)
    suites = SUITES if args.suite == "all" else (args.suite,)
    start = time.perf_counter()
    report = run_all(suites, cfg.trials, cfg.seed, cfg.jobs)
    elapsed = time.perf_counter() - start
    for name, r in report["suites"].items():
        n_fail = len(r["failures"])
        print(f"{name}: {_status(n_fail == 0)} {r['trials']} trials, {n_fail} failures, "
              f"min margin {r['min_margin']}")
    for f in report["failures"][:20]:
        print(f"  failed {f['suite']}/{f['check']} trial {f['trial']} "
              f"(replay trial seed {f['trial_seed']})")
    print(f"elapsed {elapsed:.1f}s", file=sys.stderr)
    if cfg.report:
        _dump(report, cfg.report)
    return EXIT_OK if not report["failures"] else EXIT_FAIL


def cmd_gen(args) -> int:
    if args.shape == "cube":
        p = pt.cube()
    elif args.shape == "tetra":
        p = pt.tetrahedron()
    else:
        if args.points < 4:
            raise CLIError(f"random-hull needs --points >= 4, got {args.points}", EXIT_INVALID)
        p = pt.random_hull(args.points, args.seed)
    text = pt.to_off(p)
    if args.out and args.out != "-":
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slicedev", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--eps-len", type=float, help="relative length tolerance override")
    ap.add_argument("--eps-angle", type=float, help="angle tolerance override (radians)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("slice", help="slice a polytope with a plane")
    s.add_argument("--polytope", required=True, metavar="PATH.off")
    s.add_argument("--plane", required=True, metavar="nx,ny,nz,d")
    s.add_argument("--out", metavar="PATH.json")
    s.set_defaults(func=cmd_slice)

    d = sub.add_parser("develop", help="develop a slice curve in the plane")
    d.add_argument("--slice", metavar="PATH.json")
    d.add_argument("--polytope", metavar="PATH.off")
    d.add_argument("--plane", metavar="nx,ny,nz,d")
    d.add_argument("--side", choices=("right", "left", "both"), default="right")
    d.add_argument("--svg", metavar="PATH.svg")
    d.add_argument("--out", metavar="PATH.json")
    d.add_argument("--batch", type=int, default=0, metavar="N",
                   help="check N random (hull, plane) pairs instead")
    d.add_argument("--points", type=int, default=50, help="max hull size in batch mode")
    d.add_argument("--seed", type=int, default=7)
    d.add_argument("--dump-indicatrix", action="store_true",
                   help="print link directions and cumulative turning as JSON")
    d.set_defaults(func=cmd_develop)

    v = sub.add_parser("verify", help="run randomized property suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--report", metavar="PATH.json")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="write a convex polytope as OFF")
    g.add_argument("--shape", choices=("cube", "tetra", "random-hull"), required=True)
    g.add_argument("--points", type=int, default=50)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--out", metavar="PATH.off")
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    prev = tolerance.current()
    try:
        tol = tolerance.from_env(base=prev)
        if args.eps_len is not None:
            tol = dataclasses.replace(tol, length=args.eps_len)
        if args.eps_angle is not None:
            tol = dataclasses.replace(tol, angle=args.eps_angle)
    except ValueError as exc:
        print(f"error: bad tolerance override: {exc}", file=sys.stderr)
        return EXIT_INVALID
    tolerance.set_current(tol)
    try:
        if args.func is cmd_verify:
            return cmd_verify(args, tol)
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    finally:
        tolerance.set_current(prev)


if __name__ == "__main__":
    sys.exit(main())
