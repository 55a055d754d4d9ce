"""Command-line front end.

Exit codes: 0 success, 1 failed verification or other library error,
2 malformed input, 3 not realisable in the requested space, 4 OBJ export
requested for something other than a euclidean octahedron.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import epbq
from .butterfly import classify, gh_from_json
from .errors import (
    ContractViolation,
    FlexPolyError,
    NotRealisableHereError,
    SpecError,
    WitnessError,
)
from .flexbuild import DEFAULT_TOLS, build, frame_at, sample_grid, verify
from .geometry import SpaceKind
from .io import dumps, frame_obj, frame_to_json, loads, polytope_to_json, spec_from_json, spec_to_json
from .witnesses import witnesses

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NOT_HERE, EXIT_OBJ = 0, 1, 2, 3, 4


class ObjExportError(FlexPolyError):
    pass


def _read(path: str, what: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return loads(text, what if path == "-" else path)


def _emit(payload, out: str | None) -> None:
    text = dumps(payload)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_objs(poly, grid, obj_dir: str) -> None:
    if poly.spec.n != 3 or poly.space.kind is not SpaceKind.EUCLIDEAN:
        raise ObjExportError(
            f"OBJ export needs a euclidean octahedron (n = 3), got n = {poly.spec.n} in {poly.space.kind.value} space"
        )
    d = Path(obj_dir)
    d.mkdir(parents=True, exist_ok=True)
    for i, u in enumerate(grid):
        (d / f"frame_{i:04d}.obj").write_text(frame_obj(frame_at(poly, u)), encoding="utf-8")


def _spec(args):
    try:
        return spec_from_json(_read(args.input, "spec"))
    except ContractViolation as exc:
        raise SpecError(str(exc)) from exc


def cmd_construct(args) -> int:
    poly = build(_spec(args))
    if args.obj_dir:
        _write_objs(poly, sample_grid(poly.spec.curve, 1), args.obj_dir)
    _emit(polytope_to_json(poly), args.out)
    return EXIT_OK


def cmd_flex(args) -> int:
    poly = build(_spec(args))
    grid = sample_grid(poly.spec.curve, args.samples)
    if args.obj_dir:
        _write_objs(poly, grid, args.obj_dir)
    frames = [frame_to_json(frame_at(poly, u)) for u in grid]
    _emit({"space": poly.space.kind.value, "frames": frames}, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    poly = build(_spec(args))
    tols = {k: args.tol for k in DEFAULT_TOLS} if args.tol is not None else None
    report = verify(poly, args.samples, tols)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_classify(args) -> int:
    pair = gh_from_json(_read(args.input, "GH pair"))
    _emit(classify(pair).to_json(), args.out)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    curve = epbq.curve_from_json(_read(args.input, "curve"))
    cf = epbq.coeffs(curve)
    payload = epbq.coeffs_to_json(cf)
    payload["screen"] = {f"{j},{l}": v.value for (j, l), v in epbq.realisable_screen(cf).items()}
    _emit(payload, args.out)
    return EXIT_OK


def cmd_fit(args) -> int:
    cf = epbq.coeffs_from_json(_read(args.input, "coefficients"))
    fit = epbq.fit_elliptic(cf)
    _emit(
        {
            "kappa": fit.kappa,
            "k": fit.k,
            "k_prime": fit.k_prime,
            "nu": fit.nu,
            "sigma": fit.sigma,
            "mu": fit.mu,
            "pattern": fit.pattern,
            "residual": fit.residual,
        },
        args.out,
    )
    return EXIT_OK


def cmd_witness(args) -> int:
    try:
        sizes = tuple(int(s) for s in args.type.split(","))
    except ValueError as exc:
        raise SpecError(f"--type must be a comma-separated list of block sizes, got {args.type!r}") from exc
    kw = {}
    if args.family == "simplest":
        kw["seed"] = args.seed
    if args.family == "exotic":
        kw["alpha"] = args.alpha
    if args.family in ("elliptic1", "elliptic2") and args.m_prime is not None:
        kw["m_prime"] = args.m_prime
    spec = witnesses(args.family, args.space, sizes, args.param, **kw)
    _emit(spec_to_json(spec), args.out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised choices")
    common.add_argument("--tol", type=float, default=None, help="override every verification tolerance")
    common.add_argument("--samples", type=int, default=200, help="number of flexion samples")
    common.add_argument("--obj-dir", help="write one OBJ per frame (euclidean octahedra only)")

    ap = argparse.ArgumentParser(prog="flexpoly", description="Flexible cross-polytopes.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, what in (
        ("construct", cmd_construct, "build a polytope from a spec"),
        ("flex", cmd_flex, "sample frames along the flexion"),
        ("verify", cmd_verify, "check flexion invariants; exit 1 on failure"),
        ("classify", cmd_classify, "classify a (G, H) pair"),
        ("coeffs", cmd_coeffs, "pairwise relation coefficients of a curve"),
        ("fit", cmd_fit, "fit an elliptic modulus to coefficients"),
    ):
        p = sub.add_parser(name, parents=[common], help=what)
        p.add_argument("input", help="JSON file, or - for stdin")
        p.set_defaults(func=fn)
    p = sub.add_parser("witness", parents=[common], help="emit a realisable spec")
    p.add_argument("--family", required=True, choices=["simplest", "rational", "elliptic1", "elliptic2", "exotic"])
    p.add_argument("--space", required=True, choices=[k.value for k in SpaceKind])
    p.add_argument("--type", required=True, help="block sizes, e.g. 1,1,1 (simplest: n)")
    p.add_argument("--param", type=float, default=None, help="eta, delta or k' depending on the family")
    p.add_argument("--alpha", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--m-prime", type=int, default=None)
    p.set_defaults(func=cmd_witness)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ContractViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotRealisableHereError, WitnessError) as exc:
        print(f"not realisable: {exc}", file=sys.stderr)
        return EXIT_NOT_HERE
    except ObjExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OBJ
    except (FlexPolyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
