"""Command-line entry point.

Subcommands: `check` (certificate checks on a space file), `recover`
(involution and product reconstruction), `catalog` (named example spaces).
Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 input or precondition error.
Reports are deterministic for a fixed seed; the default seed comes from
the OPSPACE_SEED environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .certify import certify_coisometry, certify_isometry, certify_unitary
from .cstar import detect_cstar, recover_product
from .errors import InvalidInputError, PreconditionError, SolverError
from .funcspace import (SampledFunctionSpace, catalog_entry, catalog_names,
                        g_hermitian_solve, min_opspace, scalar_unitary_check)
from .hermit import is_u_hermitian, is_u_positive
from .opspace import ConcreteOpSpace
from .order import Cone, norm_order_unit_check
from .report import FAIL, INCONCLUSIVE, PASS, CertificateReport
from .serialize import SpaceFile, dumps_report
from .solver import SolverConfig
from .sysdetect import detect_operator_system, recover_involution
from .tro import generate_tro, involution

EXIT_BY_VERDICT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_INPUT_ERROR = 3

MATRIX_CHECKS = ("unitary", "isometry", "coisometry", "hermitian",
                 "positive", "system", "cstar", "order-unit")
FUNCTION_CHECKS = ("function-unitary", "function-system")


def _default_seed() -> int:
    raw = os.environ.get("OPSPACE_SEED")
    if raw is None:
        return 7
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(
            f"OPSPACE_SEED must be an integer, got {raw!r}") from None


def _parse_coeffs(text: str, label: str) -> np.ndarray:
    """A JSON array; entries are reals or [re, im] pairs."""
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"--{label}: invalid JSON ({exc})") from None
    if not isinstance(node, list):
        raise InvalidInputError(f"--{label}: expected a JSON array")
    vals = []
    for i, v in enumerate(node):
        if isinstance(v, (int, float)):
            vals.append(complex(v))
        elif (isinstance(v, list) and len(v) == 2
              and all(isinstance(w, (int, float)) for w in v)):
            vals.append(complex(v[0], v[1]))
        else:
            raise InvalidInputError(
                f"--{label}[{i}]: expected a number or [re, im] pair")
    return np.array(vals, dtype=np.complex128)


def _load_space_file(path: str) -> SpaceFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return SpaceFile.loads(fh.read())
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None


def _solver_config(args, sf: SpaceFile) -> SolverConfig:
    config = SolverConfig()
    overrides = dict(sf.solver or {})
    if getattr(args, "t_grid", None):
        overrides["t_grid"] = tuple(
            float(v) for v in args.t_grid.split(","))
    known = {f for f in SolverConfig.__dataclass_fields__}
    bad = set(overrides) - known
    if bad:
        raise InvalidInputError(f"unknown solver overrides: {sorted(bad)}")
    if "t_grid" in overrides:
        overrides["t_grid"] = tuple(float(v) for v in overrides["t_grid"])
    config = replace(config, **overrides)
    config = replace(config, root_seed=args.seed)
    config.validate()
    return config


def _emit(args, reports, command: str, extra: dict | None = None) -> None:
    for rep in reports:
        line = f"{rep.name}: {rep.verdict} (margin={rep.margin:.6g})"
        print(line)
    if extra:
        for key, val in extra.items():
            if not isinstance(val, (dict, list)):
                print(f"{key}: {val}")
    if args.out:
        text = dumps_report(reports, command, args.seed, __version__,
                            extra=extra)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _wrap_hermitian(space, uc, xc, config) -> CertificateReport:
    prof = is_u_hermitian(space, uc, xc, t_grid=config.t_grid)
    return CertificateReport(
        name="u-hermitian", verdict=PASS if prof.passed else FAIL,
        margin=prof.min_slack + prof.tol,
        witness=None if prof.passed else {"element": prof.coeffs},
        diagnostics={"scalar_slack": prof.scalar_slack,
                     "matricial_slack": prof.matricial_slack,
                     "scaled": prof.scaled,
                     "element_norm": prof.element_norm})


def _wrap_function_system(fspace, gc) -> CertificateReport:
    res = g_hermitian_solve(fspace, gc)
    ok = res.is_function_system
    return CertificateReport(
        name="function-system", verdict=PASS if ok else FAIL,
        margin=float(res.complex_dim - fspace.dim),
        witness=None,
        diagnostics={"real_dim": res.real_dim,
                     "complex_dim": res.complex_dim,
                     "space_dim": fspace.dim})


def cmd_check(args) -> int:
    sf = _load_space_file(args.space)
    built = sf.build_space()
    config = _solver_config(args, sf)
    kind = args.kind
    if kind in FUNCTION_CHECKS:
        if not isinstance(built, SampledFunctionSpace):
            raise InvalidInputError(
                f"check {kind} requires a function-kind space file")
        fspace = built
        gc = fspace.unit_coeffs() if args.element is None else \
            _parse_coeffs(args.element, "element")
        if kind == "function-unitary":
            rep = scalar_unitary_check(fspace, gc, seed=args.seed,
                                       tol=args.tol)
        else:
            rep = _wrap_function_system(fspace, gc)
        _emit(args, [rep], _echo(args))
        return EXIT_BY_VERDICT[rep.verdict]
    space = min_opspace(built) if isinstance(built, SampledFunctionSpace) \
        else built
    uc = space.unit_coeffs()
    if kind in ("hermitian", "positive"):
        if args.element is None:
            raise InvalidInputError(f"check {kind} requires --element")
        xc = space.as_coeffs(_parse_coeffs(args.element, "element"))
        rep = _wrap_hermitian(space, uc, xc, config) if kind == "hermitian" \
            else is_u_positive(space, uc, xc)
    elif kind == "unitary":
        rep = certify_unitary(space, uc, max_level=args.level, config=config)
    elif kind == "isometry":
        rep = certify_isometry(space, uc, max_level=args.level, config=config)
    elif kind == "coisometry":
        rep = certify_coisometry(space, uc, max_level=args.level,
                                 config=config)
    elif kind == "system":
        rep = detect_operator_system(space, uc, config=config)
    elif kind == "cstar":
        rep, _ = detect_cstar(space, uc, config=config)
    elif kind == "order-unit":
        if sf.cone is None:
            raise InvalidInputError(
                "check order-unit requires a cone in the space file")
        cone = Cone(space, sf.cone)
        rep = norm_order_unit_check(cone, uc, seed=args.seed)
    else:
        raise InvalidInputError(f"unknown check kind: {kind!r}")
    _emit(args, [rep], _echo(args))
    return EXIT_BY_VERDICT[rep.verdict]


def cmd_recover(args) -> int:
    sf = _load_space_file(args.space)
    built = sf.build_space()
    space = min_opspace(built) if isinstance(built, SampledFunctionSpace) \
        else built
    config = _solver_config(args, sf)
    uc = space.unit_coeffs()
    if args.kind == "involution":
        if args.x is None:
            raise InvalidInputError("recover involution requires --x")
        xc = space.as_coeffs(_parse_coeffs(args.x, "x"))
        elem = recover_involution(space, uc, xc, t_large=args.t,
                                  config=config)
        extra = {"recovered": elem.coeffs,
                 "bound": 1.0 / args.t + 1.0 / args.t ** 2}
        closure = generate_tro(space)
        if closure.stable:
            truth = involution(closure, uc, xc)
            err = float(np.linalg.norm(space.embed(elem.coeffs) - truth, 2))
            extra["ambient_error"] = err
        rep = CertificateReport(
            name="recover-involution", verdict=PASS, margin=0.0,
            witness={"coeffs": elem.coeffs},
            diagnostics={k: v for k, v in extra.items() if k != "recovered"})
        _emit(args, [rep], _echo(args), extra=extra)
        return 0
    if args.v is None or args.y is None:
        raise InvalidInputError("recover product requires --v and --y")
    vc = space.as_coeffs(_parse_coeffs(args.v, "v"))
    yc = space.as_coeffs(_parse_coeffs(args.y, "y"))
    res = recover_product(space, uc, vc, yc, t=args.t, config=config)
    amb_err = float(np.linalg.norm(
        space.embed(res.element.coeffs) - res.ambient_truth, 2))
    extra = {"recovered": res.element.coeffs, "achieved": res.achieved,
             "target": res.target, "bound": res.bound,
             "ambient_error": amb_err, "escaped": res.escaped}
    verdict = FAIL if res.escaped else PASS
    rep = CertificateReport(
        name="recover-product", verdict=verdict,
        margin=res.target + config.fail_tol - res.achieved,
        witness={"coeffs": res.element.coeffs},
        diagnostics={"achieved": res.achieved, "target": res.target,
                     "bound": res.bound, "ambient_error": amb_err,
                     "escaped": res.escaped})
    _emit(args, [rep], _echo(args), extra=extra)
    if res.escaped:
        print("product escapes the space", file=sys.stderr)
        return 1
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog_names():
            print(name)
        return 0
    entry = catalog_entry(args.name)
    built = entry.build(args.points)
    sf = SpaceFile.from_space(built)
    text = sf.dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _echo(args) -> str:
    parts = [args.command]
    for key in ("kind", "action", "name", "space", "element", "x", "v", "y",
                "level", "t", "t_grid", "tol", "points", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            parts.append(f"{key}={val}")
    return " ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opcert",
        description="certificates for unital operator spaces")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a certificate check")
    check.add_argument("kind", choices=MATRIX_CHECKS + FUNCTION_CHECKS)
    check.add_argument("--space", required=True)
    check.add_argument("--element", default=None,
                       help="JSON coefficient array, entries x or [re, im]")
    check.add_argument("--level", type=int, default=2)
    check.add_argument("--t-grid", dest="t_grid", default=None)
    check.add_argument("--tol", type=float, default=None)
    check.add_argument("--seed", type=int, default=None)
    check.add_argument("--out", default=None)
    check.set_defaults(func=cmd_check)

    recover = sub.add_parser("recover", help="reconstruct hidden structure")
    recover.add_argument("kind", choices=("involution", "product"))
    recover.add_argument("--space", required=True)
    recover.add_argument("--x", default=None)
    recover.add_argument("--v", default=None)
    recover.add_argument("--y", default=None)
    recover.add_argument("--t", type=float, default=100.0)
    recover.add_argument("--seed", type=int, default=None)
    recover.add_argument("--out", default=None)
    recover.set_defaults(func=cmd_recover)

    catalog = sub.add_parser("catalog", help="named example spaces")
    catalog.add_argument("action", choices=("list", "emit"))
    catalog.add_argument("name", nargs="?", default=None)
    catalog.add_argument("--points", type=int, default=None)
    catalog.add_argument("--out", default=None)
    catalog.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", None) is None:
            args.seed = _default_seed()
        if args.command == "catalog" and args.action == "emit" \
                and not args.name:
            raise InvalidInputError("catalog emit requires a name")
        return args.func(args)
    except (InvalidInputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
