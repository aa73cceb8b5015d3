"""Command-line front end.

    stable-border soi --tolerance 0.15,0.15 line.csv
    stable-border border-basis --tolerance 0.25,0.25 hyperbola.csv   # exit 2
    stable-border bm line.csv
    stable-border verify --tolerance 0.15,0.15 --trials 1000 --seed 1 line.csv

Set STABLE_BORDER_LOG=DEBUG to log every SOI decision.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import report
from .basis import (
    NotAQuotientBasisError,
    SingularEvaluationError,
    border_basis,
    estimate_stability_radius,
    verify_stability,
)
from .bm import bm_quotient_basis
from .folinalg import Arithmetic
from .monomial import TermOrdering, parse_term
from .points import (
    EmpiricalPointSet,
    parse_tolerance,
    rational_rows,
    read_csv_rows,
    read_tolerance_sidecar,
    validate,
)
from .soi import soi

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_QUOTIENT_BASIS = 2

COMMANDS = ("soi", "border-basis", "bm", "verify", "radius")
NEEDS_TOLERANCE = ("soi", "border-basis", "verify")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: Path
    tolerance: tuple[float, ...] | None = None
    ordering: str = "deglex"
    precision: int = 53
    trials: int = 1000
    seed: int = 0
    format: str = "text"
    candidate_rule: str = "literal"
    order_ideal: str | None = None
    sign_test: bool = True
    verbose: bool = False


def _load_points(config: RunConfig) -> tuple[list[list[str]], EmpiricalPointSet | None]:
    try:
        rows = read_csv_rows(config.input)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None
    n = len(rows[0])
    tol = config.tolerance
    if tol is None:
        sidecar = Path(config.input).with_suffix(".json")
        if sidecar.exists():
            tol = tuple(read_tolerance_sidecar(sidecar))
    if tol is None:
        if config.command in NEEDS_TOLERANCE:
            raise InputError(f"{config.command} needs --tolerance")
        return rows, None
    if len(tol) != n:
        raise InputError(f"tolerance has {len(tol)} entries for {n}-dimensional points")
    X = EmpiricalPointSet(np.array(rows, dtype=float), tol)
    problems = validate(X)
    if problems:
        raise InputError("invalid point set:\n  " + "\n  ".join(problems))
    return rows, X


def _order_ideal_arg(text: str, n: int):
    return [parse_term(t, n) for t in text.split(",") if t.strip()]


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one subcommand; returns ``(exit status, report text)``."""
    if config.command not in COMMANDS:
        raise InputError(f"unknown command {config.command!r}")
    if config.precision < 53:
        raise InputError("--precision must be at least 53")
    ordering = TermOrdering(config.ordering)
    arith = Arithmetic(config.precision)
    as_json = config.format == "json"
    rows, X = _load_points(config)

    if config.command == "bm":
        g = bm_quotient_basis(rational_rows(rows), ordering)
        return EXIT_OK, report.render_json(report.bm_to_dict(g)) if as_json else report.bm_text(g)

    if config.command == "radius":
        pts = np.array(rows, dtype=float)
        O = _order_ideal_arg(config.order_ideal, pts.shape[1]) if config.order_ideal else None
        if O is None:
            if X is None:
                raise InputError("radius needs --order-ideal or --tolerance")
            O = list(soi(X, ordering, config.candidate_rule, arith).order_ideal)
        try:
            r = estimate_stability_radius(O, pts, trials=config.trials, seed=config.seed)
        except SingularEvaluationError as exc:
            raise InputError(str(exc)) from None
        data = {"order_ideal": [str(t) for t in O], "radius": r, "trials": config.trials, "seed": config.seed}
        return EXIT_OK, report.render_json(data) if as_json else f"O = {report.format_terms(O)}\nradius ~ {r:.6g}"

    result = soi(X, ordering, config.candidate_rule, arith)

    if config.command == "soi":
        text = report.render_json(report.soi_to_dict(result)) if as_json else report.soi_text(result, config.verbose)
        return (EXIT_OK if result.is_quotient_basis else EXIT_NOT_QUOTIENT_BASIS), text

    if config.command == "border-basis":
        try:
            bb = border_basis(result.order_ideal, X.points, ordering)
        except NotAQuotientBasisError as exc:
            body = report.render_json({"soi": report.soi_to_dict(result), "error": str(exc)}) if as_json \
                else report.soi_text(result) + f"\n{exc}"
            return EXIT_NOT_QUOTIENT_BASIS, body
        if as_json:
            return EXIT_OK, report.render_json({"soi": report.soi_to_dict(result),
                                                "border_basis": report.border_basis_to_dict(bb)})
        return EXIT_OK, report.soi_text(result) + "\nB =\n" + report.border_basis_text(bb)

    # verify
    O = _order_ideal_arg(config.order_ideal, X.n) if config.order_ideal else list(result.order_ideal)
    rep = verify_stability(O, X, config.trials, config.seed, sign_test=config.sign_test)
    if as_json:
        return EXIT_OK, report.render_json(report.stability_to_dict(rep, O, config.seed))
    return EXIT_OK, report.stability_text(rep, O)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stable-border",
                                description="Stable order ideals and border bases of empirical points.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", type=Path, help="CSV file, one point per row")
    p.add_argument("--tolerance", type=parse_tolerance, help="eps_1,...,eps_n")
    p.add_argument("--tolerance-file", type=Path, help='JSON sidecar {"tolerance": [...]}')
    p.add_argument("--ordering", default="deglex", choices=["deglex"])
    p.add_argument("--precision", type=int, default=53, help="mantissa bits (53 = double)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--candidate-rule", default="literal", choices=["literal", "bm"])
    p.add_argument("--order-ideal", help="comma-separated terms for verify/radius, e.g. 1,y,x,y^2")
    p.add_argument("--rank-only", action="store_true",
                   help="verify: skip the determinant sign-change test")
    p.add_argument("-v", "--verbose", action="store_true", help="print the SOI trace")
    return p


def main(argv=None) -> int:
    level = os.environ.get("STABLE_BORDER_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    tol = args.tolerance
    if tol is None and args.tolerance_file is not None:
        tol = read_tolerance_sidecar(args.tolerance_file)
    config = RunConfig(
        command=args.command, input=args.input, tolerance=tuple(tol) if tol else None,
        ordering=args.ordering, precision=args.precision, trials=args.trials, seed=args.seed,
        format=args.format, candidate_rule=args.candidate_rule, order_ideal=args.order_ideal,
        sign_test=not args.rank_only, verbose=args.verbose,
    )
    try:
        status, text = run(config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
