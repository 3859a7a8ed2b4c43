"""Command-line interface: reproducible reports over JSON fixtures.

Commands: jacobi, pfaffian, genpos, verify-exactness, toric-report.
Exit codes: 0 success / verdict true, 1 verdict false, 2 input error.
Reports are canonical JSON (sorted keys, no floats, no timestamps), so
identical inputs produce byte-identical files.  The environment variable
LOGSYMPLECTIC_WORKERS sets the worker count for the column-subset
enumeration in the general-position test.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .complexes import build_qi, verify_exactness
from .genpos import poisson_t_general
from .poisson import PoissonStructure, SkewMatrix, pfaffian, schouten
from .ring import poly_to_string
from .toric import (
    betti_torus,
    certify,
    deformation_tangent_dim,
    log_hodge_numbers,
    make_toric,
    random_skew,
)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(report: dict, out: str | None):
    if out:
        Path(out).write_text(canonical_json(report))


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _load_structure(path: str) -> PoissonStructure:
    doc = _load_json(path)
    try:
        return PoissonStructure.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad structure file {path}: {exc}") from exc


def _load_matrix(path: str) -> list[list[Fraction]]:
    doc = _load_json(path)
    try:
        size = int(doc["size"])
        entries = doc["entries"]
        grid = [[Fraction(x) for x in row] for row in entries]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad matrix file {path}: {exc}") from exc
    if len(grid) != size or any(len(r) != size for r in grid):
        raise InputError(f"matrix in {path} is not {size}x{size}")
    return grid


def cmd_jacobi(args) -> int:
    p = _load_structure(args.structure)
    bracket = schouten(p.bivector, p.bivector)
    holds = bracket.is_zero()
    report = {
        "command": "jacobi",
        "structure": p.to_json(),
        "jacobi_holds": holds,
        "self_bracket": None
        if holds
        else [
            {"indices": list(k), "coeff": poly_to_string(v)}
            for k, v in sorted(bracket.terms.items())
        ],
    }
    _emit(report, args.out)
    if holds:
        print("jacobi: PASS ([Pi,Pi] = 0)")
    else:
        print(f"jacobi: FAIL ([Pi,Pi] has {len(bracket.terms)} nonzero components)")
        for k, v in sorted(bracket.terms.items()):
            print(f"  {list(k)}: {poly_to_string(v)}")
    return EXIT_TRUE if holds else EXIT_FALSE


def cmd_pfaffian(args) -> int:
    grid = _load_matrix(args.matrix)
    try:
        value = pfaffian(grid)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {
        "command": "pfaffian",
        "size": len(grid),
        "pfaffian": str(value),
        "nonsingular": value != 0,
    }
    _emit(report, args.out)
    print(f"pfaffian: {value} ({'nonsingular' if value != 0 else 'singular'})")
    return EXIT_TRUE if value != 0 else EXIT_FALSE


def cmd_genpos(args) -> int:
    if args.t < 1:
        raise InputError("t must be >= 1")
    p = _load_structure(args.structure)
    try:
        cert = poisson_t_general(p, args.t)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {"command": "genpos", **cert.serialize()}
    _emit(report, args.out)
    if cert.verdict:
        print(f"genpos t={args.t}: PASS ({len(cert.witnesses)} column sets witnessed)")
    else:
        print(f"genpos t={args.t}: FAIL (first failing columns: {list(cert.first_failure)})")
    return EXIT_TRUE if cert.verdict else EXIT_FALSE


def _parse_index_set(raw: str) -> tuple[int, ...]:
    try:
        parts = tuple(sorted(int(x) for x in raw.split(",") if x.strip()))
    except ValueError as exc:
        raise InputError(f"bad index set {raw!r}") from exc
    if not parts:
        raise InputError("empty index set")
    return parts


def cmd_verify_exactness(args) -> int:
    if args.weight_cap < 0:
        raise InputError("weight-cap must be >= 0")
    p = _load_structure(args.structure)
    iset = _parse_index_set(args.index_set)
    try:
        piece = build_qi(p, iset, args.weight_cap)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    k_min, k_max = piece.complex.degree_range
    top = k_max if args.max_degree is None else args.max_degree
    report = verify_exactness(piece.complex, range(k_min, top + 1), args.weight_cap)
    report = {
        "command": "verify-exactness",
        "index_set": list(iset),
        "max_degree": top,
        "dphi_signs": {str(i): str(c) for i, c in sorted(piece.dphi_signs.items())},
        **report,
    }
    _emit(report, args.out)
    exact = report["verdict"] == "exact"
    print(f"verify-exactness Q{list(iset)} degrees {k_min}..{top}: {report['verdict']}")
    for row in report["table"]:
        if row["dim_cohomology"] != 0 or args.verbose:
            print(
                f"  degree {row['degree']} weight {row['weight']}: "
                f"dim H = {row['dim_cohomology']}"
            )
    return EXIT_TRUE if exact else EXIT_FALSE


def cmd_toric_report(args) -> int:
    if args.matrix:
        grid = _load_matrix(args.matrix)
    else:
        if args.n is None:
            raise InputError("either --matrix or --random with --n is required")
        rng = random.Random(args.seed)
        grid = random_skew(rng, 2 * args.n)
    try:
        t = make_toric(grid)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = certify(t)
    d = 2 * t.n
    dims = {
        "betti": [betti_torus(d, i) for i in range(d + 1)],
        "log_hodge_row0": [log_hodge_numbers(d, 0, j) for j in range(d + 1)],
    }
    if t.n >= 2:
        dims["deformation_tangent"] = deformation_tangent_dim(t.n)
    report = {
        "command": "toric-report",
        "matrix": SkewMatrix.from_rationals(t.structure.var_spec, grid).serialize(),
        "dimension_table": dims,
        **report,
    }
    _emit(report, args.out)
    print(f"toric-report n={t.n}: pfaffian {report['pfaffian']}, "
          f"nonsingular={report['nonsingular']}, jacobi={report['jacobi_holds']}")
    if report["degeneracy_divisor"]:
        dd = report["degeneracy_divisor"]
        print(f"  divisor multiplicities {dd['multiplicities']}, snc={dd['simple_normal_crossings']}")
    print(f"  general position: {report['general_position']}")
    print(f"  dimension table: {dims}")
    ok = report["log_symplectic_2_general"] and report["certificates_verified"]
    return EXIT_TRUE if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="logsymplectic",
        description="Exact checks for log-symplectic Poisson structures in local coordinates",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jacobi", help="check the Schouten self-bracket of a structure file")
    p.add_argument("--structure", required=True)
    p.add_argument("--out", help="write the canonical JSON report here")
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("pfaffian", help="Pfaffian of a constant skew matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pfaffian)

    p = sub.add_parser("genpos", help="t-general position test with certificate")
    p.add_argument("--structure", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_genpos)

    p = sub.add_parser(
        "verify-exactness",
        help="cohomology table of one graded piece of the log-plus filtration",
    )
    p.add_argument("--structure", required=True)
    p.add_argument("--I", dest="index_set", required=True, help="comma-separated divisor indices")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--weight-cap", type=int, default=4)
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_exactness)

    p = sub.add_parser("toric-report", help="full certification report of an invariant structure")
    p.add_argument("--matrix")
    p.add_argument("--random", action="store_true", help="draw a random matrix instead")
    p.add_argument("--n", type=int, default=None, help="half-dimension for --random")
    p.add_argument("--seed", type=int, default=0, help="seed for --random")
    p.add_argument("--out")
    p.set_defaults(func=cmd_toric_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
