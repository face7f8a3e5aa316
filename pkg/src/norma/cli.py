"""Command-line front end.

The JSON report goes to standard output and a short human summary to standard
error. Exit codes: 0 everything passed, 1 a check failed, 2 unreadable input or
bad usage, 3 invalid input, 4 a computational precondition does not hold.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import Any, Sequence

from . import __version__
from .algebra import FiniteAlgebra, polynomial_algebra, split_algebra
from .azumaya import matrix_quaternion_over, quaternion_over
from .document import bundled_fixtures, element_coords, load_document, parse_document
from .errors import InputParseError, NormaError
from .norm import free_module, split_module
from .scalars import polynomial_coefficients
from .suite import CRITERIA, run_suite
from .tasks import a1d2_report, field_for, gamma_basis, norm_summary, quadpair_split, run_document, segre_det


def default_seed() -> int:
    raw = os.environ.get("NORMA_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise InputParseError(f"NORMA_SEED must be an integer, got {raw!r}") from exc


def emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")


def summary(line: str) -> None:
    print(line, file=sys.stderr)


def extension_from_args(args: argparse.Namespace) -> FiniteAlgebra:
    base = field_for(args.base)
    if args.split:
        return split_algebra(base, args.split)
    return polynomial_algebra(base, polynomial_coefficients(args.etale), name=f"{base.label}[x]/({args.etale})")


def int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


# subcommands -----------------------------------------------------------------------------

def cmd_run(args: argparse.Namespace) -> int:
    doc = load_document(args.document)
    report, code = run_document(doc, args.seed, args.samples)
    emit(report)
    for entry in report["tasks"]:
        summary(f"{entry['status']:>5}  {entry['name']} ({entry['op']})" + (f": {entry['error']}" if "error" in entry else ""))
    return code


def cmd_norm(args: argparse.Namespace) -> int:
    ext = extension_from_args(args)
    module = split_module(ext, args.dims) if args.dims else free_module(ext, args.rank)
    result = norm_summary(ext, module)
    emit({"command": "norm", "status": "pass", "result": result})
    summary(f"dim N({module.name}) = {result['dimension']}")
    return 0


def cmd_gamma_basis(args: argparse.Namespace) -> int:
    result = gamma_basis(field_for(args.base), args.n, args.d)
    emit({"command": "gamma-basis", "status": "pass", "result": result})
    summary(f"Γ^{args.d} of rank {args.n}: {result['dimension']} basis multisets")
    return 0


def cmd_segre(args: argparse.Namespace) -> int:
    result = segre_det(field_for(args.field), args.perm, args.r, args.d)
    emit({"command": "segre", "status": "pass", "result": result})
    summary(f"det j{args.perm} on (F^{args.r})^⊗{args.d} over {result['field']}: det = {result['det']}")
    return 0


def cmd_quadpair_split(args: argparse.Namespace) -> int:
    result = quadpair_split(args.sizes, args.primes, args.samples, random.Random(args.seed))
    emit({"command": "quadpair-split", "status": "pass", "result": result})
    summary(f"split triple {tuple(args.sizes)}: dim Sym = {result['dim_sym']}, reductions "
            + ", ".join(result["reductions"]) + " valid")
    return 0


def cmd_a1d2(args: argparse.Namespace) -> int:
    args.split = None
    ext = extension_from_args(args)
    if args.matrix:
        quat = matrix_quaternion_over(ext)
    else:
        parts = [p.strip() for p in args.quaternion.split(",")]
        if len(parts) != 2 or not all(parts):
            raise InputParseError(f"--quaternion expects 'a,b', got {args.quaternion!r}")
        quat = quaternion_over(ext, element_coords(ext, parts[0]), element_coords(ext, parts[1]))
    result = a1d2_report(ext, quat, args.azumaya)
    emit({"command": "a1d2", "status": "pass", "result": result})
    summary(f"norm triple: degree {result['degree']}, dim Sym = {result['dim_sym']}, involution {result['involution']}, "
            f"f(1) = {result['f_one']}" + (f", Azumaya {result['azumaya']}" if "azumaya" in result else ""))
    return 0


def cmd_verify_suite(args: argparse.Namespace) -> int:
    wanted = args.criteria or ["all"]
    run_all = "all" in wanted
    if not run_all and not all(c.isdigit() for c in wanted):
        raise InputParseError(f"criteria must be numbers or 'all', got {' '.join(wanted)}")
    numbers = None if run_all else sorted({int(c) for c in wanted})
    known = {num for num, _, _ in CRITERIA}
    if numbers and not set(numbers) <= known:
        raise InputParseError(f"unknown criteria {sorted(set(numbers) - known)}; choose from 1..{len(CRITERIA)}")
    results = run_suite(args.seed, args.samples, numbers)
    report: dict[str, Any] = {"seed": args.seed, "samples": args.samples,
                              "criteria": [r.as_dict() for r in results]}
    code = 0 if all(r.passed for r in results) else 1
    for r in results:
        summary(r.line())
    if run_all:
        fixtures = []
        for name, text in bundled_fixtures():
            doc = parse_document(text)
            rep, fixture_code = run_document(doc, args.seed, args.samples)
            fixtures.append({"fixture": name, "summary": rep["summary"], "exit_code": fixture_code})
            summary(f"[{'PASS' if fixture_code == 0 else 'FAIL'}] fixture {name}")
            code = code or (1 if fixture_code else 0)
        report["fixtures"] = fixtures
    emit(report)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="norma", description="Exact norm functors for modules and algebras.")
    parser.add_argument("--version", action="version", version=f"norma {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def seeded(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help="sampler seed (default: $NORMA_SEED or 0)")
        p.add_argument("--samples", type=int, default=100, help="random samples per check")

    def extension(p: argparse.ArgumentParser, allow_split: bool = True) -> None:
        p.add_argument("--base", default="Q", help='base field: "Q" or "GF(p)"')
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--etale", metavar="POLY", help='R′ = base[x]/(POLY), e.g. "x^2-2"')
        if allow_split:
            group.add_argument("--split", type=int, metavar="D", help="R′ = base^D")

    p = sub.add_parser("run", help="run the tasks of an input document")
    p.add_argument("document")
    seeded(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("norm", help="norm of a free or split module")
    extension(p)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--rank", type=int, help="M′ = R′^rank")
    size.add_argument("--dims", type=int_list, help="E_1 × … × E_d over a split R′, e.g. 2,3")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("gamma-basis", help="basis multisets of Γ^d of a free module")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--base", default="Q")
    p.set_defaults(func=cmd_gamma_basis)

    p = sub.add_parser("segre", help="determinant of the tensor-factor permutation j(σ)")
    p.add_argument("--perm", required=True, help='cycle notation, e.g. "(1 2)"')
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--field", default="Q")
    p.set_defaults(func=cmd_segre)

    p = sub.add_parser("quadpair-split", help="the split quadratic triple over Z and its reductions")
    p.add_argument("--sizes", type=int_list, required=True, help="n_1,n_2,…")
    p.add_argument("--primes", type=int_list, default=[2])
    seeded(p)
    p.set_defaults(func=cmd_quadpair_split)

    p = sub.add_parser("a1d2", help="norm triple of a quaternion algebra over a quadratic extension")
    extension(p, allow_split=False)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--quaternion", metavar="A,B", help='parameters as polynomials in x, e.g. "-1,-1"')
    kind.add_argument("--matrix", action="store_true", help="use M₂(R′) with the symplectic involution")
    p.add_argument("--no-azumaya", dest="azumaya", action="store_false", help="skip the 256×256 enveloping check")
    p.set_defaults(func=cmd_a1d2)

    p = sub.add_parser("verify-suite", help="run the acceptance criteria")
    p.add_argument("criteria", nargs="*", help='"all" (default, also runs the bundled fixtures) or numbers')
    seeded(p)
    p.set_defaults(func=cmd_verify_suite)
    return parser


# options whose values may start with "-" (e.g. --quaternion "-1,-1")
SIGNED_VALUES = ("--quaternion", "--etale", "--perm")


def join_signed_values(argv: Sequence[str]) -> list[str]:
    out: list[str] = []
    tokens = iter(argv)
    for tok in tokens:
        if tok in SIGNED_VALUES:
            value = next(tokens, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(join_signed_values(sys.argv[1:] if argv is None else argv))
    start = time.perf_counter()
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        code = args.func(args)
    except NormaError as exc:
        summary(f"norma: {type(exc).__name__}: {exc}")
        return exc.exit_code
    summary(f"elapsed {time.perf_counter() - start:.2f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
