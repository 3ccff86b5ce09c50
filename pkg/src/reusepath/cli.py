"""Command-line interface.

Exit codes: 0 success or YES, 1 input error, 2 unreachable sink, 3 NO
(also used for INVALID certificates and DISAGREE reports).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import formats, generators
from .model import InvalidPathError, reuse_length
from .reductions import (
    MalformedInputError,
    PartitionInstance,
    TooLargeError,
    UnsatisfiedClauseError,
    check_3sat_iff,
    demonstrate_flaw,
    extract_assignment,
    first_failing_clause,
    reduce_3sat,
    reduce_partition,
)
from .solvers import decide, solve_labelset

EXIT_OK, EXIT_INPUT, EXIT_UNREACHABLE, EXIT_NO = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _dominance(args) -> str:
    if args.no_dominance:
        return "none"
    if args.simple_dominance:
        return "simple"
    return "reachable"


def _partition(weights: Sequence[str]) -> PartitionInstance:
    try:
        values = tuple(int(w) for w in weights)
    except ValueError:
        raise InputError(f"item weights must be integers, got {' '.join(weights)}") from None
    return PartitionInstance(values)


def cmd_solve(args) -> int:
    instance = formats.parse_instance(_read(args.instance))
    result = solve_labelset(instance, _dominance(args))
    if not result.reachable:
        print("UNREACHABLE")
        print(f"c states_expanded {result.states_expanded}")
        return EXIT_UNREACHABLE
    cert = formats.serialize_certificate(result.witness, result.optimal_length)
    print(f"OPTIMAL {result.optimal_length}")
    sys.stdout.write(cert)
    print(f"c states_expanded {result.states_expanded}")
    print(f"c states_pruned {result.states_pruned}")
    if args.cert:
        _write(args.cert, cert)
    return EXIT_OK


def cmd_decide(args) -> int:
    if args.budget < 0:
        raise InputError("budget K must be nonnegative")
    instance = formats.parse_instance(_read(args.instance))
    ok, witness = decide(instance, args.budget, _dominance(args))
    if not ok:
        print("NO")
        return EXIT_NO
    cert = formats.serialize_certificate(witness, args.budget)
    print("YES")
    sys.stdout.write(cert)
    if args.cert:
        _write(args.cert, cert)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = formats.parse_instance(_read(args.instance))
    path, budget = formats.parse_certificate(_read(args.certificate))
    try:
        r = reuse_length(instance, path)
    except InvalidPathError as exc:
        print(f"INVALID {exc}")
        return EXIT_NO
    if r > budget:
        print(f"INVALID r={r} exceeds K={budget}")
        return EXIT_NO
    print(f"VALID r={r} within K={budget}")
    return EXIT_OK


def cmd_reduce_3sat(args) -> int:
    formula = formats.parse_dimacs_cnf(_read(args.cnf), pad_to_3=args.pad_to_3)
    instance, rmap = reduce_3sat(formula)
    comments = (f"3sat reduction: {formula.num_vars} variables, {formula.num_clauses} clauses",
                f"satisfiable iff optimum = {formula.num_vars}")
    _write(args.output, formats.serialize_instance(instance, comments))
    map_path = args.map or (args.output + ".map" if args.output and args.output != "-" else None)
    if map_path:
        _write(map_path, formats.serialize_map(rmap))
    return EXIT_OK


def cmd_extract(args) -> int:
    rmap = formats.parse_map(_read(args.map))
    path, _ = formats.parse_certificate(_read(args.certificate))
    try:
        a = extract_assignment(rmap, path)
    except InvalidPathError as exc:
        print(f"INVALID {exc}")
        return EXIT_NO
    print(f"ASSIGNMENT {formats.literal_line(a)}")
    if args.cnf:
        formula = formats.parse_dimacs_cnf(_read(args.cnf), pad_to_3=args.pad_to_3)
        if formula.num_vars != rmap.num_vars:
            raise InputError(f"formula has {formula.num_vars} variables, map has {rmap.num_vars}")
        failing = first_failing_clause(formula, a)
        print("SATISFIES" if failing is None else f"FALSIFIES clause {failing}")
    return EXIT_OK


def cmd_check_3sat(args) -> int:
    formula = formats.parse_dimacs_cnf(_read(args.cnf), pad_to_3=args.pad_to_3)
    if formula.num_vars > args.max_brute:
        raise TooLargeError(f"{formula.num_vars} variables exceeds --max-brute {args.max_brute}")
    report = check_3sat_iff(formula, _dominance(args))
    sys.stdout.write(report.render())
    return EXIT_OK if report.agree else EXIT_NO


def cmd_reduce_partition(args) -> int:
    p = _partition(args.weights)
    instance, _ = reduce_partition(p)
    comments = (f"partition reduction: items {' '.join(map(str, p.item_weights))}, B = {p.total}",)
    _write(args.output, formats.serialize_instance(instance, comments))
    return EXIT_OK


def cmd_demo_flaw(args) -> int:
    p = _partition(args.weights)
    if len(p) > args.max_brute:
        raise TooLargeError(f"{len(p)} items exceeds --max-brute {args.max_brute}")
    sys.stdout.write(demonstrate_flaw(p, _dominance(args)).render())
    return EXIT_OK


def cmd_gen_random(args) -> int:
    size = args.size
    if args.kind == "dag":
        text = formats.serialize_instance(generators.random_dag(args.seed, max_vertices=size or 12))
    elif args.kind == "colored":
        text = formats.serialize_instance(generators.random_colored_dag(args.seed, max_vertices=size or 10))
    elif args.kind == "cnf":
        text = formats.serialize_dimacs(generators.random_cnf(args.seed, max_vars=size or 8))
    else:
        p = generators.random_partition(args.seed, max_items=size or 10)
        text = " ".join(map(str, p.item_weights)) + "\n"
    _write(args.output, text)
    return EXIT_OK


def _add_dominance_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--no-dominance", action="store_true", help="disable dominance pruning")
    g.add_argument("--simple-dominance", action="store_true",
                   help="prune with whole label sets instead of reachable labels")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reusepath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal reuse length with a witness certificate")
    p.add_argument("instance", help="instance file, '-' for stdin")
    p.add_argument("--cert", help="also write the certificate to this file")
    _add_dominance_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("decide", help="is there an s-t path with reuse length <= K")
    p.add_argument("instance")
    p.add_argument("budget", type=int, metavar="K")
    p.add_argument("--cert", help="also write the certificate to this file")
    _add_dominance_flags(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="check a certificate against an instance")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce-3sat", help="build the gadget graph of a 3-CNF formula")
    p.add_argument("cnf", help="DIMACS CNF file")
    p.add_argument("-o", "--output", help="instance file (default stdout)")
    p.add_argument("--map", help="reduction map file (default <output>.map)")
    p.add_argument("--pad-to-3", action="store_true", help="pad short clauses by repeating the last literal")
    p.set_defaults(func=cmd_reduce_3sat)

    p = sub.add_parser("extract", help="read the truth assignment off a reduced-graph certificate")
    p.add_argument("map")
    p.add_argument("certificate")
    p.add_argument("--cnf", help="also evaluate the formula under the assignment")
    p.add_argument("--pad-to-3", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("check-3sat", help="compare brute-force SAT with the optimum of the reduced graph")
    p.add_argument("cnf")
    p.add_argument("--pad-to-3", action="store_true")
    p.add_argument("--max-brute", type=int, default=24, help="largest variable count to brute force")
    _add_dominance_flags(p)
    p.set_defaults(func=cmd_check_3sat)

    p = sub.add_parser("reduce-partition", help="build the PARTITION construction graph")
    p.add_argument("weights", nargs="+", help="item weights")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce_partition)

    p = sub.add_parser("demo-flaw", help="show the PARTITION construction's optimum is always B")
    p.add_argument("weights", nargs="+")
    p.add_argument("--max-brute", type=int, default=24, help="largest item count to brute force")
    _add_dominance_flags(p)
    p.set_defaults(func=cmd_demo_flaw)

    p = sub.add_parser("gen-random", help="seeded random dag, colored dag, cnf or partition")
    p.add_argument("kind", choices=("dag", "colored", "cnf", "partition"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, help="max vertices, variables or items")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_random)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, formats.FormatError, MalformedInputError, TooLargeError, UnsatisfiedClauseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
