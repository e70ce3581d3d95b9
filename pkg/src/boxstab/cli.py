"""Command-line front door.

Subcommands wrap the library operations one-to-one and exchange exact JSON
documents; all numeric output stays rational ("p/q" strings).  Exit codes
are a stable contract:

    0  success / certificate verified
    1  verification failed
    2  search budget exhausted (result, if any, is flagged best-so-far)
    3  invalid input
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import experiments, plots, serialize
from .core import Family, FamilySequence
from .counterexample import (
    NestingWitness,
    counterexample_family,
    nesting_violation,
    nesting_witness,
    union_prefix_family,
)
from .scattered import (
    RainbowCert,
    ScatteredCert,
    StripRefinement,
    max_scattered,
    greedy_scattered,
    rainbow_scattered,
    refinement_violation,
    scattered_by_slicing,
    scattered_violation,
    strip_refine,
)
from .transversal import (
    DEFAULT_NODE_BUDGET,
    TransversalCert,
    greedy_transversal,
    min_transversal,
    transversal_violation,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BUDGET = 2
EXIT_INVALID = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract reserves 2 for budget
    exhaustion, so usage errors exit 3 instead."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        _diag(f"error: {message}")
        raise SystemExit(EXIT_INVALID)


def _diag(message: str) -> None:
    if sys.stderr.isatty() and not os.environ.get("NO_COLOR"):
        message = f"\x1b[31m{message}\x1b[0m"
    print(message, file=sys.stderr)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise serialize.DocumentError(str(exc))


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_family(path: str) -> Family:
    return serialize.parse_family(_read(path))


def _load_sequence(path: str) -> FamilySequence:
    return serialize.parse_sequence(_read(path))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boxstab", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, k: bool = True):
        if k:
            p.add_argument("--k", type=int, required=True,
                           help="flat level: 0 for points, d-1 for hyperplanes")
        p.add_argument("--output", "-o", help="output path (default stdout)")
        p.add_argument("--approx-decimals", type=int, default=None,
                       help="add display-only decimal companions to rational fields")

    p = sub.add_parser("solve", help="minimum or greedy flat transversal")
    p.add_argument("family", help="family document path, or - for stdin")
    p.add_argument("--method", choices=("min", "greedy"), default="min")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--cap", type=int, default=None, help="exact-solver instance cap override")
    add_common(p)

    p = sub.add_parser("scatter", help="maximum, greedy or slicing scattered set")
    p.add_argument("family", help="family document path, or - for stdin")
    p.add_argument("--method", choices=("max", "greedy", "slicing"), default="max")
    p.add_argument("--t", type=int, default=None,
                   help="heaviness threshold (required for --method slicing)")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--limit", type=int, default=None, help="greedy: stop after this many picks")
    add_common(p)

    p = sub.add_parser("rainbow", help="one scattered pick per family, increasing indices")
    p.add_argument("sequence", help="family-sequence document path, or - for stdin")
    p.add_argument("--limit", type=int, default=None)
    add_common(p)

    p = sub.add_parser("refine", help="accumulation-strip refinement by exact halving")
    p.add_argument("family", help="family document path, or - for stdin")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=20)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    add_common(p)

    p = sub.add_parser("gen-cex", help="emit a generated no-small-transversal family")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m-max", type=int, required=True, help="members per family")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="single family index")
    group.add_argument("--union-to", type=int, help="union of families 1..N")
    add_common(p, k=False)

    p = sub.add_parser("witness", help="nesting witness for a box")
    p.add_argument("family", help="family document path, or - for stdin")
    p.add_argument("--index", type=int, default=1, help="1-based box index in the family")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    add_common(p, k=False)

    p = sub.add_parser("dichotomy", help="growth-curve report over a generated stream")
    p.add_argument("--kind", choices=experiments.GENERATOR_KINDS, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau-star", type=int, default=None)
    p.add_argument("--accum-point", default="1", help="rational, e.g. 1 or 3/2")
    p.add_argument("--accum-axes", default="1", help="comma-separated axis list")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--input", default=None, help="family document for --kind custom")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", default=None,
                   help="figure path (default: alongside --output; pass 'none' to disable)")
    add_common(p)

    p = sub.add_parser("verify", help="verify a certificate against its source document")
    p.add_argument("certificate", help="certificate path, or - for stdin")
    p.add_argument("--family", default=None)
    p.add_argument("--sequence", default=None)
    p.add_argument("--k", type=int, default=None, help="expected flat level (default: the certificate's)")

    return parser


def _emit(cert, args) -> None:
    _write(serialize.emit_certificate(cert, args.approx_decimals), args.output)


def _cmd_solve(args) -> int:
    family = _load_family(args.family)
    if args.method == "greedy":
        cert = greedy_transversal(family, args.k)
    else:
        cert = min_transversal(family, args.k, budget=args.budget, cap=args.cap)
    _emit(cert, args)
    return EXIT_BUDGET if cert.budget_exhausted else EXIT_OK


def _cmd_scatter(args) -> int:
    family = _load_family(args.family)
    if args.method == "greedy":
        cert = greedy_scattered(family.boxes, args.k, limit=args.limit)
    elif args.method == "slicing":
        if args.t is None:
            raise serialize.DocumentError("--method slicing requires --t")
        cert = scattered_by_slicing(family, args.k, args.t, budget=args.budget)
    else:
        cert = max_scattered(family, args.k, budget=args.budget)
    _emit(cert, args)
    return EXIT_BUDGET if cert.budget_exhausted else EXIT_OK


def _cmd_rainbow(args) -> int:
    seq = _load_sequence(args.sequence)
    cert = rainbow_scattered(seq, args.k, limit=args.limit)
    _emit(cert, args)
    return EXIT_OK


def _cmd_refine(args) -> int:
    family = _load_family(args.family)
    ref = strip_refine(family, args.k, args.t, max_depth=args.max_depth, budget=args.budget)
    _emit(ref, args)
    return EXIT_BUDGET if ref.budget_exhausted else EXIT_OK


def _cmd_gen_cex(args) -> int:
    if args.union_to is not None:
        family = union_prefix_family(args.d, args.union_to, args.m_max)
    else:
        family = counterexample_family(args.n, args.d, args.m_max)
    _write(serialize.emit_family(family, args.approx_decimals), args.output)
    return EXIT_OK


def _cmd_witness(args) -> int:
    family = _load_family(args.family)
    box = family.box_at(args.index)
    witness = nesting_witness(box, budget=args.budget)
    if witness is None:
        _diag(f"no witness within the enumeration budget {args.budget}")
        return EXIT_BUDGET
    _emit(witness, args)
    return EXIT_OK


def _cmd_dichotomy(args) -> int:
    boxes = None
    if args.kind == "custom":
        if args.input is None:
            raise serialize.DocumentError("--kind custom requires --input")
        fam = _load_family(args.input)
        if fam.dim != args.d and args.d != 1:
            raise serialize.DocumentError(
                f"--d {args.d} disagrees with input family dimension {fam.dim}")
        args.d = fam.dim
        boxes = fam.boxes
    spec = experiments.GeneratorSpec(
        kind=args.kind,
        d=args.d,
        k=args.k,
        seed=args.seed,
        tau_star=args.tau_star,
        accum_point=Fraction(args.accum_point),
        accum_axes=tuple(int(a) for a in args.accum_axes.split(",")),
        n_max=args.n_max,
        m_max=args.m_max,
        boxes=boxes,
    )
    report = experiments.dichotomy_run(spec, args.k, args.steps, args.t,
                                       cap=args.cap, budget=args.budget)
    if args.format == "json":
        _write(experiments.report_to_json(report), args.output)
    else:
        _write(experiments.report_to_csv(report), args.output)

    plot_path = args.plot
    if plot_path != "none":
        if plot_path is None and args.output not in (None, "-"):
            plot_path = str(Path(args.output).with_suffix(".png"))
        if plot_path is not None:
            plots.render_dichotomy(report, plot_path)
    return EXIT_OK


def _cmd_verify(args) -> int:
    cert = serialize.parse_certificate(_read(args.certificate))
    if isinstance(cert, TransversalCert):
        if args.family is None:
            raise serialize.DocumentError("transversal certificates need --family")
        if args.k is not None and args.k != cert.k:
            _diag(f"certificate is for k={cert.k}, expected k={args.k}")
            return EXIT_VERIFY_FAILED
        violation = transversal_violation(_load_family(args.family), cert)
    elif isinstance(cert, ScatteredCert):
        if args.family is None:
            raise serialize.DocumentError("scattered certificates need --family")
        violation = scattered_violation(_load_family(args.family), cert, args.k)
    elif isinstance(cert, RainbowCert):
        if args.sequence is None:
            raise serialize.DocumentError("rainbow certificates need --sequence")
        violation = scattered_violation(_load_sequence(args.sequence), cert, args.k)
    elif isinstance(cert, NestingWitness):
        violation = nesting_violation(cert)
    elif isinstance(cert, StripRefinement):
        if args.family is None:
            raise serialize.DocumentError("refinement traces need --family")
        violation = refinement_violation(_load_family(args.family), cert)
    else:
        raise serialize.DocumentError(f"cannot verify {type(cert).__name__}")
    if violation is None:
        print("verified")
        return EXIT_OK
    _diag(f"verification failed: {violation}")
    return EXIT_VERIFY_FAILED


_COMMANDS = {
    "solve": _cmd_solve,
    "scatter": _cmd_scatter,
    "rainbow": _cmd_rainbow,
    "refine": _cmd_refine,
    "gen-cex": _cmd_gen_cex,
    "witness": _cmd_witness,
    "dichotomy": _cmd_dichotomy,
    "verify": _cmd_verify,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except serialize.DocumentError as exc:
        _diag(f"invalid input: {exc}")
        return EXIT_INVALID
    except ValueError as exc:
        _diag(f"invalid input: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
