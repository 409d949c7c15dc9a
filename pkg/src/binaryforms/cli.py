"""Command-line interface: ``gordan <subcommand> ...``.

Exit status is 0 on success, 1 when a verification or reproduction check
fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from .dimension import GRADINGS, DimQuery, covariant_dimension, hilbert_series
from .diophantine import hilbert_basis, system_from_json
from .evaluation import exact_covariant
from .forms import Atom, FormSpace, Trans, generic_form
from .gordan import (S4_RELATION_ORDER, S6_RELATION_ORDER, GeneratorSet, adjoin_s2, find_relations,
                     joint_basis, named_basis, simple_basis, verify_generation)
from .kernel import UsageError
from .repro import SUITES, render_table, run_suite
from .transvectant import NORMALIZATIONS, evaluate_molecule, parse_molecule


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> List[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError(f"expected nonnegative integers, got {text!r}")
    return out


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _threads(value: Optional[int]) -> int:
    if value is None:
        env = os.environ.get("GORDAN_THREADS")
        if env is None:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"GORDAN_THREADS must be a positive integer, got {env!r}")
    if value < 1:
        raise UsageError(f"thread count must be positive, got {value}")
    return value


def serialize_generator_set(G: GeneratorSet, path) -> None:
    path = Path(path)
    try:
        path.write_text(G.to_json() + "\n")
    except OSError as e:
        raise OSError(f"cannot write generator set to {path}: {e.strerror or e}") from e


def load_generator_set(spec: str) -> GeneratorSet:
    """A GeneratorSet JSON file, or ``S<n>`` for a built-in classical basis."""
    p = Path(spec)
    if p.exists():
        try:
            return GeneratorSet.from_json(p.read_text())
        except (ValueError, KeyError) as e:
            raise UsageError(f"{p}: not a generator set ({e})")
    m = re.fullmatch(r"S(\d+)", spec)
    if m:
        return named_basis(int(m.group(1)))
    raise UsageError(f"{spec}: no such file (use a basis JSON file or S<n>)")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}")


def _emit_basis(G: GeneratorSet, args) -> None:
    if args.out:
        serialize_generator_set(G, args.out)
    if args.json:
        print(G.to_json())
    else:
        print(render_table(G), end="")
        if G.report is not None and G.report.incomplete:
            for grade, dim, rank in G.report.incomplete:
                print(f"incomplete slice {grade}: dimension {dim}, rank {rank}")


# ------------------------------------------------------------------ commands

def cmd_transvect(args) -> int:
    n, p, r = args.n, args.p, args.r
    if r > min(n, p):
        print(0)
        return 0
    space = FormSpace((n, p), ("f", "g"))
    node = Trans(Atom("f"), Atom("g"), r)
    if not args.expand:
        print(f"T(f, g, {r})  degree (1, 1), order {n + p - 2 * r}")
        return 0
    cov = exact_covariant(node, space, args.normalization)
    print(cov.value)
    return 0


def cmd_molecule(args) -> int:
    mol = parse_molecule(_read(args.file))
    colors = sorted({a.color for a in mol.atoms})
    orders = {}
    for a in mol.atoms:
        if orders.setdefault(a.color, a.valence) != a.valence:
            raise UsageError(f"atoms of color {a.color} must share one valence")
    if colors != list(range(len(colors))):
        raise UsageError("atom colors must be 0, 1, ..., s-1")
    space = FormSpace([orders[c] for c in colors])
    forms = [generic_form(space, c) for c in colors]
    cov = evaluate_molecule(mol, forms)
    print(f"# degree {tuple(cov.multidegree)}, order {cov.order}")
    print(cov.value)
    return 0


def cmd_dim(args) -> int:
    print(covariant_dimension(DimQuery(args.spaces, args.degree, args.order)))
    return 0


def cmd_series(args) -> int:
    s = hilbert_series(args.spaces, args.grading, args.bound, args.invariants)
    if args.grading == "multigraded":
        print(json.dumps({",".join(map(str, md)): {str(k): v for k, v in row.items()}
                          for md, row in s.coefficients}))
    else:
        print(json.dumps(list(s.coefficients)))
    return 0


def cmd_hilbert_basis(args) -> int:
    system = system_from_json(_read(args.file))
    hb = hilbert_basis(system)
    if args.count:
        print(len(hb))
    else:
        print(hb.to_json())
    return 0


def cmd_joint_basis(args) -> int:
    G = joint_basis(load_generator_set(args.first), load_generator_set(args.second), seed=args.seed)
    _emit_basis(G, args)
    return 0


def cmd_adjoin_s2(args) -> int:
    G = adjoin_s2(load_generator_set(args.basis), seed=args.seed)
    _emit_basis(G, args)
    return 0


def cmd_simple_basis(args) -> int:
    known = {p: load_generator_set(path) for p, path in (args.known or [])}
    G = simple_basis(args.n, known, seed=args.seed, recursive=True, degree_bound=args.degree_bound)
    _emit_basis(G, args)
    return 0 if G.report is None or not G.report.incomplete else 1


def cmd_relations(args) -> int:
    G = load_generator_set(args.basis)
    order = args.generator_order.split(",") if args.generator_order else None
    if order is None and sorted(G.names()) == sorted(S6_RELATION_ORDER):
        order = S6_RELATION_ORDER
    elif order is None and sorted(G.names()) == sorted(S4_RELATION_ORDER):
        order = S4_RELATION_ORDER
    rels = find_relations(G, args.degree, args.order, order, args.normalization)
    if args.json:
        print(json.dumps([r.to_dict() for r in rels]))
    else:
        for r in rels:
            print(r)
    return 0


def cmd_verify(args) -> int:
    G = load_generator_set(args.basis)
    rep = verify_generation(G, args.bound, seed=args.seed)
    print(json.dumps(rep.to_dict()))
    return 0 if rep.full and rep.minimal else 1


def cmd_repro(args) -> int:
    res = run_suite(args.suite)
    root = Path(args.out)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    run_dir = root / f"{args.suite}-{stamp}"
    k = 1
    while run_dir.exists():
        k += 1
        run_dir = root / f"{args.suite}-{stamp}-{k}"
    try:
        run_dir.mkdir(parents=True)
        for name, text in res.artifacts.items():
            (run_dir / name).write_text(text)
    except OSError as e:
        raise OSError(f"cannot write reproduction artifacts under {run_dir}: {e.strerror or e}") from e
    print(res.summary())
    print(f"artifacts: {run_dir}")
    return 0 if res.ok else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gordan", description="Covariant bases of binary forms by Gordan's algorithm.")
    parser.add_argument("--normalization", choices=NORMALIZATIONS, default="paper",
                        help="transvectant scaling for expanded transvectants and relation coefficients")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker cap (default: $GORDAN_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transvect", help="transvectant of generic forms of orders n and p")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--p", type=_nonneg, required=True)
    p.add_argument("--r", type=_nonneg, required=True)
    p.add_argument("--expand", action="store_true", help="print the full polynomial")
    p.set_defaults(func=cmd_transvect)

    p = sub.add_parser("molecule", help="evaluate a molecule file on generic forms (one per color, unscaled)")
    p.add_argument("file")
    p.set_defaults(func=cmd_molecule)

    p = sub.add_parser("dim", help="dimension of a covariant slice")
    p.add_argument("--spaces", type=_int_list, required=True)
    p.add_argument("--degree", type=_int_list, required=True)
    p.add_argument("--order", type=_nonneg, required=True)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("series", help="truncated Hilbert series")
    p.add_argument("--spaces", type=_int_list, required=True)
    p.add_argument("--grading", choices=GRADINGS, default="total")
    p.add_argument("--bound", type=_nonneg, default=10)
    p.add_argument("--invariants", action="store_true")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("hilbert-basis", help="irreducible solutions of a system given as JSON")
    p.add_argument("file", help='JSON {"row1": [...], "row2": [...]} or - for stdin')
    p.add_argument("--count", action="store_true", help="print only the number of solutions")
    p.set_defaults(func=cmd_hilbert_basis)

    def basis_out(q):
        q.add_argument("--out", help="write the basis JSON to this file")
        q.add_argument("--json", action="store_true", help="print JSON instead of the table")
        q.add_argument("--seed", type=_nonneg, default=0)

    p = sub.add_parser("joint-basis", help="minimal basis of Cov(V1 + V2) from two bases")
    p.add_argument("first", help="basis JSON file or S<n>")
    p.add_argument("second", help="basis JSON file or S<n>")
    basis_out(p)
    p.set_defaults(func=cmd_joint_basis)

    p = sub.add_parser("adjoin-s2", help="minimal basis of Cov(V + S2)")
    p.add_argument("basis", help="basis JSON file or S<n>")
    basis_out(p)
    p.set_defaults(func=cmd_adjoin_s2)

    p = sub.add_parser("simple-basis", help="minimal basis of Cov(S_n)")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--known", nargs=2, action="append", metavar=("P", "FILE"),
                   type=str, help="basis of Cov(S_P) to use (repeatable)")
    p.add_argument("--degree-bound", type=_nonneg, default=None,
                   help="drop candidates above this degree")
    basis_out(p)
    p.set_defaults(func=cmd_simple_basis)

    p = sub.add_parser("relations", help="relations among generators in one slice")
    p.add_argument("basis", help="basis JSON file or S<n>")
    p.add_argument("--degree", type=_int_list, required=True)
    p.add_argument("--order", type=_nonneg, required=True)
    p.add_argument("--generator-order", help="comma-separated names, greatest first")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("verify", help="check generation and minimality slice by slice")
    p.add_argument("basis", help="basis JSON file or S<n>")
    p.add_argument("--bound", type=_nonneg, default=None)
    p.add_argument("--seed", type=_nonneg, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repro", help="run a reproduction suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--out", default="repro-runs", help="parent directory of the run directory")
    p.set_defaults(func=cmd_repro)

    # the global flags are also accepted after the subcommand
    for q in sub.choices.values():
        q.add_argument("--normalization", choices=NORMALIZATIONS, default=argparse.SUPPRESS)
        q.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    return parser


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.threads = _threads(args.threads)
        if getattr(args, "known", None):
            args.known = [(_nonneg(p), f) for p, f in args.known]
        return args.func(args)
    except (UsageError, argparse.ArgumentTypeError) as e:
        print(f"gordan: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"gordan: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
