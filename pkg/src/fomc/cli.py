"""Command-line front end: evaluation, classification, reductions,
reachability, generators, and the benchmark harness.

Exit codes: 0 for a true verdict, 1 for false, 2 for any error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import generate, textio
from .core import (Assignment, Structure, Vocabulary, classify, free_vars,
                   num_variables, structure_size, subformula_count,
                   substitute_const, width)
from .engines import ENGINES, evaluate, eval_bottom_up, eval_brute
from .errors import ModelCheckError, PreconditionError
from .reach import bfs_reach, ck_reach, diag_reach, savitch_reach
from .reductions import (StconInstance, eliminate_functions, mc_to_stcon,
                         mc_to_stcon_detailed, stcon_to_mc)
from .textio import (BENCH_CSV_HEADER, parse_digraph, parse_formula,
                     parse_structure, print_digraph, print_formula,
                     print_report, print_structure)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _load_formula_arg(arg: str, vocab):
    """Treat the argument as a file when one exists, else as formula text."""
    text = _read(arg) if os.path.exists(arg) else arg
    return parse_formula(text, vocab)


def _parse_assign(spec: str) -> dict[str, int]:
    values: dict[str, int] = {}
    if not spec:
        return values
    for piece in spec.split(","):
        piece = piece.strip()
        if not piece:
            continue
        var, _, num = piece.partition("=")
        if not num:
            raise PreconditionError(f"bad assignment entry {piece!r}; expected var=elem")
        values[var.strip()] = int(num)
    return values


def _close_formula(phi, struct, values):
    """Bind free variables to fresh constants so any engine can run."""
    taken = set(struct.vocabulary.symbol_names())
    consts = {}
    closed = phi
    for i, var in enumerate(free_vars(phi), start=1):
        if var not in values:
            raise PreconditionError(f"missing assignment for free variable {var!r}")
        name = f"a{i}"
        while name in taken:
            name += "_"
        taken.add(name)
        consts[name] = values[var]
        closed = substitute_const(closed, var, name)
    return closed, struct.expanded(constants=consts)


def cmd_eval(args) -> int:
    struct = parse_structure(_read(args.structure))
    phi = _load_formula_arg(args.formula, struct.vocabulary)
    values = _parse_assign(args.assign or "")
    fv = free_vars(phi)
    if fv:
        if args.engine in ("brute",):
            report = eval_brute(phi, struct, Assignment.for_formula(phi, values))
        else:
            closed, closed_struct = _close_formula(phi, struct, values)
            report = evaluate(closed, closed_struct, args.engine, mode=args.mode)
    else:
        report = evaluate(phi, struct, args.engine, mode=args.mode)
    if args.json:
        sys.stdout.write(print_report(report))
    else:
        print("true" if report.answer else "false")
    return 0 if report.answer else 1


def cmd_classify(args) -> int:
    if args.structure:
        vocab = parse_structure(_read(args.structure)).vocabulary
        phi = _load_formula_arg(args.formula, vocab)
    else:
        text = _read(args.formula) if os.path.exists(args.formula) else args.formula
        phi, _ = textio.infer_vocabulary(text)
    cls = classify(phi)
    payload = {
        "vars": cls.num_variables,
        "width": cls.width,
        "norm": cls.subformula_count,
        "encodingLength": cls.encoding_length,
        "sigmaLevel": cls.sigma_level,
        "piLevel": cls.pi_level,
    }
    print(json.dumps(payload))
    return 0


def cmd_reduce(args) -> int:
    prefix = args.out
    if args.kind == "stcon2mc":
        graph = parse_digraph(_read(args.input))
        inst = StconInstance(graph, args.source, args.target, args.k)
        struct, phi = stcon_to_mc(inst)
        _write(prefix + ".fos", print_structure(struct))
        _write(prefix + ".fo", print_formula(phi) + "\n")
        print(f"wrote {prefix}.fos and {prefix}.fo")
        return 0
    struct = parse_structure(_read(args.input))
    phi = _load_formula_arg(args.formula, struct.vocabulary)
    if args.kind == "mc2stcon":
        inst, vertices = mc_to_stcon_detailed(struct, phi)
        _write(prefix + ".dg", print_digraph(inst.graph))
        print(f"wrote {prefix}.dg: {inst.graph.num_vertices} vertices, "
              f"source {inst.source}, target {inst.target}, bound {inst.bound}")
        return 0
    if args.kind == "elimfun":
        out_struct, trans = eliminate_functions(struct, phi)
        _write(prefix + ".fos", print_structure(out_struct))
        _write(prefix + ".fo", print_formula(trans) + "\n")
        from .core import nnf as to_nnf
        normalized = to_nnf(trans)
        cls = classify(normalized)
        print(f"wrote {prefix}.fos and {prefix}.fo; translated sentence uses "
              f"{num_variables(trans)} variables; normalized sigmaLevel "
              f"{cls.sigma_level}, piLevel {cls.pi_level}")
        return 0
    raise PreconditionError(f"unknown reduction {args.kind!r}")


def cmd_reach(args) -> int:
    graph = parse_digraph(_read(args.graph))
    s, t = args.source, args.target
    if args.algo == "bfs":
        answer = bfs_reach(graph, s, t, args.k)
        payload = {"answer": answer, "algo": "bfs"}
    elif args.algo == "savitch":
        k = args.k if args.k is not None else max(1, graph.num_vertices - 1)
        report = savitch_reach(graph, s, t, k)
        answer = report.answer
        payload = {"answer": answer, "algo": "savitch", "k": k,
                   "peakDepth": report.peak_depth,
                   "accountedUnits": report.accounted_units}
    elif args.algo == "ck":
        report = ck_reach(graph, s, t, args.kary)
        answer = report.answer
        payload = {"answer": answer, "algo": "ck", "kary": args.kary,
                   "peakDepth": report.peak_depth,
                   "accountedUnits": report.accounted_units}
    else:
        report = diag_reach(graph, s, t, args.unit_scale)
        answer = report.answer
        payload = {"answer": answer, "algo": "diag",
                   "peakDepth": report.peak_depth,
                   "accountedUnits": report.accounted_units,
                   "budgetUsed": report.budget_used}
    if args.json:
        print(json.dumps(payload))
    else:
        print("true" if answer else "false")
    return 0 if answer else 1


def _parse_decls(spec: str) -> tuple[tuple[str, int], ...]:
    out = []
    if spec:
        for piece in spec.split(","):
            piece = piece.strip()
            if not piece:
                continue
            name, sep, arity = piece.partition(":")
            if not sep:
                raise PreconditionError(f"bad symbol spec {piece!r}; expected name:arity")
            out.append((name.strip(), int(arity)))
    return tuple(out)


def _gen_vocabulary(args) -> Vocabulary:
    relations = _parse_decls(args.rels)
    functions = _parse_decls(args.funs)
    constants = tuple(c.strip() for c in args.consts.split(",") if c.strip()) if args.consts else ()
    return Vocabulary(relations, constants, functions)


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "structure":
        if args.n < 2 and not args.allow_unit:
            raise PreconditionError(
                "universes smaller than 2 need --allow-unit (they break "
                "function elimination preconditions)")
        vocab = _gen_vocabulary(args)
        struct = generate.random_structure(rng, vocab, args.n, args.density)
        text = print_structure(struct)
        if args.out:
            _write(args.out, text)
            print(f"wrote {args.out}")
        else:
            sys.stdout.write(text)
        return 0
    if args.kind == "formula":
        vocab = _gen_vocabulary(args)
        phi = generate.random_sigma_sentence(
            rng, vocab, level=args.t, max_vars=args.s, target_norm=args.norm,
            rank_budget=args.rank)
        text = print_formula(phi) + "\n"
        if args.out:
            _write(args.out, text)
            print(f"wrote {args.out}")
        else:
            sys.stdout.write(text)
        return 0
    if args.kind == "chain":
        struct, phi = generate.chain_instance(rng, args.k, args.n, args.density)
        prefix = args.out or "chain"
        _write(prefix + ".fos", print_structure(struct))
        _write(prefix + ".fo", print_formula(phi) + "\n")
        print(f"wrote {prefix}.fos and {prefix}.fo")
        return 0
    raise PreconditionError(f"unknown generator {args.kind!r}")


def cmd_bench(args) -> int:
    if args.family != "chain":
        raise PreconditionError(f"unknown bench family {args.family!r}")
    engines = [e.strip() for e in args.engines.split(",") if e.strip()]
    for engine in engines:
        if engine not in ENGINES:
            raise PreconditionError(f"unknown engine {engine!r}")
    ks = [int(k) for k in args.k_list.split(",") if k.strip()]
    rng = random.Random(args.seed)
    rows = [BENCH_CSV_HEADER]
    for k in ks:
        struct, phi = generate.chain_instance(rng, k, args.n, args.density)
        cls = classify(phi)
        for engine in engines:
            report = evaluate(phi, struct, engine)
            rows.append(textio.bench_row("chain", k, cls, struct.universe_size,
                                         engine, report))
    text = "\n".join(rows) + "\n"
    if args.csv_out:
        _write(args.csv_out, text)
        print(f"wrote {args.csv_out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fomc",
        description="Model checking of first-order sentences over finite "
                    "structures, with accounted-space telemetry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a formula over a structure")
    p.add_argument("structure", help=".fos structure file")
    p.add_argument("formula", help=".fo formula file or inline formula text")
    p.add_argument("--engine", choices=ENGINES, default="auto")
    p.add_argument("--mode", choices=("direct", "faithful"), default="direct")
    p.add_argument("--assign", help="free-variable values, e.g. x=0,y=2")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", help="print syntactic metrics as JSON")
    p.add_argument("formula")
    p.add_argument("--structure", help="resolve symbols against this .fos file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="run one of the constructive translations")
    p.add_argument("kind", choices=("stcon2mc", "mc2stcon", "elimfun"))
    p.add_argument("input", help=".dg file for stcon2mc, else .fos file")
    p.add_argument("formula", nargs="?", help="formula for mc2stcon/elimfun")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--out", required=True, help="output file prefix")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("reach", help="source-to-target reachability")
    p.add_argument("graph", help=".dg digraph file")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--algo", choices=("bfs", "savitch", "ck", "diag"), default="bfs")
    p.add_argument("--k", type=int, help="path-length bound (bfs/savitch)")
    p.add_argument("--kary", type=int, default=2, help="level arity for ck")
    p.add_argument("--unit-scale", type=int, default=16)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("gen", help="seeded random instance generators")
    p.add_argument("kind", choices=("structure", "formula", "chain"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=4, help="universe/vertex count")
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--rels", default="E:2,S:1,T:1", help="relations, name:arity list")
    p.add_argument("--consts", default="", help="constant names, comma separated")
    p.add_argument("--funs", default="", help="functions, name:arity list")
    p.add_argument("--s", type=int, default=2, help="variable budget")
    p.add_argument("--t", type=int, default=1, help="alternation level")
    p.add_argument("--norm", type=int, default=20, help="target node count")
    p.add_argument("--rank", type=int, help="quantifier nesting budget")
    p.add_argument("--k", type=int, default=2, help="chain length bound")
    p.add_argument("--allow-unit", action="store_true",
                   help="permit a one-element universe")
    p.add_argument("--out", help="output file (or prefix for chain)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run engine families and emit CSV rows")
    p.add_argument("--family", default="chain")
    p.add_argument("--k-list", default="4,8,16,32")
    p.add_argument("--engines", default="brute,dnc")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv-out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
