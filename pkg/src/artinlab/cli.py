"""
Command-line interface.

    artinlab classify GRAPH [--format text|json]
    artinlab isomorphic GRAPH GRAPH
    artinlab dihedral nf|eq|center -m M ...
    artinlab theta link|ball|check --graph GRAPH ...
    artinlab lemma-suite GRAPH [GRAPH ...]

GRAPH is a path to a graph file, or the name of a bundled graph such as
``pentagon`` or ``edge3.graph``.

Exit status: 0 success, 1 a lemma check failed, 2 bad input, 3 an exact
answer was requested but the oracle ran out of budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from typing import Sequence

from . import classifier, dihedral
from .graph_core import GraphError, LabeledGraph, are_isomorphic, load_graph, parse_graph
from .sas_theta import (
    ThetaError,
    ThetaPatch,
    TypeI,
    neighbours,
    parse_vertex,
    patch_from_json,
    theta_patch,
    vertex_ref,
)
from .suite import (
    CONJUGATOR_LENGTH,
    DEFAULT_K,
    DEFAULT_L,
    DEFAULT_RADIUS,
    NORMALIZER_LENGTH,
    THREADS_ENV,
    check_patches,
    lemma_suite,
)
from .words import DEFAULT_BUDGET, GroupWord

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- helpers ---------------------------------------------------------------------

def bundled_graphs() -> list[str]:
    root = resources.files("artinlab") / "data" / "graphs"
    return sorted(p.name[:-len(".graph")] for p in root.iterdir() if p.name.endswith(".graph"))


def resolve_graph(ref: str) -> LabeledGraph:
    """Load a graph from a path, falling back to the bundled graph of that name."""
    if os.path.exists(ref):
        return load_graph(ref)
    name = os.path.basename(ref)
    name = name[:-len(".graph")] if name.endswith(".graph") else name
    if name in bundled_graphs():
        text = (resources.files("artinlab") / "data" / "graphs" / f"{name}.graph").read_text(encoding="utf-8")
        return parse_graph(text)
    raise InputError(f"no such graph file or bundled graph: {ref}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive(text: str) -> int:
    v = int(float(text))
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def _gens(text: str) -> tuple[str, str]:
    parts = [x.strip() for x in text.split(",")]
    if len(parts) != 2 or not all(parts) or parts[0] == parts[1]:
        raise argparse.ArgumentTypeError("expected two distinct names, e.g. s,t")
    return parts[0], parts[1]


def _unresolved_message(count: int, budget: int) -> str:
    return (f"{count} vertex pair(s) left unresolved by the equality oracle at budget {budget}; "
            f"raise --budget to decide them")


# -- classify / isomorphic -------------------------------------------------------------

def cmd_classify(args, out) -> int:
    g = resolve_graph(args.graph)
    overrides = {}
    for item in args.override:
        name, _, status = item.partition("=")
        if status not in (classifier.HOLDS, classifier.FAILS, classifier.UNKNOWN, classifier.NOT_APPLICABLE):
            raise InputError(f"bad override {item!r}; expected NAME=holds|fails|unknown|not_applicable")
        overrides[name] = status
    verdict = classifier.classify(g, overrides)
    out.write(verdict.dumps() if args.format == "json" else verdict.format_text())
    return EXIT_OK


def cmd_isomorphic(args, out) -> int:
    g1, g2 = resolve_graph(args.graph1), resolve_graph(args.graph2)
    mapping = are_isomorphic(g1, g2)
    me = classifier.me_compare(g1, g2)
    if args.format == "json":
        out.write(_dump({"isomorphic": mapping is not None, "mapping": mapping, "me_compare": me}))
    else:
        if mapping is None:
            out.write("not isomorphic\n")
        else:
            out.write("isomorphic: " + ", ".join(f"{a}->{b}" for a, b in sorted(mapping.items())) + "\n")
        out.write(f"me_compare: {me}\n")
    return EXIT_OK


# -- dihedral ---------------------------------------------------------------------------

def _nf_json(nf: dihedral.GarsideNF) -> dict:
    return {
        "delta_power": nf.delta_power,
        "factors": [str(nf.simple_word(f)) for f in nf.factors],
        "normal_form": nf.format(),
    }


def _dihedral_word(grp: dihedral.DihedralGroup, text: str) -> GroupWord:
    w = GroupWord.parse(text)
    bad = w.support() - set(grp.gens)
    if bad:
        raise InputError(f"letters {sorted(bad)} are not among the generators {list(grp.gens)}")
    return w


def cmd_dihedral(args, out) -> int:
    grp = dihedral.group(args.m, args.gens)
    if args.op == "nf":
        nf = grp.nf(_dihedral_word(grp, args.words[0]))
        out.write(_dump({"m": args.m, "word": args.words[0], **_nf_json(nf)}) if args.format == "json"
                  else nf.format() + "\n")
    elif args.op == "eq":
        w1, w2 = (_dihedral_word(grp, w) for w in args.words)
        same = grp.equal(w1, w2)
        if args.format == "json":
            out.write(_dump({"m": args.m, "equal": same, "nf": [_nf_json(grp.nf(w1)), _nf_json(grp.nf(w2))]}))
        else:
            out.write("equal\n" if same else "not equal\n")
    else:
        z = grp.center_generator()
        if args.format == "json":
            out.write(_dump({"m": args.m, "center": str(z), **_nf_json(grp.nf(z))}))
        else:
            out.write(f"{z}\n{grp.nf(z).format()}\n")
    return EXIT_OK


# -- theta ------------------------------------------------------------------------------

def _patch_json(patch: ThetaPatch, budget: int) -> dict:
    return {"graph": classifier.graph_echo(patch.graph), "budget": budget, **patch.to_json()}


def _patch_text(patch: ThetaPatch, budget: int) -> str:
    L, K = patch.truncation
    lines = [f"patch: radius={patch.radius} L={L} K={K} budget={budget} "
             f"vertices={len(patch.vertices)} edges={len(patch.edges)} unresolved={len(patch.unresolved)}"]
    for i, v in enumerate(patch.vertices):
        kind = "I " if isinstance(v, TypeI) else "II"
        lines.append(f"  {i:>4}  {kind}  d={patch.distance[i]}  {vertex_ref(v)}")
    for a, b in patch.edges:
        lines.append(f"  {a} -- {b}  {patch.edge_group(a, b)}")
    return "\n".join(lines) + "\n"


def _emit_patch(patch: ThetaPatch, fmt: str, budget: int, out) -> int:
    if fmt == "json":
        out.write(_dump(_patch_json(patch, budget)))
    elif fmt == "dot":
        out.write(patch.to_dot())
    else:
        out.write(_patch_text(patch, budget))
    if patch.unresolved:
        print(_unresolved_message(len(patch.unresolved), budget), file=sys.stderr)
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_theta(args, out) -> int:
    g = resolve_graph(args.graph)
    if args.op == "link":
        v = parse_vertex(g, args.vertex)
        nbs = neighbours(g, v, args.L, args.K)
        if args.format == "json":
            out.write(_dump({
                "vertex": vertex_ref(v), "truncation": {"L": args.L, "K": args.K},
                "neighbours": [{"ref": vertex_ref(n.vertex), "kind": "I" if isinstance(n.vertex, TypeI) else "II",
                                "stabilizer": n.group.describe()} for n in nbs],
            }))
        else:
            out.write(f"link of {vertex_ref(v)} (L={args.L} K={args.K}): {len(nbs)} neighbours\n")
            for n in nbs:
                out.write(f"  {vertex_ref(n.vertex)}  {n.group}\n")
        return EXIT_OK
    if args.op == "ball":
        patch = theta_patch(g, parse_vertex(g, args.base), args.radius, args.L, args.K, args.budget)
        return _emit_patch(patch, args.format, args.budget, out)
    # check
    if args.patch:
        try:
            with open(args.patch, encoding="utf-8") as fh:
                data = json.load(fh)
            patch = patch_from_json(g, data, args.budget)
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read patch {args.patch}: {exc}") from None
    elif args.base:
        patch = theta_patch(g, parse_vertex(g, args.base), args.radius, args.L, args.K, args.budget)
    else:
        raise InputError("theta check needs --patch FILE or --base VERTEX")
    report = check_patches(g, [patch], args.budget)
    out.write(report.dumps() if args.format == "json" else report.format_text())
    if report.failed:
        return EXIT_CHECK_FAILED
    if patch.unresolved:
        print(_unresolved_message(len(patch.unresolved), args.budget), file=sys.stderr)
        return EXIT_UNKNOWN
    return EXIT_OK


# -- lemma suite --------------------------------------------------------------------------

def cmd_lemma_suite(args, out) -> int:
    refs = bundled_graphs() if args.all_bundled else args.graphs
    if not refs:
        raise InputError("name at least one graph, or pass --all-bundled")
    reports = []
    for ref in refs:
        g = resolve_graph(ref)
        bases = [parse_vertex(g, b) for b in args.base] if args.base else None
        rep = lemma_suite(g, L=args.L, K=args.K, budget=args.budget, radius=args.radius, bases=bases,
                          normalizer_length=args.normalizer_length, conjugator_length=args.conjugator_length)
        reports.append((ref, rep))
    failed = sum(r.failed for _, r in reports)
    unresolved = sum(r.unresolved for _, r in reports)
    if args.format == "json":
        out.write(_dump({
            "reports": [{"name": ref, **r.to_json()} for ref, r in reports],
            "failed": failed,
        }))
    else:
        for ref, r in reports:
            out.write(f"== {ref}\n")
            out.write(r.format_text())
    if failed:
        return EXIT_CHECK_FAILED
    if unresolved:
        print(_unresolved_message(unresolved, args.budget), file=sys.stderr)
        return EXIT_UNKNOWN
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------

def _truncation_flags(p: argparse.ArgumentParser, budget: bool = True) -> None:
    p.add_argument("-L", type=_non_negative, default=DEFAULT_L, help="canonical length bound for conjugators")
    p.add_argument("-K", type=_non_negative, default=DEFAULT_K, help="bound on centre powers along a tree")
    if budget:
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                       help="rewriting steps the equality oracle may spend per question")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="artinlab", formatter_class=fmt,
        description="Rigidity conditions, dihedral normal forms and fixed set graph patches for Artin groups.",
        epilog=f"Exit status: 0 ok, 1 lemma check failed, 2 bad input, 3 undecided within budget. "
               f"{THREADS_ENV} sets the worker pool size of lemma-suite (default 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", formatter_class=fmt, help="evaluate graph conditions and theorem conclusions")
    p.add_argument("graph", help="graph file or bundled graph name")
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    p.add_argument("--override", action="append", default=[], metavar="NAME=STATUS",
                   help="replace a computed fact, e.g. vertex_rigid=holds")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("isomorphic", formatter_class=fmt,
                       help="label-preserving isomorphism and measure equivalence comparison")
    p.add_argument("graph1", help="first graph")
    p.add_argument("graph2", help="second graph")
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    p.set_defaults(func=cmd_isomorphic)

    p = sub.add_parser("dihedral", formatter_class=fmt, help="normal forms in a dihedral Artin group")
    dsub = p.add_subparsers(dest="op", required=True)
    for op, nargs, helptext in (("nf", 1, "Garside normal form of a word"),
                                ("eq", 2, "decide whether two words are equal"),
                                ("center", 0, "generator of the centre")):
        q = dsub.add_parser(op, formatter_class=fmt, help=helptext)
        q.add_argument("-m", type=int, required=True, help="edge label, at least 2")
        if nargs:
            q.add_argument("words", nargs=nargs, metavar="WORD", help='word such as "s t s^-1"')
        else:
            q.set_defaults(words=[])
        q.add_argument("--gens", type=_gens, default=("s", "t"), help="generator names, comma separated")
        q.add_argument("--format", choices=("text", "json"), default="text", help="output format")
        q.set_defaults(func=cmd_dihedral)

    p = sub.add_parser("theta", formatter_class=fmt, help="patches of the fixed set graph")
    tsub = p.add_subparsers(dest="op", required=True)
    q = tsub.add_parser("link", formatter_class=fmt, help="neighbours of one vertex")
    q.add_argument("--graph", required=True, help="graph file or bundled graph name")
    q.add_argument("--vertex", required=True, help='vertex such as "G{s,t}", "F{s}" or "F{t s t^-1}"')
    _truncation_flags(q, budget=False)
    q.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    q.set_defaults(func=cmd_theta)
    for op, helptext in (("ball", "breadth-first patch around a base vertex"),
                         ("check", "run the patch checkers on a built or saved patch")):
        q = tsub.add_parser(op, formatter_class=fmt, help=helptext)
        q.add_argument("--graph", required=True, help="graph file or bundled graph name")
        q.add_argument("--base", required=(op == "ball"), help="base vertex")
        q.add_argument("--radius", type=_non_negative, default=DEFAULT_RADIUS, help="patch radius")
        _truncation_flags(q)
        if op == "check":
            q.add_argument("--patch", help="patch JSON written by 'theta ball --format json'")
            q.add_argument("--format", choices=("text", "json"), default="text", help="output format")
        else:
            q.add_argument("--format", choices=("text", "json", "dot"), default="text", help="output format")
        q.set_defaults(func=cmd_theta)

    p = sub.add_parser("lemma-suite", formatter_class=fmt, help="run every structural check on graphs")
    p.add_argument("graphs", nargs="*", metavar="GRAPH", help="graph files or bundled graph names")
    p.add_argument("--all-bundled", action="store_true", help="run on every bundled graph")
    p.add_argument("--radius", type=_non_negative, default=DEFAULT_RADIUS, help="patch radius")
    _truncation_flags(p)
    p.add_argument("--base", action="append", default=[],
                   help="base vertex (repeatable); default: one type I and one type II vertex")
    p.add_argument("--normalizer-length", type=_non_negative, default=NORMALIZER_LENGTH,
                   help="word length bound of the normaliser check")
    p.add_argument("--conjugator-length", type=_non_negative, default=CONJUGATOR_LENGTH,
                   help="conjugator length bound of the commutation check")
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    p.set_defaults(func=cmd_lemma_suite)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (InputError, GraphError, ThetaError, dihedral.DihedralError, ValueError) as exc:
        print(f"artinlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
