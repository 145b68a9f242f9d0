"""
Defining graphs of Artin groups.

A defining graph is a finite simple graph whose edges carry integer labels
m >= 2.  Each edge {s, t} labelled m contributes the relation
sts... = tst... (both sides of length m) to the Artin group; non-adjacent
generators are free of each other.

This module holds the immutable graph type, the line-based text format, and
the graph-level predicates used elsewhere: dimension and hyperbolicity
conditions, separating vertices and edges, girth, label-preserving
automorphisms, vertex rigidity and transvection freeness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

Edge = tuple[str, str]


class GraphError(ValueError):
    """Raised for invalid graph data or a predicate called outside its domain."""


class ParseError(GraphError):
    def __init__(self, line: int, kind: str, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.kind = kind


def edge_key(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """A finite simple graph with integer edge labels >= 2.

    ``vertices`` keeps insertion order, which fixes the order of every
    enumeration done on the graph.  Equality ignores that order.
    """

    vertices: tuple[str, ...]
    labels: Mapping[Edge, int]
    _adj: dict[str, tuple[str, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex name")
        if any(not v for v in verts):
            raise GraphError("empty vertex name")
        seen = set(verts)
        labels: dict[Edge, int] = {}
        for (u, v), m in self.labels.items():
            if u == v:
                raise GraphError(f"loop at {u}")
            if u not in seen or v not in seen:
                raise GraphError(f"edge {u} {v} uses an unknown vertex")
            if int(m) != m or m < 2:
                raise GraphError(f"edge {u} {v} has label {m} < 2")
            key = edge_key(u, v)
            if key in labels:
                raise GraphError(f"duplicate edge {u} {v}")
            labels[key] = int(m)
        adj: dict[str, list[str]] = {v: [] for v in verts}
        for u, v in labels:
            adj[u].append(v)
            adj[v].append(u)
        order = {v: i for i, v in enumerate(verts)}
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(
            self, "_adj", {v: tuple(sorted(ns, key=order.__getitem__)) for v, ns in adj.items()}
        )

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, int]], vertices: Iterable[str] = ()) -> LabeledGraph:
        verts = list(dict.fromkeys(vertices))
        labels = {}
        for u, v, m in edges:
            for x in (u, v):
                if x not in verts:
                    verts.append(x)
            if edge_key(u, v) in labels:
                raise GraphError(f"duplicate edge {u} {v}")
            labels[edge_key(u, v)] = m
        return cls(tuple(verts), labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices), frozenset(self.labels.items())))

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.labels)

    def label(self, u: str, v: str) -> int | None:
        """The label of the edge uv, or None when u and v are not adjacent."""
        return self.labels.get(edge_key(u, v))

    def adjacent(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self.labels

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self._adj[v]

    def induced(self, subset: Iterable[str]) -> LabeledGraph:
        keep = set(subset)
        verts = tuple(v for v in self.vertices if v in keep)
        return LabeledGraph(verts, {e: m for e, m in self.labels.items() if e[0] in keep and e[1] in keep})

    def relabel(self, mapping: Mapping[str, str]) -> LabeledGraph:
        return LabeledGraph(
            tuple(mapping[v] for v in self.vertices),
            {edge_key(mapping[u], mapping[v]): m for (u, v), m in self.labels.items()},
        )

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for (u, v), m in self.labels.items():
            g.add_edge(u, v, label=m)
        return g

    def __repr__(self) -> str:
        es = ", ".join(f"{u}{v}:{m}" for (u, v), m in sorted(self.labels.items()))
        return f"LabeledGraph([{', '.join(self.vertices)}]; {es})"


@dataclass(frozen=True)
class PredicateReport:
    connected: bool
    triangle_free: bool
    large_type: bool
    all_labels_two: bool
    bipartite: bool
    girth: float
    has_edge: bool

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["girth"] = None if math.isinf(self.girth) else int(self.girth)
        return d


# -- text format ------------------------------------------------------------

def parse_graph(text: str, strict: bool = False) -> LabeledGraph:
    """Parse the line format ``vertex NAME`` / ``edge NAME NAME LABEL``.

    Edges declare their endpoints implicitly.  With ``strict=True`` every
    edge endpoint must already have been declared by a ``vertex`` line.
    """
    verts: list[str] = []
    declared: set[str] = set()
    labels: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "vertex":
            if len(parts) != 2:
                raise ParseError(lineno, "syntax", "expected 'vertex NAME'")
            name = parts[1]
            if name in declared:
                raise ParseError(lineno, "duplicate_vertex", f"vertex {name} declared twice")
            declared.add(name)
            if name not in verts:
                verts.append(name)
        elif head == "edge":
            if len(parts) != 4:
                raise ParseError(lineno, "syntax", "expected 'edge NAME NAME LABEL'")
            _, u, v, lab = parts
            try:
                m = int(lab)
            except ValueError:
                raise ParseError(lineno, "syntax", f"label {lab!r} is not an integer") from None
            if u == v:
                raise ParseError(lineno, "loop", f"loop edge at {u}")
            if m < 2:
                raise ParseError(lineno, "label", f"label {m} < 2 on edge {u} {v}")
            for x in (u, v):
                if x not in declared:
                    if strict:
                        raise ParseError(lineno, "unknown_vertex", f"unknown vertex {x}")
                    if x not in verts:
                        verts.append(x)
            key = edge_key(u, v)
            if key in labels:
                raise ParseError(lineno, "duplicate_edge", f"duplicate edge {u} {v}")
            labels[key] = m
        else:
            raise ParseError(lineno, "syntax", f"unknown directive {head!r}")
    return LabeledGraph(tuple(verts), labels)


def serialize_graph(g: LabeledGraph) -> str:
    lines = [f"vertex {v}" for v in sorted(g.vertices)]
    lines += [f"edge {u} {v} {m}" for (u, v), m in sorted(g.labels.items())]
    return "\n".join(lines) + "\n"


def load_graph(path: str, strict: bool = False) -> LabeledGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), strict=strict)


# -- predicates ---------------------------------------------------------------

def triangles(g: LabeledGraph) -> Iterator[tuple[str, str, str]]:
    order = {v: i for i, v in enumerate(g.vertices)}
    for u in g.vertices:
        for v in g.neighbors(u):
            if order[v] <= order[u]:
                continue
            for w in g.neighbors(v):
                if order[w] > order[v] and g.adjacent(u, w):
                    yield (u, v, w)


def _triangle_sum(g: LabeledGraph, tri: tuple[str, str, str]) -> Fraction:
    a, b, c = tri
    return sum(Fraction(1, g.label(x, y)) for x, y in ((a, b), (b, c), (a, c)))


def is_two_dimensional(g: LabeledGraph) -> bool:
    """At least one edge, and 1/m + 1/n + 1/r <= 1 on every triangle."""
    if not g.labels:
        return False
    return all(_triangle_sum(g, t) <= 1 for t in triangles(g))


def induced_four_cycles(g: LabeledGraph) -> list[tuple[str, str, str, str]]:
    """All 4-cycles without diagonals, each listed once as (a, b, c, d).

    The tuple starts at the cycle's first vertex in graph order and runs
    towards the smaller of its two neighbours on the cycle.
    """
    order = {v: i for i, v in enumerate(g.vertices)}
    out = []
    for quad in itertools.combinations(g.vertices, 4):
        a = quad[0]
        for b, c, d in itertools.permutations(quad[1:]):
            if order[b] > order[d]:
                continue
            if (g.adjacent(a, b) and g.adjacent(b, c) and g.adjacent(c, d) and g.adjacent(d, a)
                    and not g.adjacent(a, c) and not g.adjacent(b, d)):
                out.append((a, b, c, d))
    return out


def is_hyperbolic_type(g: LabeledGraph) -> bool:
    """Strict triangle inequality, and a label >= 3 on every induced 4-cycle."""
    if any(_triangle_sum(g, t) >= 1 for t in triangles(g)):
        return False
    for a, b, c, d in induced_four_cycles(g):
        if max(g.label(a, b), g.label(b, c), g.label(c, d), g.label(d, a)) < 3:
            return False
    return True


def girth(g: LabeledGraph) -> float:
    if not g.labels:
        return math.inf
    return float(nx.girth(g.to_networkx()))


def is_connected(g: LabeledGraph) -> bool:
    return len(g.vertices) > 0 and nx.is_connected(g.to_networkx())


def basic_predicates(g: LabeledGraph) -> PredicateReport:
    ms = list(g.labels.values())
    gi = girth(g)
    return PredicateReport(
        connected=is_connected(g),
        triangle_free=next(triangles(g), None) is None,
        large_type=all(m >= 3 for m in ms),
        all_labels_two=all(m == 2 for m in ms),
        bipartite=nx.is_bipartite(g.to_networkx()),
        girth=gi,
        has_edge=bool(ms),
    )


def _require_connected(g: LabeledGraph) -> None:
    if not is_connected(g):
        raise GraphError("graph is not connected")


def separating_vertices(g: LabeledGraph) -> list[str]:
    """Vertices whose deletion disconnects the graph (cut vertices)."""
    _require_connected(g)
    cut = set(nx.articulation_points(g.to_networkx()))
    return [v for v in g.vertices if v in cut]


def separating_edges(g: LabeledGraph) -> list[Edge]:
    """Edges whose closed removal (the edge with both endpoints) disconnects the rest."""
    _require_connected(g)
    out = []
    for u, v in g.edges:
        rest = g.induced(x for x in g.vertices if x not in (u, v))
        if rest.vertices and not is_connected(rest):
            out.append((u, v))
    return out


def bridges(g: LabeledGraph) -> list[Edge]:
    """Edges whose open removal (endpoints kept) disconnects the graph."""
    _require_connected(g)
    return sorted(edge_key(u, v) for u, v in nx.bridges(g.to_networkx()))


# -- automorphisms and isomorphisms -------------------------------------------

def _label_match(a: dict, b: dict) -> bool:
    return a["label"] == b["label"]


def automorphisms(g: LabeledGraph) -> list[dict[str, str]]:
    """Every label-preserving automorphism, identity first."""
    nxg = g.to_networkx()
    found = [dict(m) for m in GraphMatcher(nxg, nxg, edge_match=_label_match).isomorphisms_iter()]
    ident = {v: v for v in g.vertices}
    found.sort(key=lambda m: (m != ident, [m[v] for v in g.vertices]))
    return found


def are_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> dict[str, str] | None:
    """A label-preserving isomorphism g1 -> g2, or None."""
    if len(g1.vertices) != len(g2.vertices) or sorted(g1.labels.values()) != sorted(g2.labels.values()):
        return None
    gm = GraphMatcher(g1.to_networkx(), g2.to_networkx(), edge_match=_label_match)
    for m in gm.isomorphisms_iter():
        phi = dict(m)
        if all(g2.label(phi[u], phi[v]) == lab for (u, v), lab in g1.labels.items()):
            return phi
    return None


def is_vertex_rigid(g: LabeledGraph) -> bool:
    """No nontrivial automorphism fixes a closed neighbourhood pointwise."""
    auts = automorphisms(g)
    for v in g.vertices:
        star = (v,) + g.neighbors(v)
        for phi in auts:
            if all(phi[x] == x for x in star) and any(phi[x] != x for x in g.vertices):
                return False
    return True


def is_transvection_free(g: LabeledGraph) -> bool:
    """RAAG case only: no distinct v, w with link(v) contained in star(w)."""
    if any(m != 2 for m in g.labels.values()):
        raise GraphError("transvection freeness is defined here for right-angled graphs only")
    for v, w in itertools.permutations(g.vertices, 2):
        if set(g.neighbors(v)) <= set(g.neighbors(w)) | {w}:
            return False
    return True
