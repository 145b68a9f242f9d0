"""
Truncated local pieces of the fixed set graph.

Vertices come in two kinds.  A type I vertex is a standard tree F_u, the
fixed set of u = g x g^-1 in the modified Deligne complex; it is stored as
the pair (g, x).  A type II vertex is an irreducible rank-two vertex
g G_st (label >= 3), stored as (g, {s, t}).  Type I and type II are joined
when the tree contains the rank-two vertex; two type I vertices are joined
when their trees meet in a reducible (label 2) rank-two vertex.

Both links are infinite, so every enumeration is bounded:

* around g G_st the trees are F_{g h x h^-1 g^-1}, x in {s, t}, with h
  running over G_st up to canonical length L;
* along F_x the rank-two vertices are reached by walking the tree: from a
  rank-two vertex c G_{x'y} the walk continues through the rank-one vertices
  c z^k G_{x'} (label >= 3), c D z^k G_y (odd label) or c y^k G_{x'}
  (label 2), with |k| <= K, for at most L such steps.

The walk never backtracks, so different paths give different vertices.
Across branches the patch builder merges vertices with the word oracle:
cheap matrix invariants sort candidates into buckets, and only vertices in
the same bucket are compared exactly.  Undecided pairs are kept apart and
listed in ``unresolved``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from . import dihedral, hecke
from .graph_core import LabeledGraph, edge_key
from .sas import (
    SAS,
    TRIVIAL_SAS,
    TYPE3,
    TYPE4,
    sas_intersect,
    sas_join,
    type1,
    type2,
    type3,
    type4,
)
from .words import (
    DEFAULT_BUDGET,
    IDENTITY,
    GroupWord,
    abelianization,
    equality,
    odd_components,
    parabolic_membership,
)


class ThetaError(ValueError):
    pass


def _strip(conj: GroupWord, letters: Iterable[str]) -> GroupWord:
    keep = set(letters)
    ls = conj.letters
    i = len(ls)
    while i > 0 and ls[i - 1][0] in keep:
        i -= 1
    return GroupWord(ls[:i])


@dataclass(frozen=True)
class TypeI:
    """The standard tree fixed by conjugator * generator * conjugator^-1."""

    conjugator: GroupWord
    generator: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "conjugator", _strip(self.conjugator, [self.generator]))

    @property
    def word(self) -> GroupWord:
        return GroupWord.gen(self.generator).conjugate(self.conjugator)

    def label(self) -> str:
        return str(self.word)


@dataclass(frozen=True)
class TypeII:
    """The rank-two vertex conjugator * G_edge."""

    conjugator: GroupWord
    edge: tuple[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edge", edge_key(*self.edge))
        object.__setattr__(self, "conjugator", _strip(self.conjugator, self.edge))

    def label(self) -> str:
        s, t = self.edge
        if self.conjugator.is_identity():
            return f"G_{{{s},{t}}}"
        return f"{self.conjugator}·G_{{{s},{t}}}"


ThetaVertex = Union[TypeI, TypeII]


def parse_vertex(g: LabeledGraph, text: str) -> ThetaVertex:
    """Parse ``G{s,t}``, ``w G{s,t}``, ``F{x}`` or ``F{g x g^-1}``."""
    text = text.strip()
    if text.endswith("}") and "G{" in text:
        head, _, body = text.rpartition("G{")
        s, t = (x.strip() for x in body[:-1].split(","))
        m = g.label(s, t)
        if m is None or m < 3:
            raise ThetaError(f"{s},{t} is not an edge with label >= 3")
        return TypeII(GroupWord.parse(head.replace("·", " ")), (s, t))
    if text.startswith("F{") and text.endswith("}"):
        u = GroupWord.parse(text[2:-1])
        n = len(u)
        if n % 2 == 1:
            mid = u.letters[n // 2]
            left = GroupWord(u.letters[: n // 2])
            if mid[1] == 1 and GroupWord.gen(mid[0]).conjugate(left) == u and mid[0] in g.vertices:
                return TypeI(left, mid[0])
        raise ThetaError(f"{text!r} is not written as g x g^-1 for a generator x")
    raise ThetaError(f"cannot parse vertex {text!r}")


def vertex_ref(v: ThetaVertex) -> str:
    """Text that parse_vertex reads back as v."""
    if isinstance(v, TypeI):
        return f"F{{{v.word}}}"
    s, t = v.edge
    head = "" if v.conjugator.is_identity() else f"{v.conjugator} "
    return f"{head}G{{{s},{t}}}"


def vertex_to_sas(g: LabeledGraph, v: ThetaVertex) -> SAS:
    """Type I <-> type 4 (<u>), type II <-> type 3 (the conjugated centre)."""
    if isinstance(v, TypeI):
        return type4(g, v.conjugator, v.generator)
    return type3(g, v.conjugator, v.edge)


def sas_to_vertex(h: SAS) -> ThetaVertex:
    if h.kind == TYPE4:
        return TypeI(h.conjugator, h.generator)
    if h.kind == TYPE3:
        return TypeII(h.conjugator, h.edge)
    raise ThetaError("only rank one subgroups correspond to vertices")


@dataclass(frozen=True)
class Neighbour:
    vertex: ThetaVertex
    group: SAS  # the pointwise stabiliser of the edge


def _check_context(g: LabeledGraph, v: ThetaVertex) -> None:
    bad = v.conjugator.support() - set(g.vertices)
    if bad:
        raise ThetaError(f"conjugator uses unknown generators {sorted(bad)}")
    if isinstance(v, TypeI):
        if v.generator not in g.vertices:
            raise ThetaError(f"unknown generator {v.generator}")
    else:
        m = g.label(*v.edge)
        if m is None or m < 3:
            raise ThetaError(f"{v.edge} is not an edge with label >= 3")


def typeII_neighbours(g: LabeledGraph, v: TypeII, L: int) -> list[Neighbour]:
    _check_context(g, v)
    s, t = v.edge
    m = g.label(s, t)
    out = []
    for h, x, _ in dihedral.all_generator_conjugates(m, L, (s, t)):
        out.append(Neighbour(TypeI(v.conjugator * h, x), type2(g, v.conjugator, v.edge, x, h)))
    return out


def _tree_walk(g: LabeledGraph, x: str, L: int, K: int):
    """Rank-two vertices on F_x as (c, x', edge), meaning c G_edge with c x' c^-1 = x."""
    frontier = [(IDENTITY, x, None)]
    for step in range(L + 1):
        nxt = []
        for c, xp, came in frontier:
            for y in g.neighbors(xp):
                e = edge_key(xp, y)
                if e == came:
                    continue
                yield c, xp, e
                if step == L:
                    continue
                m = g.label(xp, y)
                powers = [k for k in range(-K, K + 1) if k]
                if m == 2:
                    for k in powers:
                        nxt.append((c * GroupWord.gen(y, k), xp, e))
                    continue
                grp = dihedral.group(m, e)
                z = grp.center_generator()
                for k in powers:
                    nxt.append((c * z ** k, xp, e))
                if m % 2 == 1:
                    delta = grp.delta()
                    for k in range(-K, K + 1):
                        nxt.append((c * delta * z ** k, y, e))
        frontier = nxt


def typeI_neighbours(g: LabeledGraph, v: TypeI, L: int, K: int) -> list[Neighbour]:
    _check_context(g, v)
    out = []
    for c, xp, e in _tree_walk(g, v.generator, L, K):
        conj = v.conjugator * c
        if g.label(*e) == 2:
            y = e[0] if e[1] == xp else e[1]
            out.append(Neighbour(TypeI(conj, y), type1(g, conj, e)))
        else:
            out.append(Neighbour(TypeII(conj, e), type2(g, conj, e, xp)))
    return out


def neighbours(g: LabeledGraph, v: ThetaVertex, L: int, K: int) -> list[Neighbour]:
    if isinstance(v, TypeI):
        return typeI_neighbours(g, v, L, K)
    return typeII_neighbours(g, v, L)


def link_of_typeII(g: LabeledGraph, v: TypeII, L: int) -> list[TypeI]:
    """Type I neighbours of g G_st: the trees through it, up to canonical length L."""
    return [n.vertex for n in typeII_neighbours(g, v, L)]


def link_of_typeI(g: LabeledGraph, v: TypeI, L: int, K: int) -> list[ThetaVertex]:
    """Neighbours of F_u found within L tree steps and centre powers |k| <= K."""
    return [n.vertex for n in typeI_neighbours(g, v, L, K)]


def in_core(g: LabeledGraph, v: ThetaVertex) -> bool:
    """Type II always; type I when its generator is conjugate to one of valence >= 2.

    Generators are conjugate exactly when an odd-labelled path joins them.
    """
    if isinstance(v, TypeII):
        return True
    for comp in odd_components(g):
        if v.generator in comp:
            return any(len(g.neighbors(x)) >= 2 for x in comp)
    return False


# -- patches ------------------------------------------------------------------

@dataclass
class ThetaPatch:
    graph: LabeledGraph
    vertices: list[ThetaVertex]
    edges: list[tuple[int, int]]
    base: int
    truncation: tuple[int, int]
    radius: int
    unresolved: list[tuple[int, int]]
    edge_groups: dict[tuple[int, int], SAS] = field(default_factory=dict)
    distance: list[int] = field(default_factory=list)

    def adjacency(self) -> dict[int, list[int]]:
        adj = {i: [] for i in range(len(self.vertices))}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for v in adj.values():
            v.sort()
        return adj

    def edge_group(self, a: int, b: int) -> SAS:
        return self.edge_groups[(min(a, b), max(a, b))]

    def distances_from(self, i: int) -> dict[int, int]:
        adj = self.adjacency()
        dist = {i: 0}
        queue = deque([i])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def index(self, v: ThetaVertex) -> int:
        return self.vertices.index(v)

    def summary(self) -> dict:
        kinds = [isinstance(v, TypeI) for v in self.vertices]
        return {
            "vertices": len(self.vertices),
            "type_I": sum(kinds),
            "type_II": len(kinds) - sum(kinds),
            "edges": len(self.edges),
            "unresolved": len(self.unresolved),
        }

    def to_json(self) -> dict:
        verts = []
        for i, v in enumerate(self.vertices):
            d = {"id": i, "distance": self.distance[i], "label": v.label(), "ref": vertex_ref(v),
                 "conjugator": str(v.conjugator)}
            if isinstance(v, TypeI):
                d.update(kind="I", generator=v.generator, word=str(v.word))
            else:
                d.update(kind="II", edge=list(v.edge))
            verts.append(d)
        return {
            "base": self.base,
            "radius": self.radius,
            "truncation": {"L": self.truncation[0], "K": self.truncation[1]},
            "vertices": verts,
            "edges": [
                {"source": a, "target": b, "stabilizer": self.edge_groups[(a, b)].describe()}
                for a, b in self.edges
            ],
            "unresolved": [list(p) for p in self.unresolved],
        }

    def to_dot(self) -> str:
        L, K = self.truncation
        lines = [
            "graph theta {",
            f"  // radius={self.radius} L={L} K={K} unresolved={len(self.unresolved)}",
        ]
        for i, v in enumerate(self.vertices):
            shape = "box" if isinstance(v, TypeI) else "ellipse"
            lab = json.dumps(v.label(), ensure_ascii=False)
            lines.append(f"  v{i} [shape={shape}, label={lab}];")
        for a, b in self.edges:
            lines.append(f"  v{a} -- v{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


class _Registry:
    """Vertex lookup by matrix invariants, with exact comparison inside a bucket."""

    def __init__(self, g: LabeledGraph, budget: int):
        self.g = g
        self.budget = budget
        # one representation is enough for bucketing; equality inside a bucket is exact
        self.rep = hecke.representations(g)[0]
        self.buckets: dict[tuple, list[int]] = {}
        self.vertices: list[ThetaVertex] = []
        self._keys: dict[ThetaVertex, tuple] = {}

    def key(self, v: ThetaVertex) -> tuple:
        hit = self._keys.get(v)
        if hit is None:
            if isinstance(v, TypeI):
                hit = ("I", abelianization(self.g, v.word), self.rep.key(v.word))
            else:
                hit = ("II", v.edge, self.rep.coset_key(v.conjugator, v.edge))
            self._keys[v] = hit
        return hit

    def same(self, a: ThetaVertex, b: ThetaVertex) -> bool | None:
        if a == b:
            return True
        if isinstance(a, TypeI):
            return equality(self.g, a.word, b.word, self.budget).as_bool()
        return parabolic_membership(self.g, a.conjugator.inverse() * b.conjugator, a.edge, self.budget).verdict.as_bool()

    def find(self, v: ThetaVertex) -> tuple[int | None, list[int]]:
        undecided = []
        for i in self.buckets.get(self.key(v), ()):
            verdict = self.same(self.vertices[i], v)
            if verdict:
                return i, []
            if verdict is None:
                undecided.append(i)
        return None, undecided

    def add(self, v: ThetaVertex) -> int:
        self.vertices.append(v)
        i = len(self.vertices) - 1
        self.buckets.setdefault(self.key(v), []).append(i)
        return i


def theta_patch(g: LabeledGraph, base: ThetaVertex, radius: int, L: int, K: int,
                budget: int = DEFAULT_BUDGET, close: bool = True) -> ThetaPatch:
    """Breadth-first ball of the given radius around ``base``.

    With ``close`` the outermost layer's links are also computed, keeping
    only edges back into the patch, so the patch is the induced subgraph on
    its vertices (up to the truncation of those links).
    """
    if radius < 0:
        raise ThetaError("radius must be >= 0")
    _check_context(g, base)
    reg = _Registry(g, budget)
    reg.add(base)
    distance = [0]
    edges: dict[tuple[int, int], SAS] = {}
    unresolved: set[tuple[int, int]] = set()
    frontier = [0]
    for r in range(radius):
        nxt = []
        for i in frontier:
            for nb in neighbours(g, reg.vertices[i], L, K):
                j, undecided = reg.find(nb.vertex)
                if j is None:
                    j = reg.add(nb.vertex)
                    distance.append(r + 1)
                    nxt.append(j)
                    unresolved.update((min(j, u), max(j, u)) for u in undecided)
                if j != i:
                    edges.setdefault((min(i, j), max(i, j)), nb.group)
        frontier = nxt
    if close:
        for i in frontier:
            for nb in neighbours(g, reg.vertices[i], L, K):
                j, _ = reg.find(nb.vertex)
                if j is not None and j != i:
                    edges.setdefault((min(i, j), max(i, j)), nb.group)
    return ThetaPatch(
        graph=g,
        vertices=reg.vertices,
        edges=sorted(edges),
        base=0,
        truncation=(L, K),
        radius=radius,
        unresolved=sorted(unresolved),
        edge_groups=dict(sorted(edges.items())),
        distance=distance,
    )


def core_patch(patch: ThetaPatch, iterate: bool = False) -> ThetaPatch:
    """Drop type I vertices outside the core, then isolated vertices.

    One pass by default; ``iterate`` repeats until nothing changes.
    """
    g = patch.graph
    keep = [i for i, v in enumerate(patch.vertices) if in_core(g, v)]
    while True:
        ks = set(keep)
        es = [(a, b) for a, b in patch.edges if a in ks and b in ks]
        touched = {x for e in es for x in e}
        nk = [i for i in keep if i in touched or len(keep) == 1]
        if not iterate or nk == keep:
            keep = nk
            break
        keep = nk
    remap = {old: new for new, old in enumerate(keep)}
    es = [(remap[a], remap[b]) for a, b in patch.edges if a in remap and b in remap]
    return ThetaPatch(
        graph=g,
        vertices=[patch.vertices[i] for i in keep],
        edges=es,
        base=remap.get(patch.base, -1),
        truncation=patch.truncation,
        radius=patch.radius,
        unresolved=[(remap[a], remap[b]) for a, b in patch.unresolved if a in remap and b in remap],
        edge_groups={(remap[a], remap[b]): h for (a, b), h in patch.edge_groups.items() if a in remap and b in remap},
        distance=[patch.distance[i] for i in keep],
    )


def edge_stabilizer(g: LabeledGraph, v1: ThetaVertex, v2: ThetaVertex,
                    budget: int = DEFAULT_BUDGET) -> SAS | None:
    """The rank two subgroup fixing both vertices when they are adjacent, else None.

    Adjacent vertices correspond to commuting rank one subgroups, and the
    edge stabiliser is the rank two subgroup they generate.
    """
    if isinstance(v1, TypeII) and isinstance(v2, TypeII):
        return None
    return sas_join(g, vertex_to_sas(g, v1), vertex_to_sas(g, v2), budget)


def _vertex_from_json(d: dict) -> ThetaVertex:
    conj = GroupWord.parse(d.get("conjugator", ""))
    if d["kind"] == "I":
        return TypeI(conj, d["generator"])
    if d["kind"] == "II":
        return TypeII(conj, tuple(d["edge"]))
    raise ThetaError(f"unknown vertex kind {d['kind']!r}")


def patch_from_json(g: LabeledGraph, data: dict, budget: int = DEFAULT_BUDGET) -> ThetaPatch:
    """Rebuild a patch from its JSON form, recomputing every edge stabiliser.

    Edges whose endpoints are not adjacent get the trivial subgroup, so the
    checkers flag them instead of trusting the file.
    """
    verts = sorted(data["vertices"], key=lambda d: d["id"])
    if [d["id"] for d in verts] != list(range(len(verts))):
        raise ThetaError("vertex ids must be 0 .. n-1")
    vertices = [_vertex_from_json(d) for d in verts]
    for v in vertices:
        _check_context(g, v)
    groups: dict[tuple[int, int], SAS] = {}
    for e in data["edges"]:
        a, b = sorted((e["source"], e["target"]))
        if a == b or b >= len(vertices):
            raise ThetaError(f"bad edge {a} -- {b}")
        h = edge_stabilizer(g, vertices[a], vertices[b], budget)
        groups[(a, b)] = TRIVIAL_SAS if h is None else h
    patch = ThetaPatch(
        graph=g,
        vertices=vertices,
        edges=sorted(groups),
        base=data.get("base", 0),
        truncation=(data["truncation"]["L"], data["truncation"]["K"]),
        radius=data.get("radius", 0),
        unresolved=[tuple(p) for p in data.get("unresolved", [])],
        edge_groups=dict(sorted(groups.items())),
    )
    dist = patch.distances_from(patch.base)
    patch.distance = [dist.get(i, -1) for i in range(len(vertices))]
    return patch


# -- stabilisers ---------------------------------------------------------------

def fixes(g: LabeledGraph, w: GroupWord, v: ThetaVertex, budget: int = DEFAULT_BUDGET) -> bool | None:
    """Does the element w fix the vertex v?

    A type II vertex c G_e is fixed when c^-1 w c lies in G_e; a tree F_u is
    preserved exactly by the centraliser of u.
    """
    if isinstance(v, TypeII):
        return parabolic_membership(g, w.conjugate(v.conjugator.inverse()), v.edge, budget).verdict.as_bool()
    u = v.word
    return equality(g, u.conjugate(w), u, budget).as_bool()


def stabilizer_intersection(g: LabeledGraph, patch: ThetaPatch, i: int, j: int,
                            budget: int = DEFAULT_BUDGET) -> SAS | None:
    """Stab(v_i) ∩ Stab(v_j) for patch vertices at patch distance 1 or 2.

    Adjacent vertices meet in the edge stabiliser.  At distance two, with a
    middle vertex v, the intersection equals
    (Stab v_i ∩ Stab v) ∩ (Stab v_j ∩ Stab v), except when all three are
    type I, where the patch does not determine it and None is returned.
    Pairs further apart return the intersection along a shortest patch path.
    """
    if i == j:
        raise ThetaError("need two different vertices")
    dist = patch.distances_from(i)
    if j not in dist:
        return None
    adj = patch.adjacency()
    if dist[j] == 1:
        return patch.edge_group(i, j)
    path = [j]
    while path[-1] != i:
        x = path[-1]
        path.append(min(y for y in adj[x] if dist.get(y) == dist[x] - 1))
    path.reverse()
    vs = patch.vertices
    if len(path) == 3 and all(isinstance(vs[p], TypeI) for p in path):
        return None
    acc = patch.edge_group(path[0], path[1])
    for a, b in zip(path[1:], path[2:]):
        acc = sas_intersect(g, acc, patch.edge_group(a, b), budget)
        if acc is None:
            return None
    return acc


def stabilizer_intersection_rank(g: LabeledGraph, v1: ThetaVertex, v2: ThetaVertex, patch: ThetaPatch,
                                 budget: int = DEFAULT_BUDGET) -> int | None:
    """Rank (0, 1 or 2) of Stab(v1) ∩ Stab(v2), or None when it cannot be decided here."""
    h = stabilizer_intersection(g, patch, patch.index(v1), patch.index(v2), budget)
    return None if h is None else h.rank
