"""
Checkers for the structural facts about the fixed set graph and the
dihedral pieces it is built from.

Each checker counts how many instances it verified, how many failed and
how many it had to skip (oracle returned Unknown, or the case is outside
what a truncated patch determines).  A checker passes when nothing failed.
Failures keep a short description of the offending instance.

Patch-wide checks that look at pairs of edges through a vertex cap the
number of pairs per vertex at ``pair_cap``; the cap picks pairs at a fixed
stride so the selection is deterministic and spread over the link.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import dihedral
from .graph_core import LabeledGraph, edge_key
from .sas import (
    SAS,
    TRIVIAL,
    TYPE2,
    generators,
    rank1_subgroups,
    sas_commute,
    sas_equal,
    sas_intersect,
    sas_member,
    type3,
    type4,
)
from .sas_theta import ThetaPatch, TypeI, TypeII, fixes, stabilizer_intersection, vertex_to_sas
from .words import DEFAULT_BUDGET, GroupWord, parabolic_membership, total_exponent

MAX_FAILURES_KEPT = 20


@dataclass
class CheckResult:
    name: str
    statement: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool | None, what: str = "") -> None:
        if ok is None:
            self.skipped += 1
        elif ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(what)

    def merge(self, other: CheckResult) -> None:
        self.passed += other.passed
        self.failed += other.failed
        self.skipped += other.skipped
        room = MAX_FAILURES_KEPT - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])

    @property
    def status(self) -> str:
        if self.failed:
            return "fail"
        return "pass" if self.passed else "skipped"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "status": self.status,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "failures": list(self.failures),
        }


STATEMENTS = {
    "no-3-cycle": "the fixed set graph contains no 3-cycle",
    "bipartite-if-large-type": "with all labels >= 3 every edge joins a type I and a type II vertex",
    "intersection-rank": "adjacent vertices have stabilisers meeting in rank 2, vertices at distance 2 in rank 1",
    "adjacency": "no third vertex is fixed by the pointwise stabiliser of an edge",
    "no-flip": "an edge between a type I and a type II vertex cannot be flipped",
    "chain-length": "strictly decreasing chains of standard abelian subgroups have length at most 3",
    "rank-one-in-rank-two": "a rank 2 standard abelian subgroup contains exactly two rank 1 ones",
    "normalizer": "the normaliser of <s> in a dihedral Artin group is <s, Z>",
    "crisp-commute": "commuting powers of two generator conjugates force the conjugates to be equal",
}

CHECK_ORDER = tuple(STATEMENTS)


def _result(name: str) -> CheckResult:
    return CheckResult(name, STATEMENTS[name])


def _edge_text(patch: ThetaPatch, a: int, b: int) -> str:
    return f"{patch.vertices[a].label()} -- {patch.vertices[b].label()}"


def _spread(items: list, cap: int) -> list:
    if len(items) <= cap:
        return items
    step = len(items) / cap
    return [items[int(i * step)] for i in range(cap)]


# -- patch checks -----------------------------------------------------------------

def check_no_3_cycle(patch: ThetaPatch) -> CheckResult:
    res = _result("no-3-cycle")
    adj = {i: set(ns) for i, ns in patch.adjacency().items()}
    for a, b in patch.edges:
        common = sorted(adj[a] & adj[b])
        res.record(not common, f"triangle {_edge_text(patch, a, b)} -- {common[:1]}")
    return res


def check_bipartite(patch: ThetaPatch) -> CheckResult:
    res = _result("bipartite-if-large-type")
    g = patch.graph
    if any(m == 2 for m in g.labels.values()):
        return res
    for a, b in patch.edges:
        kinds = {type(patch.vertices[a]), type(patch.vertices[b])}
        res.record(kinds == {TypeI, TypeII}, _edge_text(patch, a, b))
    return res


def _fixes_all(g: LabeledGraph, h: SAS, v, budget: int) -> bool | None:
    verdicts = [fixes(g, w, v, budget) for w in generators(g, h)]
    if False in verdicts:
        return False
    if None in verdicts:
        return None
    return True


def check_intersection_rank(g: LabeledGraph, patch: ThetaPatch, budget: int = DEFAULT_BUDGET,
                            pair_cap: int = 64) -> CheckResult:
    """Edges: the recorded stabiliser has rank 2 and fixes both ends.
    Distance 2: the intersection has rank 1 and fixes both ends."""
    res = _result("intersection-rank")
    for a, b in patch.edges:
        h = patch.edge_group(a, b)
        ok = h.rank == 2
        if ok:
            fa, fb = _fixes_all(g, h, patch.vertices[a], budget), _fixes_all(g, h, patch.vertices[b], budget)
            ok = None if None in (fa, fb) else (fa and fb)
        res.record(ok, f"edge {_edge_text(patch, a, b)} stabiliser {h}")
    adj = patch.adjacency()
    for mid, ns in adj.items():
        pairs = [(x, y) for x, y in itertools.combinations(ns, 2) if y not in adj[x]]
        for x, y in _spread(pairs, pair_cap):
            h = stabilizer_intersection(g, patch, x, y, budget)
            if h is None:
                res.record(None)
                continue
            ok = h.rank == 1
            if ok:
                fx, fy = _fixes_all(g, h, patch.vertices[x], budget), _fixes_all(g, h, patch.vertices[y], budget)
                ok = None if None in (fx, fy) else (fx and fy)
            res.record(ok, f"pair {_edge_text(patch, x, y)} via {patch.vertices[mid].label()}: {h}")
    return res


def check_adjacency(g: LabeledGraph, patch: ThetaPatch, budget: int = DEFAULT_BUDGET, reach: int = 1) -> CheckResult:
    """For each edge, no other vertex within ``reach`` of it is fixed by the edge stabiliser."""
    res = _result("adjacency")
    adj = patch.adjacency()
    for a, b in patch.edges:
        h = patch.edge_group(a, b)
        near = {a, b}
        layer = {a, b}
        for _ in range(reach):
            layer = {y for x in layer for y in adj[x]} - near
            near |= layer
        for v in sorted(near - {a, b}):
            fixed = _fixes_all(g, h, patch.vertices[v], budget)
            res.record(None if fixed is None else not fixed,
                       f"{patch.vertices[v].label()} fixed by stabiliser of {_edge_text(patch, a, b)}")
    return res


def check_no_flip(g: LabeledGraph, patch: ThetaPatch) -> CheckResult:
    """A flip would conjugate the two rank one pieces into each other, but the
    centre has total exponent >= 2 while a generator conjugate has exponent 1."""
    res = _result("no-flip")
    for a, b in patch.edges:
        va, vb = patch.vertices[a], patch.vertices[b]
        if isinstance(va, TypeI) == isinstance(vb, TypeI):
            res.record(None)
            continue
        ea = abs(total_exponent(generators(g, vertex_to_sas(g, va))[0]))
        eb = abs(total_exponent(generators(g, vertex_to_sas(g, vb))[0]))
        res.record(ea != eb and min(ea, eb) == 1, _edge_text(patch, a, b))
    return res


def check_chain_length(g: LabeledGraph, patch: ThetaPatch, budget: int = DEFAULT_BUDGET,
                       pair_cap: int = 32) -> CheckResult:
    """Intersect edge stabilisers through a common vertex, one after another.

    Every intersection must lie in both factors, and each strict step of the
    chain must drop the rank, so no chain is longer than 3.
    """
    res = _result("chain-length")
    adj = patch.adjacency()
    for mid, ns in adj.items():
        groups = [patch.edge_group(mid, n) for n in ns]
        for i, j in _spread(list(itertools.combinations(range(len(groups)), 2)), pair_cap):
            ok, what = _chain(g, [groups[i], groups[j], groups[(j + 1) % len(groups)]], budget)
            res.record(ok, what)
    return res


def _chain(g: LabeledGraph, factors: list[SAS], budget: int) -> tuple[bool | None, str]:
    chain = [factors[0]]
    for nxt in factors[1:]:
        k = sas_intersect(g, chain[-1], nxt, budget)
        if k is None:
            return None, ""
        inside = [sas_member(g, big, w, budget) for big in (chain[-1], nxt) for w in generators(g, k)]
        if False in inside:
            return False, f"{k} not inside {chain[-1]} and {nxt}"
        if k.rank < chain[-1].rank:
            chain.append(k)
        elif sas_equal(g, k, chain[-1], budget) is False:
            return False, f"{k} has the rank of {chain[-1]} but differs"
    if chain[-1].kind != TRIVIAL:
        chain.append(SAS(TRIVIAL))
    return len(chain) <= 3, " > ".join(str(h) for h in chain)


def _local_rank1_candidates(g: LabeledGraph, h: SAS, L: int) -> list[SAS]:
    """Rank one subgroups living in the same edge group as h, up to length L."""
    s, t = h.edge
    m = g.label(s, t)
    c = h.conjugator
    out = []
    for w, x, _ in dihedral.all_generator_conjugates(m, L, (s, t)):
        out.append(type4(g, c * w, x))
    if m >= 3:
        out.append(type3(g, c, h.edge))
    for u, v in g.edges:
        e = edge_key(u, v)
        if e != h.edge and g.label(u, v) >= 3 and set(e) & set(h.edge):
            out.append(type3(g, c, e))
    return out


def check_rank_one_in_rank_two(g: LabeledGraph, patch: ThetaPatch, L: int,
                               budget: int = DEFAULT_BUDGET) -> CheckResult:
    """For each edge stabiliser H with predicted pieces A, B: A and B are
    different, lie in H, commute and meet trivially; and no other rank one
    candidate found near the edge lies in H."""
    res = _result("rank-one-in-rank-two")
    adj = patch.adjacency()
    for a, b in patch.edges:
        h = patch.edge_group(a, b)
        if h.rank != 2:
            res.record(False, f"edge {_edge_text(patch, a, b)} stabiliser {h} is not rank 2")
            continue
        pieces = rank1_subgroups(g, h)
        A, B = pieces
        facts = [
            sas_equal(g, A, B, budget) is False,
            all(sas_member(g, h, generators(g, p)[0], budget) for p in pieces),
            sas_commute(g, A, B, budget),
        ]
        meet = sas_intersect(g, A, B, budget)
        facts.append(None if meet is None else meet.kind == TRIVIAL)
        ok = None if None in facts else all(facts)
        res.record(ok, f"pieces of {h}: {A}, {B}")
        cands = _local_rank1_candidates(g, h, L)
        for x in (a, b):
            cands.append(vertex_to_sas(g, patch.vertices[x]))
            if isinstance(patch.vertices[x], TypeI):
                # around a type II endpoint the local enumeration already covers these
                for y in adj[x]:
                    if patch.edge_group(x, y).rank == 2:
                        cands.extend(rank1_subgroups(g, patch.edge_group(x, y)))
        known = [_edge_group_nf(g, h, generators(g, p)[0], budget) for p in pieces]
        third, undecided = None, False
        for c in dict.fromkeys(cands):
            if c == A or c == B:
                continue
            # both generators have positive total exponent, so equal cyclic
            # subgroups have equal generators
            nf = _edge_group_nf(g, h, generators(g, c)[0], budget)
            if nf is None:
                undecided = True
            elif nf is not False and nf not in known:
                third = c
                break
        res.record(None if undecided and third is None else third is None,
                   f"{third} lies in {h} besides {A}, {B}")
    return res


def _edge_group_nf(g: LabeledGraph, h: SAS, w: GroupWord, budget: int):
    """Normal form of c^-1 w c in G_e when w lies in the rank two subgroup
    h = c H_0 c^-1 (H_0 inside G_e); False when w is outside h, None when undecided."""
    res = parabolic_membership(g, w.conjugate(h.conjugator.inverse()), h.edge, budget)
    if res.word is None:
        return None if res.verdict.is_unknown else False
    s, t = h.edge
    grp = dihedral.group(g.label(s, t), (s, t))
    if h.kind == TYPE2 and grp.membership(res.word.conjugate(h.inner.inverse()), h.generator) is None:
        return False
    return grp.nf(res.word)


# -- dihedral checks ---------------------------------------------------------------

def _reduced_words(gens: tuple[str, str], max_len: int):
    letters = [(x, e) for x in gens for e in (1, -1)]
    layer = [()]
    yield GroupWord()
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x, e in letters:
                if w and w[-1] == (x, -e):
                    continue
                nxt.append(w + ((x, e),))
        for w in nxt:
            yield GroupWord(w)
        layer = nxt


def check_normalizer(labels, max_len: int) -> CheckResult:
    """Every h of word length <= max_len centralising s lies in <s, Z>, and conversely."""
    res = _result("normalizer")
    for m in sorted(set(labels)):
        grp = dihedral.group(m)
        for h in _reduced_words(("s", "t"), max_len):
            cent = grp.centralizes(h, "s")
            member = grp.membership(h, "s") is not None
            res.record(cent == member, f"m={m} h={h} centralises={cent} in <s,Z>={member}")
    return res


def check_crisp_commute(labels, max_len: int, powers=(1, -1, 2, -2)) -> CheckResult:
    """Conjugates u, v of generators (conjugators of length <= max_len) with
    u^k v^l = v^l u^k for some listed k, l are equal."""
    res = _result("crisp-commute")
    for m in sorted(set(labels)):
        grp = dihedral.group(m)
        conj: dict = {}
        for h in _reduced_words(("s", "t"), max_len):
            for x in ("s", "t"):
                u = GroupWord.gen(x).conjugate(h)
                conj.setdefault(grp.nf(u), u)
        items = list(conj.items())
        for (n1, u), (n2, v) in itertools.product(items, repeat=2):
            for k, l in itertools.product(powers, repeat=2):
                uk, vl = u ** k, v ** l
                if grp.equal(uk * vl, vl * uk):
                    res.record(n1 == n2, f"m={m} u={u} v={v} k={k} l={l}")
                    break
            else:
                res.record(True)
    return res


PATCH_CHECKS = ("no-3-cycle", "bipartite-if-large-type", "intersection-rank", "adjacency",
                "no-flip", "chain-length", "rank-one-in-rank-two")


def check_patch(g: LabeledGraph, patch: ThetaPatch, budget: int = DEFAULT_BUDGET) -> list[CheckResult]:
    L = patch.truncation[0]
    return [
        check_no_3_cycle(patch),
        check_bipartite(patch),
        check_intersection_rank(g, patch, budget),
        check_adjacency(g, patch, budget),
        check_no_flip(g, patch),
        check_chain_length(g, patch, budget),
        check_rank_one_in_rank_two(g, patch, L, budget),
    ]
