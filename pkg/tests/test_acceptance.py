"""
Acceptance criteria.  Each ``criterion_N`` returns (ok, detail); the tests
assert ok and record one line per criterion, printed at the end of the run
by conftest.py.  Running this file directly prints the same lines.

Oracles come from tests/oracles.py and never use the normal-form code:
relator rewriting inside a word ball, bidirectional relator search, Burau
matrices for B_3 (m=4 through s -> sigma_1^2), and brute-force graph
enumeration.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

import oracles
from artinlab import classifier, dihedral
from artinlab import graph_core as gc
from artinlab.cli import resolve_graph
from artinlab.graph_core import LabeledGraph
from artinlab.lemmas import check_crisp_commute
from artinlab.sas_theta import TypeI
from artinlab.suite import lemma_suite
from artinlab.words import GroupWord, raag_normal_form

GOLDEN = Path(__file__).parent / "golden"
RESULTS: dict[int, tuple[bool, str]] = {}


def word(w: str) -> GroupWord:
    """Oracle string (capital = inverse) to a GroupWord."""
    return GroupWord.parse(oracles.to_word_text(w))


def to_oracle(w: GroupWord) -> str:
    return "".join(x if e == 1 else x.upper() for x, e in w)


def cycle(n: int, m: int, names: str = "abcdefgh") -> LabeledGraph:
    return LabeledGraph.from_edges([(names[i], names[(i + 1) % n], m) for i in range(n)])


# -- 1: Garside normal form against relator rewriting ------------------------------

def _exhaustive_agreement(m: int, cap: int) -> int:
    grp = dihedral.group(m)
    words = oracles.reduced_ball(cap)
    classes = oracles.relator_classes(m, cap)
    by_nf: dict = {}
    for w in words:
        by_nf.setdefault(grp.nf(word(w)), []).append(w)
    disagreements = 0
    burau_of_nf = {}
    for nf, group in by_nf.items():
        keys = {oracles.burau_key(w, m) for w in group}
        if len(keys) != 1:
            # same normal form but provably different elements
            disagreements += len(keys) - 1
        burau_of_nf[nf] = next(iter(keys))
        # equal normal forms must be joined by relator moves
        roots = {}
        for w in group:
            roots.setdefault(classes[w], w)
        reps = list(roots.values())
        for r in reps[1:]:
            if not oracles.bidirectional_equal(reps[0], r, m, max_len=cap + 4):
                disagreements += 1
    # different normal forms must be different elements
    disagreements += len(burau_of_nf) - len(set(burau_of_nf.values()))
    return disagreements


def _random_agreement(m: int, pairs: int, rng: random.Random) -> tuple[int, int]:
    grp = dihedral.group(m)
    letters = oracles.LETTERS
    disagreements = unresolved = 0
    for i in range(pairs):
        n = rng.randint(6, 8)
        w1 = oracles.reduce("".join(rng.choice(letters) for _ in range(n)))
        if i % 2 == 0:
            # equal by construction: a random walk of relator moves
            w2 = oracles.random_relator_walk(w1, m, rng.randint(1, 6), rng, max_len=8)
            truth = True
        else:
            w2 = oracles.reduce("".join(rng.choice(letters) for _ in range(rng.randint(6, 8))))
            if oracles.burau_key(w1, m) != oracles.burau_key(w2, m):
                truth = False
            elif oracles.bidirectional_equal(w1, w2, m, max_len=12):
                truth = True
            else:
                unresolved += 1
                continue
        if grp.equal(word(w1), word(w2)) != truth:
            disagreements += 1
    return disagreements, unresolved


def criterion_1() -> tuple[bool, str]:
    start = time.time()
    rng = random.Random(20240601)
    bad, notes = 0, []
    for m in (3, 4):
        ex = _exhaustive_agreement(m, 5)
        rnd, unresolved = _random_agreement(m, 10_000, rng)
        bad += ex + rnd + unresolved
        notes.append(f"m={m}: exhaustive<=5 {ex}, random 6-8 {rnd} (+{unresolved} unresolved)")
    elapsed = time.time() - start
    ok = bad == 0 and elapsed <= 120
    return ok, f"{'; '.join(notes)}; {elapsed:.1f}s"


# -- 2: centre and normaliser ------------------------------------------------------

def criterion_2() -> tuple[bool, str]:
    start = time.time()
    violations = 0
    for m in range(2, 9):
        grp = dihedral.group(m)
        z = grp.center_generator()
        for x in ("s", "t"):
            g = GroupWord.gen(x)
            violations += not grp.equal(z * g, g * z)
            if m in (3, 4):
                zs = to_oracle(z)
                violations += oracles.burau_key(zs + x, m) != oracles.burau_key(x + zs, m)
    checked = 0
    for m in (3, 4, 5):
        grp = dihedral.group(m)
        z = grp.center_generator()
        for w in oracles.reduced_ball(6):
            h = word(w)
            if not grp.equal(GroupWord.gen("s").conjugate(h), GroupWord.gen("s")):
                continue
            checked += 1
            ab = grp.membership(h, "s")
            if ab is None:
                violations += 1
                continue
            a, b = ab
            # the certificate h = s^a z^b is checked again by independent means where available
            cert = GroupWord.gen("s", a) * z ** b
            violations += not grp.equal(cert, h)
            if m in (3, 4):
                violations += oracles.burau_key(to_oracle(cert), m) != oracles.burau_key(w, m)
    elapsed = time.time() - start
    return violations == 0 and elapsed <= 60, f"{violations} violations, {checked} centralising words, {elapsed:.1f}s"


# -- 3: commuting powers of generator conjugates -----------------------------------

def criterion_3() -> tuple[bool, str]:
    res = check_crisp_commute([3, 4], 3, powers=(1, -1, 2, -2))
    # the same statement with commutation and equality decided by Burau matrices
    violations = 0
    for m in (3, 4):
        conj = {}
        for w in oracles.reduced_ball(3, ("s", "t", "S", "T")):
            for x in ("s", "t"):
                u = oracles.reduce(w + x + oracles.inv(w))
                conj.setdefault(oracles.burau_key(u, m), u)
        us = list(conj.values())
        for u, v in itertools.product(us, repeat=2):
            if u == v:
                continue
            for k, l in itertools.product((1, -1, 2, -2), repeat=2):
                uk = u * k if k > 0 else oracles.inv(u) * -k
                vl = v * l if l > 0 else oracles.inv(v) * -l
                if oracles.burau_key(uk + vl, m) == oracles.burau_key(vl + uk, m):
                    violations += 1
                    break
    ok = res.failed == 0 and violations == 0
    return ok, f"normal forms: {res.passed} pairs, {res.failed} violations; Burau: {violations} violations"


# -- 4 and 5: fixed set graph patches -------------------------------------------------

PATCH_GRAPHS = ("edge3", "edge4", "path33", "square4", "pentagon", "pentagon_raag")
_SUITE: dict = {}


def _suite_reports():
    if not _SUITE:
        start = time.time()
        for name in PATCH_GRAPHS:
            _SUITE[name] = lemma_suite(resolve_graph(name), L=2, K=1, radius=2)
        _SUITE["_elapsed"] = time.time() - start
    return _SUITE


def criterion_4() -> tuple[bool, str]:
    reports = _suite_reports()
    bad, notes = 0, []
    for name in PATCH_GRAPHS:
        r = reports[name]
        counts = {c: r.check(c) for c in ("no-3-cycle", "bipartite-if-large-type", "intersection-rank")}
        bad += sum(c.failed for c in counts.values()) + r.unresolved
        large = all(m >= 3 for m in r.graph.labels.values())
        if large and counts["bipartite-if-large-type"].passed == 0:
            bad += 1
        if counts["no-3-cycle"].passed == 0 or counts["intersection-rank"].passed == 0:
            bad += 1
        notes.append(f"{name}: {sum(p['vertices'] for p in r.patches)} vertices")
    elapsed = reports["_elapsed"]
    return bad == 0 and elapsed <= 120, f"{bad} violations; {', '.join(notes)}; {elapsed:.1f}s"


def criterion_5() -> tuple[bool, str]:
    reports = _suite_reports()
    checks = [reports[n].check("rank-one-in-rank-two") for n in PATCH_GRAPHS]
    failed = sum(c.failed for c in checks)
    passed = sum(c.passed for c in checks)
    skipped = sum(c.skipped for c in checks)
    return failed == 0 and passed > 0, f"{passed} instances, {failed} violations, {skipped} undecided"


# -- 6: classifier golden verdicts -------------------------------------------------

GOLDEN_GRAPHS = ("square4", "square3", "pentagon", "star2", "triangle333")


def criterion_6() -> tuple[bool, str]:
    mismatches = []
    for name in GOLDEN_GRAPHS:
        text = classifier.classify(resolve_graph(name)).dumps()
        if text != (GOLDEN / f"verdict_{name}.json").read_text(encoding="utf-8"):
            mismatches.append(name)
    expect = {
        "square4": {"me_superrigid": "holds", "wstar_superrigid": "holds"},
        "square3": {"me_superrigid": "holds", "wstar_superrigid": "holds"},
        "pentagon": {"me_superrigid": "holds", "wstar_superrigid": "unknown"},
        "star2": {"theta_nontrivial": "fails"},
        "triangle333": {"hyperbolic_type": "fails"},
    }
    for name, props in expect.items():
        v = classifier.classify(resolve_graph(name))
        if any(v.status(p) != s for p, s in props.items()):
            mismatches.append(f"{name} statuses")
    bip = classifier.classify(resolve_graph("square3")).justifications["wstar_superrigid"]
    if "uses bipartite" not in bip:
        mismatches.append("square3 not via the bipartite branch")
    return not mismatches, "exact match" if not mismatches else f"mismatch: {mismatches}"


# -- 7: measure equivalence comparison ----------------------------------------------

def criterion_7() -> tuple[bool, str]:
    c5, c6 = cycle(5, 3), cycle(6, 3)
    relabelled = cycle(5, 3, "vwxyz")
    shuffled = LabeledGraph.from_edges([("b", "d", 3), ("d", "a", 3), ("a", "c", 3), ("c", "e", 3), ("e", "b", 3)])
    got = (classifier.me_compare(c5, c6), classifier.me_compare(c5, relabelled), classifier.me_compare(c5, shuffled))
    want = ("not_ME", "ME_equivalent_via_isomorphism", "ME_equivalent_via_isomorphism")
    return got == want, f"{got}"


# -- 8: right-angled backend ----------------------------------------------------------

def criterion_8() -> tuple[bool, str]:
    g = resolve_graph("pentagon_raag")
    commuting = {(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges}
    rng = random.Random(8)
    letters = [(x, e) for x in g.vertices for e in (1, -1)]

    def conjugators(n):
        out, layer = [()], [()]
        for _ in range(n):
            layer = [w + (c,) for w in layer for c in letters if not (w and w[-1] == (c[0], -c[1]))]
            out += layer
        return out

    def tree(conj, x):
        return TypeI(GroupWord(conj), x).word

    def agree(u1: GroupWord, u2: GroupWord) -> bool:
        fast = raag_normal_form(g, u1) == raag_normal_form(g, u2)
        slow = oracles.raag_trivial_by_closure((u1 * u2.inverse()).letters, commuting)
        return fast == slow

    disagreements = tested = 0
    short = conjugators(2)
    for x in g.vertices:
        words = [tree(c, x) for c in short]
        for u1, u2 in itertools.combinations(words, 2):
            if len(u1) + len(u2) > 8:
                continue
            tested += 1
            disagreements += not agree(u1, u2)
    long = [c for c in conjugators(3) if len(c) == 3]
    for _ in range(3000):
        x = rng.choice(g.vertices)
        c1 = rng.choice(long)
        if rng.random() < 0.5:
            # append a letter commuting with x: the same tree, written differently
            y = rng.choice(g.neighbors(x))
            c2 = GroupWord(c1) * GroupWord.gen(y, rng.choice((1, -1)))
            u1, u2 = tree(c1, x), GroupWord.gen(x).conjugate(c2)
        else:
            u1, u2 = tree(c1, x), tree(rng.choice(long), x)
        tested += 1
        disagreements += not agree(u1, u2)
    rep = gc.basic_predicates(g)
    hyp = rep.girth >= 5 and gc.is_transvection_free(g) and rep.connected
    verdict = classifier.classify(g).status("raag_girth5_class")
    square = classifier.classify(cycle(4, 2)).status("raag_girth5_class")
    ok = disagreements == 0 and hyp and verdict == "holds" and square == "unknown"
    return ok, f"{disagreements} disagreements over {tested} pairs; girth {rep.girth:g}, raag_girth5_class {verdict}"


# -- 9: graph predicates against brute force -------------------------------------------

def random_graph(rng: random.Random) -> LabeledGraph:
    n = rng.randint(1, 8)
    names = [f"v{i}" for i in range(n)]
    p = rng.choice((0.2, 0.35, 0.5, 0.7))
    edges = [(u, v, rng.choice((2, 2, 3, 4, 5))) for u, v in itertools.combinations(names, 2) if rng.random() < p]
    return LabeledGraph.from_edges(edges, vertices=names)


def _bf_bipartite(vertices, edges) -> bool:
    vs = list(vertices)
    for colours in itertools.product((0, 1), repeat=len(vs)):
        col = dict(zip(vs, colours))
        if all(col[u] != col[v] for u, v in edges):
            return True
    return False


def _bf_separating_edges(vertices, edges) -> set:
    out = set()
    for u, v in edges:
        rest = [x for x in vertices if x not in (u, v)]
        es = [e for e in edges if u not in e and v not in e]
        if rest and oracles.bf_components(rest, es) > 1:
            out.add(gc.edge_key(u, v))
    return out


def criterion_9() -> tuple[bool, str]:
    start = time.time()
    rng = random.Random(9)
    bad, connected = 0, 0
    for _ in range(200):
        g = random_graph(rng)
        vs, es = g.vertices, list(g.edges)
        rep = gc.basic_predicates(g)
        bad += rep.girth != oracles.bf_girth(vs, es)
        bad += len(gc.induced_four_cycles(g)) != oracles.bf_induced_four_cycles(vs, es)
        bad += rep.bipartite != _bf_bipartite(vs, es)
        if oracles.bf_components(vs, es) == 1:
            connected += 1
            bad += set(gc.separating_vertices(g)) != oracles.bf_cut_vertices(vs, es)
            bad += set(gc.separating_edges(g)) != _bf_separating_edges(vs, es)
        else:
            try:
                gc.separating_vertices(g)
                bad += 1
            except gc.GraphError:
                pass
    elapsed = time.time() - start
    return bad == 0 and elapsed <= 60, f"{bad} disagreements over 200 graphs ({connected} connected), {elapsed:.1f}s"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 10)}
TITLES = {
    1: "Garside normal form vs relator rewriting",
    2: "centre and normaliser",
    3: "commuting conjugate powers",
    4: "patch structure (no 3-cycle, bipartite, intersection ranks)",
    5: "two rank one subgroups in each rank two subgroup",
    6: "classifier golden verdicts",
    7: "measure equivalence comparison",
    8: "right-angled backend and hypotheses",
    9: "graph predicates vs brute force",
}


def run(i: int) -> tuple[bool, str]:
    ok, detail = CRITERIA[i]()
    RESULTS[i] = (ok, detail)
    return ok, detail


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    ok, detail = run(i)
    assert ok, f"criterion {i} ({TITLES[i]}): {detail}"


def summary_lines() -> list[str]:
    return [f"criterion {i} {'PASS' if ok else 'FAIL'}  {TITLES[i]}: {detail}"
            for i, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for i in sorted(CRITERIA):
        run(i)
        print(summary_lines()[-1], flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
