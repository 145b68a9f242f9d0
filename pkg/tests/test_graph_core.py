import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from artinlab import graph_core as gc
from artinlab.graph_core import GraphError, LabeledGraph, ParseError, parse_graph, serialize_graph


def cycle(n, m=3, names="abcdefgh"):
    return LabeledGraph.from_edges([(names[i], names[(i + 1) % n], m) for i in range(n)])


def triangle(m1, m2, m3):
    return LabeledGraph.from_edges([("a", "b", m1), ("b", "c", m2), ("c", "a", m3)])


PATH = LabeledGraph.from_edges([("a", "b", 2), ("b", "c", 2)])


@st.composite
def graphs(draw, max_vertices=7, labels=(2, 3, 4, 5, 6)):
    n = draw(st.integers(1, max_vertices))
    names = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(names, 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = [(u, v, draw(st.sampled_from(labels))) for u, v in chosen]
    return LabeledGraph.from_edges(edges, vertices=names)


# -- parsing -----------------------------------------------------------------

def test_parse_two_vertices_one_edge():
    g = parse_graph("vertex a\nvertex b\nedge a b 3")
    assert g.vertices == ("a", "b")
    assert g.labels == {("a", "b"): 3}


def test_parse_square():
    g = parse_graph("# square\nedge a b 4\nedge b c 4\nedge c d 4\nedge d a 4\n")
    assert len(g.vertices) == 4 and len(g.edges) == 4


@pytest.mark.parametrize("text,kind,line", [
    ("edge a b 1", "label", 1),
    ("vertex a\nedge a a 3", "loop", 2),
    ("edge a b 3\nedge b a 4", "duplicate_edge", 2),
    ("vertex a\nvertex a", "duplicate_vertex", 2),
    ("edge a b x", "syntax", 1),
    ("node a", "syntax", 1),
])
def test_parse_errors(text, kind, line):
    with pytest.raises(ParseError) as err:
        parse_graph(text)
    assert err.value.kind == kind and err.value.line == line


def test_strict_mode_requires_declared_vertices():
    with pytest.raises(ParseError) as err:
        parse_graph("vertex a\nedge a b 3", strict=True)
    assert err.value.kind == "unknown_vertex"
    assert parse_graph("vertex a\nvertex b\nedge a b 3", strict=True).vertices == ("a", "b")


def test_serializer_sorts():
    g = parse_graph("edge c b 3\nedge b a 4\nvertex z")
    assert serialize_graph(g) == "vertex a\nvertex b\nvertex c\nvertex z\nedge a b 4\nedge b c 3\n"


@given(graphs())
def test_parse_serialize_round_trip(g):
    h = parse_graph(serialize_graph(g))
    assert set(h.vertices) == set(g.vertices) and h.labels == g.labels
    assert serialize_graph(h) == serialize_graph(g)


# -- dimension and hyperbolicity ------------------------------------------------

def test_two_dimensional_examples():
    assert gc.is_two_dimensional(triangle(3, 3, 3))
    assert not gc.is_two_dimensional(triangle(2, 2, 5))
    assert not gc.is_two_dimensional(LabeledGraph.from_edges([], vertices="abc"))


def test_hyperbolic_examples():
    assert not gc.is_hyperbolic_type(triangle(3, 3, 3))
    assert gc.is_hyperbolic_type(triangle(2, 3, 7))
    assert not gc.is_hyperbolic_type(cycle(4, 2))
    assert gc.is_hyperbolic_type(cycle(4, 3))


@given(graphs())
def test_hyperbolic_implies_two_dimensional(g):
    if g.labels and gc.is_hyperbolic_type(g):
        assert gc.is_two_dimensional(g)


# -- basic predicates ------------------------------------------------------------

def test_predicates_pentagon():
    r = gc.basic_predicates(cycle(5, 3))
    assert r.connected and r.triangle_free and r.large_type
    assert r.girth == 5 and not r.bipartite


def test_predicates_square_and_path():
    r = gc.basic_predicates(cycle(4, 4))
    assert r.bipartite and r.girth == 4
    assert gc.girth(PATH) == float("inf")
    assert gc.basic_predicates(PATH).as_dict()["girth"] is None


def test_induced_four_cycles():
    assert len(gc.induced_four_cycles(cycle(4))) == 1
    chord = LabeledGraph.from_edges([(u, v, 3) for u, v in ("ab", "bc", "cd", "da", "ac")])
    assert gc.induced_four_cycles(chord) == []
    k23 = LabeledGraph.from_edges([(u, v, 3) for u in "xy" for v in "abc"])
    # frozen from exhaustive enumeration over 4-subsets
    assert len(gc.induced_four_cycles(k23)) == 3
    assert oracles.bf_induced_four_cycles(k23.vertices, k23.edges) == 3


# -- separation ----------------------------------------------------------------

def test_separating_examples():
    assert gc.separating_vertices(PATH) == ["b"]
    for n in (4, 5, 6):
        assert gc.separating_vertices(cycle(n)) == [] and gc.separating_edges(cycle(n)) == []
    bowtie = LabeledGraph.from_edges([(u, v, 3) for u, v in ("ab", "bv", "va", "vc", "cd", "dv")])
    assert gc.separating_vertices(bowtie) == ["v"]


def test_closed_and_open_edge_separation_differ():
    # removing the closed edge b-c of the path a-b-c-d leaves a and d apart,
    # while only the open edges are bridges
    p4 = LabeledGraph.from_edges([("a", "b", 3), ("b", "c", 3), ("c", "d", 3)])
    assert gc.separating_edges(p4) == [("b", "c")]
    assert gc.bridges(p4) == [("a", "b"), ("b", "c"), ("c", "d")]
    assert gc.bridges(cycle(5)) == []


def test_separation_requires_connected():
    with pytest.raises(GraphError):
        gc.separating_vertices(LabeledGraph.from_edges([("a", "b", 3)], vertices="abc"))


@settings(max_examples=60)
@given(graphs(max_vertices=7))
def test_predicates_against_brute_force(g):
    vs, es = g.vertices, g.edges
    assert gc.girth(g) == oracles.bf_girth(vs, es)
    assert len(gc.induced_four_cycles(g)) == oracles.bf_induced_four_cycles(vs, es)
    if oracles.bf_components(vs, es) == 1:
        assert set(gc.separating_vertices(g)) == oracles.bf_cut_vertices(vs, es)


# -- automorphisms and isomorphisms --------------------------------------------------

def test_automorphism_counts():
    # frozen from permutation enumeration
    assert len(gc.automorphisms(cycle(4, 4))) == 8
    mixed = LabeledGraph.from_edges([("a", "b", 3), ("b", "c", 4), ("c", "d", 3), ("d", "a", 4)])
    assert len(gc.automorphisms(mixed)) == 4
    assert len(gc.automorphisms(LabeledGraph.from_edges([("s", "t", 5)]))) == 2
    for g in (cycle(4, 4), mixed):
        assert len(oracles.bf_automorphisms(g.vertices, g.labels)) == len(gc.automorphisms(g))


@settings(max_examples=40)
@given(graphs(max_vertices=5, labels=(2, 3)))
def test_automorphisms_form_a_group(g):
    auts = gc.automorphisms(g)
    keys = {tuple(sorted(a.items())) for a in auts}
    assert auts[0] == {v: v for v in g.vertices}
    for a in auts:
        inv = {y: x for x, y in a.items()}
        assert tuple(sorted(inv.items())) in keys
        for b in auts:
            assert tuple(sorted({v: a[b[v]] for v in g.vertices}.items())) in keys


def test_vertex_rigidity():
    for n in (4, 5, 6):
        assert gc.is_vertex_rigid(cycle(n, 3))
    mixed = LabeledGraph.from_edges([("a", "b", 3), ("b", "c", 4), ("c", "d", 3), ("d", "a", 5)])
    assert gc.is_vertex_rigid(mixed)
    star = LabeledGraph.from_edges([("o", x, 3) for x in "abc"])
    assert not gc.is_vertex_rigid(star)
    assert gc.is_vertex_rigid(LabeledGraph.from_edges([("s", "t", 3)]))


def test_transvection_free():
    assert not gc.is_transvection_free(PATH)
    assert gc.is_transvection_free(cycle(5, 2))
    assert gc.is_transvection_free(LabeledGraph(("a",), {}))
    with pytest.raises(GraphError):
        gc.is_transvection_free(cycle(5, 3))


def test_isomorphism_examples():
    g = LabeledGraph.from_edges([("a", "b", 3), ("b", "c", 4), ("c", "d", 3), ("d", "a", 4)])
    h = g.relabel({"a": "w", "b": "x", "c": "y", "d": "z"})
    phi = gc.are_isomorphic(g, h)
    assert phi is not None and all(h.label(phi[u], phi[v]) == m for (u, v), m in g.labels.items())
    other = LabeledGraph.from_edges([("a", "b", 3), ("b", "c", 3), ("c", "d", 4), ("d", "a", 4)])
    assert gc.are_isomorphic(g, other) is None
    assert gc.are_isomorphic(cycle(4), cycle(5)) is None


@settings(max_examples=40)
@given(graphs(max_vertices=5, labels=(2, 3)), st.permutations(range(5)))
def test_isomorphism_reflexive_and_symmetric(g, perm):
    assert gc.are_isomorphic(g, g) is not None
    names = {v: f"w{perm[i % 5]}{i}" for i, v in enumerate(g.vertices)}
    h = g.relabel(names)
    assert (gc.are_isomorphic(g, h) is None) == (gc.are_isomorphic(h, g) is None) is False
