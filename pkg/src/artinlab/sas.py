"""
Standard abelian subgroups of a two-dimensional Artin group.

Up to conjugation by some g there are four kinds:

    type 1   G_st with m_st = 2                         (rank 2)
    type 2   <u, Z_st> with m_st >= 3, u = h x h^-1,    (rank 2)
             x in {s, t} and h in G_st
    type 3   Z_st, the centre of G_st, m_st >= 3        (rank 1)
    type 4   <x> for a standard generator x             (rank 1)

plus the trivial subgroup.  Comparisons reduce to three questions that the
word oracle answers exactly in most cases: equality of two conjugates of
generators, membership of a conjugator quotient in a parabolic G_st, and
equality inside a single dihedral group.  A ``None`` result means the oracle
ran out of budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import dihedral
from .graph_core import LabeledGraph, edge_key
from .words import DEFAULT_BUDGET, IDENTITY, GroupWord, equality, parabolic_membership, total_exponent

TRIVIAL, TYPE1, TYPE2, TYPE3, TYPE4 = "trivial", "type1", "type2", "type3", "type4"
_RANK = {TRIVIAL: 0, TYPE1: 2, TYPE2: 2, TYPE3: 1, TYPE4: 1}


class SASError(ValueError):
    pass


def _strip_right(g: GroupWord, letters: set[str]) -> tuple[GroupWord, GroupWord]:
    """Split g = head * tail with tail the longest suffix over ``letters``."""
    ls = g.letters
    i = len(ls)
    while i > 0 and ls[i - 1][0] in letters:
        i -= 1
    return GroupWord(ls[:i]), GroupWord(ls[i:])


@dataclass(frozen=True)
class StandardAbelianSubgroup:
    kind: str
    conjugator: GroupWord = IDENTITY
    edge: tuple[str, str] | None = None
    generator: str | None = None
    inner: GroupWord = IDENTITY

    @property
    def rank(self) -> int:
        return _RANK[self.kind]

    def describe(self) -> str:
        g = "" if self.conjugator.is_identity() else f"({self.conjugator}) "
        if self.kind == TRIVIAL:
            return "1"
        s, t = self.edge or ("", "")
        if self.kind == TYPE1:
            return f"{g}G_{{{s},{t}}}"
        if self.kind == TYPE3:
            return f"{g}Z_{{{s},{t}}}"
        if self.kind == TYPE4:
            return f"{g}<{self.generator}>"
        u = GroupWord.gen(self.generator).conjugate(self.inner)
        return f"{g}<{u}, Z_{{{s},{t}}}>"

    def __str__(self) -> str:
        return self.describe()


SAS = StandardAbelianSubgroup
TRIVIAL_SAS = SAS(TRIVIAL)


def type1(g: LabeledGraph, conj: GroupWord, edge: tuple[str, str]) -> SAS:
    e = edge_key(*edge)
    if g.label(*e) != 2:
        raise SASError(f"type 1 needs an edge labelled 2, got {e}")
    head, _ = _strip_right(conj, set(e))
    return SAS(TYPE1, head, e)


def type2(g: LabeledGraph, conj: GroupWord, edge: tuple[str, str], generator: str, inner: GroupWord = IDENTITY) -> SAS:
    e = edge_key(*edge)
    m = g.label(*e)
    if m is None or m < 3:
        raise SASError(f"type 2 needs an edge labelled >= 3, got {e}")
    if generator not in e or not inner.support() <= set(e):
        raise SASError("type 2 generator data must live in the edge group")
    head, tail = _strip_right(conj, set(e))
    inner = tail * inner
    if not inner.is_identity():
        # shortest representative of inner modulo the centraliser <generator, z>
        grp = dihedral.group(m, e)
        u_nf = grp.nf(GroupWord.gen(generator).conjugate(inner))
        inner, generator = dihedral.conjugate_index(m, grp.nf(inner).canonical_length, e)[u_nf]
    return SAS(TYPE2, head, e, generator, inner)


def type3(g: LabeledGraph, conj: GroupWord, edge: tuple[str, str]) -> SAS:
    e = edge_key(*edge)
    m = g.label(*e)
    if m is None or m < 3:
        raise SASError(f"type 3 needs an edge labelled >= 3, got {e}")
    head, _ = _strip_right(conj, set(e))
    return SAS(TYPE3, head, e)


def type4(g: LabeledGraph, conj: GroupWord, generator: str) -> SAS:
    if generator not in g.vertices:
        raise SASError(f"unknown generator {generator}")
    head, _ = _strip_right(conj, {generator})
    return SAS(TYPE4, head, None, generator)


def generators(g: LabeledGraph, h: SAS) -> list[GroupWord]:
    """Words generating h (one per rank)."""
    c = h.conjugator
    if h.kind == TRIVIAL:
        return []
    if h.kind == TYPE4:
        return [GroupWord.gen(h.generator).conjugate(c)]
    s, t = h.edge
    if h.kind == TYPE1:
        return [GroupWord.gen(s).conjugate(c), GroupWord.gen(t).conjugate(c)]
    z = dihedral.center_generator(g.label(s, t), (s, t)).conjugate(c)
    if h.kind == TYPE3:
        return [z]
    return [GroupWord.gen(h.generator).conjugate(c * h.inner), z]


def rank1_subgroups(g: LabeledGraph, h: SAS) -> tuple[SAS, SAS]:
    """The two rank-one standard abelian subgroups inside a rank-two one."""
    if h.kind == TYPE1:
        s, t = h.edge
        return type4(g, h.conjugator, s), type4(g, h.conjugator, t)
    if h.kind == TYPE2:
        return type4(g, h.conjugator * h.inner, h.generator), type3(g, h.conjugator, h.edge)
    raise SASError("rank1_subgroups needs a rank 2 subgroup")


def same_rank2_vertex(g: LabeledGraph, c1: GroupWord, c2: GroupWord, edge: tuple[str, str], budget: int) -> tuple[bool | None, GroupWord | None]:
    """Is c1 G_e = c2 G_e?  On success also returns d in G_e with c2 = c1 d."""
    res = parabolic_membership(g, c1.inverse() * c2, edge, budget)
    return res.verdict.as_bool(), res.word


def sas_equal(g: LabeledGraph, h1: SAS, h2: SAS, budget: int = DEFAULT_BUDGET) -> bool | None:
    if h1 == h2:
        return True
    if h1.kind != h2.kind:
        # ranks differ, or the labels differ (types 1/2), or the total exponent
        # of the generator differs (types 3/4)
        return False
    if h1.kind == TYPE4:
        return equality(g, generators(g, h1)[0], generators(g, h2)[0], budget).as_bool()
    if h1.edge != h2.edge:
        # each of types 1-3 fixes exactly one rank 2 vertex, whose type is the edge
        return False
    same, d = same_rank2_vertex(g, h1.conjugator, h2.conjugator, h1.edge, budget)
    if same is not True or h1.kind in (TYPE1, TYPE3):
        return same
    # type 2 at a common vertex: compare u1 with d u2 d^-1 inside G_e
    m = g.label(*h1.edge)
    u1 = GroupWord.gen(h1.generator).conjugate(h1.inner)
    u2 = GroupWord.gen(h2.generator).conjugate(d * h2.inner)
    return dihedral.dihedral_equal(m, u1, u2, h1.edge)


def contains_rank1(g: LabeledGraph, big: SAS, small: SAS, budget: int = DEFAULT_BUDGET) -> bool | None:
    """Is the rank-one subgroup ``small`` one of the two rank-one subgroups of ``big``?"""
    results = [sas_equal(g, small, r, budget) for r in rank1_subgroups(g, big)]
    if True in results:
        return True
    if None in results:
        return None
    return False


def sas_intersect(g: LabeledGraph, h1: SAS, h2: SAS, budget: int = DEFAULT_BUDGET) -> SAS | None:
    """Intersection of two standard abelian subgroups, or None when undecided.

    The intersection is again a standard abelian subgroup, and a standard
    abelian subgroup of finite index in another one equals it.  So unequal
    rank-one subgroups meet trivially, a rank-one subgroup meets a rank-two
    one in itself or trivially, and two unequal rank-two subgroups meet in a
    common rank-one subgroup or trivially.
    """
    if h1.kind == TRIVIAL or h2.kind == TRIVIAL:
        return TRIVIAL_SAS
    eq = sas_equal(g, h1, h2, budget)
    if eq is True:
        return h1
    if eq is None:
        return None
    if h1.rank == 1 and h2.rank == 1:
        return TRIVIAL_SAS
    if h1.rank == 1 or h2.rank == 1:
        small, big = (h1, h2) if h1.rank == 1 else (h2, h1)
        inside = contains_rank1(g, big, small, budget)
        return None if inside is None else (small if inside else TRIVIAL_SAS)
    undecided = False
    for r in rank1_subgroups(g, h1):
        inside = contains_rank1(g, h2, r, budget)
        if inside:
            return r
        undecided |= inside is None
    return None if undecided else TRIVIAL_SAS


def sas_commute(g: LabeledGraph, h1: SAS, h2: SAS, budget: int = DEFAULT_BUDGET) -> bool | None:
    """Do two rank-one standard abelian subgroups commute?"""
    if h1.rank != 1 or h2.rank != 1:
        raise SASError("sas_commute needs rank 1 subgroups")
    a, b = generators(g, h1)[0], generators(g, h2)[0]
    if h1.kind == TYPE3 and h2.kind == TYPE3:
        # two centres commute only when they coincide
        return sas_equal(g, h1, h2, budget)
    return equality(g, a * b, b * a, budget).as_bool()


def sas_join(g: LabeledGraph, h1: SAS, h2: SAS, budget: int = DEFAULT_BUDGET) -> SAS | None:
    """The rank-two standard abelian subgroup generated by two commuting rank-one ones."""
    if sas_commute(g, h1, h2, budget) is not True or sas_equal(g, h1, h2, budget) is not False:
        return None
    kinds = {h1.kind, h2.kind}
    if kinds == {TYPE3, TYPE4}:
        centre, cyc = (h1, h2) if h1.kind == TYPE3 else (h2, h1)
        s, t = centre.edge
        m = g.label(s, t)
        gen = generators(g, cyc)[0]
        res = parabolic_membership(g, gen.conjugate(centre.conjugator.inverse()), centre.edge, budget)
        if res.word is None:
            return None
        target = dihedral.garside_nf(m, res.word, (s, t))
        # widen the conjugator search one level at a time; the word length bounds it
        for level in range(len(res.word) + 1):
            hit = dihedral.conjugate_index(m, level, (s, t)).get(target)
            if hit is not None:
                h, x = hit
                return type2(g, centre.conjugator, centre.edge, x, h)
        return None
    if kinds == {TYPE4}:
        for a, b in ((h1, h2), (h2, h1)):
            x = a.generator
            other = generators(g, b)[0].conjugate(a.conjugator.inverse())
            for y in g.neighbors(x):
                if g.label(x, y) == 2 and equality(g, other, GroupWord.gen(y), budget).is_equal:
                    return type1(g, a.conjugator, (x, y))
    return None


def sas_member(g: LabeledGraph, h: SAS, w: GroupWord, budget: int = DEFAULT_BUDGET) -> bool | None:
    """Is the element w in h?  Exact for every kind once w is moved into the edge group."""
    if h.kind == TRIVIAL:
        return equality(g, w, IDENTITY, budget).as_bool()
    if h.kind == TYPE4:
        gen = generators(g, h)[0]
        e = total_exponent(w)
        return equality(g, w, gen ** e, budget).as_bool()
    res = parabolic_membership(g, w.conjugate(h.conjugator.inverse()), h.edge, budget)
    if res.word is None:
        return res.verdict.as_bool()
    s, t = h.edge
    m = g.label(s, t)
    grp = dihedral.group(m, (s, t))
    if h.kind == TYPE1:
        return True
    if h.kind == TYPE3:
        return grp.membership(res.word, s) is not None and grp.nf(res.word).factors == ()
    return grp.membership(res.word.conjugate(h.inner.inverse()), h.generator) is not None
