"""
Words in the standard generators of an Artin group.

A GroupWord is an immutable, freely reduced sequence of (generator, sign)
pairs.  The constructor reduces, so every GroupWord in circulation is
reduced.  The word text syntax is whitespace separated letters, each one
``a``, ``a^-1`` or more generally ``a^n``.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .graph_core import GraphError, LabeledGraph, edge_key

Letter = tuple[str, int]

_TOKEN = re.compile(r"^([^\s^]+)(?:\^(-?\d+))?$")


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for x, e in letters:
        if e not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {e}")
        if out and out[-1][0] == x and out[-1][1] == -e:
            out.pop()
        else:
            out.append((x, e))
    return tuple(out)


class GroupWord:
    """A freely reduced word; supports ``*``, ``inverse()`` and integer powers."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _reduce(letters))
        object.__setattr__(self, "_hash", hash(self.letters))

    def __setattr__(self, name, value):
        raise AttributeError("GroupWord is immutable")

    def __reduce__(self):
        # rebuild through the constructor so the cached hash matches the receiving process
        return (GroupWord._reduced, (self.letters,))

    @classmethod
    def _reduced(cls, letters: tuple[Letter, ...]) -> GroupWord:
        """Wrap letters already known to be freely reduced."""
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "_hash", hash(letters))
        return w

    @classmethod
    def gen(cls, x: str, power: int = 1) -> GroupWord:
        e = 1 if power >= 0 else -1
        return cls([(x, e)] * abs(power))

    @classmethod
    def parse(cls, text: str) -> GroupWord:
        letters: list[Letter] = []
        for tok in text.replace("·", " ").replace(".", " ").split():
            if tok == "1":
                continue
            mt = _TOKEN.match(tok)
            if not mt:
                raise ValueError(f"bad letter {tok!r}")
            name, exp = mt.group(1), int(mt.group(2) or 1)
            letters += [(name, 1 if exp > 0 else -1)] * abs(exp)
        return cls(letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return GroupWord._reduced(self.letters[i])
        return self.letters[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __lt__(self, other: GroupWord) -> bool:
        return (len(self), self.letters) < (len(other), other.letters)

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: GroupWord) -> GroupWord:
        a, b = self.letters, other.letters
        k, n = 0, min(len(a), len(b))
        while k < n and a[-1 - k][0] == b[k][0] and a[-1 - k][1] == -b[k][1]:
            k += 1
        return GroupWord._reduced(a[:len(a) - k] + b[k:])

    def __pow__(self, n: int) -> GroupWord:
        base = self if n >= 0 else self.inverse()
        return GroupWord(base.letters * abs(n))

    def inverse(self) -> GroupWord:
        return GroupWord._reduced(tuple((x, -e) for x, e in reversed(self.letters)))

    def conjugate(self, g: GroupWord) -> GroupWord:
        """g * self * g^-1."""
        return g * self * g.inverse()

    def support(self) -> frozenset[str]:
        return frozenset(x for x, _ in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(x if e == 1 else f"{x}^-1" for x, e in self.letters)

    def __repr__(self) -> str:
        return f"GroupWord({str(self)!r})"


IDENTITY = GroupWord()


def free_reduce(w: GroupWord | Sequence[Letter]) -> GroupWord:
    """Cancel adjacent inverse pairs until none remain."""
    return GroupWord(w.letters if isinstance(w, GroupWord) else w)


def cyclic_reduce(w: GroupWord) -> tuple[GroupWord, GroupWord]:
    """Split w = c * r * c^-1 with r cyclically reduced; returns (r, c)."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return GroupWord._reduced(letters[i:j + 1]), GroupWord._reduced(letters[:i])


def total_exponent(w: GroupWord) -> int:
    return sum(e for _, e in w.letters)


def alternating(a: str, b: str, n: int) -> GroupWord:
    """The positive alternating word a b a b ... of length n."""
    return GroupWord((a if i % 2 == 0 else b, 1) for i in range(n))


# -- invariants and normal forms ----------------------------------------------

def odd_components(g: LabeledGraph) -> list[tuple[str, ...]]:
    """Components of the subgraph of odd-labelled edges, in graph order."""
    root = {v: v for v in g.vertices}

    def find(v: str) -> str:
        while root[v] != v:
            root[v] = root[root[v]]
            v = root[v]
        return v

    for (u, v), m in g.labels.items():
        if m % 2 == 1:
            root[find(u)] = find(v)
    comps: dict[str, list[str]] = {}
    for v in g.vertices:
        comps.setdefault(find(v), []).append(v)
    return [tuple(c) for c in comps.values()]


def abelianization(g: LabeledGraph, w: GroupWord) -> tuple[int, ...]:
    """Exponent sums grouped by odd-label components (the image in the abelianization)."""
    comps = odd_components(g)
    where = {v: i for i, c in enumerate(comps) for v in c}
    out = [0] * len(comps)
    for x, e in w:
        out[where[x]] += e
    return tuple(out)


def _require_raag(g: LabeledGraph) -> None:
    if any(m != 2 for m in g.labels.values()):
        raise GraphError("right-angled normal form needs all labels equal to 2")


def raag_normal_form(g: LabeledGraph, w: GroupWord) -> GroupWord:
    """Shortest form, then the lexicographically least shuffle of it.

    Cancellation removes x^e ... x^-e whenever every letter in between
    commutes with x.  The surviving word is geodesic, and all geodesics of an
    element differ by commuting swaps, so taking the least word of the
    commutation class (greedy: always pull forward the smallest letter that
    commutes past everything before it) gives a canonical form.
    """
    _require_raag(g)
    order = {v: i for i, v in enumerate(g.vertices)}
    letters = list(w.letters)
    changed = True
    while changed:
        changed = False
        for i, (x, e) in enumerate(letters):
            for j in range(i + 1, len(letters)):
                y, f = letters[j]
                if y == x:
                    if f == -e:
                        del letters[j]
                        del letters[i]
                        changed = True
                    break
                if not g.adjacent(x, y):
                    break
            if changed:
                break
    out: list[Letter] = []
    rest = letters
    while rest:
        best = None
        for j, (y, f) in enumerate(rest):
            if all(g.adjacent(y, z) for z, _ in rest[:j]):
                if best is None or (order[y], -f) < (order[rest[best][0]], -rest[best][1]):
                    best = j
        out.append(rest[best])
        rest = rest[:best] + rest[best + 1:]
    return GroupWord(out)


# -- the equality oracle ------------------------------------------------------

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True)
class EqualityVerdict:
    """Equal, Distinct (with the name of a separating invariant), or Unknown."""

    status: str
    witness: str = ""
    spent: int = 0

    @property
    def is_equal(self) -> bool:
        return self.status == "equal"

    @property
    def is_distinct(self) -> bool:
        return self.status == "distinct"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"

    def as_bool(self) -> bool | None:
        return {"equal": True, "distinct": False}.get(self.status)

    def __str__(self) -> str:
        if self.status == "distinct":
            return f"Distinct({self.witness})"
        if self.status == "unknown":
            return f"Unknown(spent={self.spent})"
        return f"Equal({self.witness})" if self.witness else "Equal"


def Equal(witness: str = "") -> EqualityVerdict:
    return EqualityVerdict("equal", witness)


def Distinct(witness: str) -> EqualityVerdict:
    return EqualityVerdict("distinct", witness)


def Unknown(spent: int, reason: str = "") -> EqualityVerdict:
    return EqualityVerdict("unknown", reason, spent)


def check_word(g: LabeledGraph, w: GroupWord) -> None:
    bad = w.support() - set(g.vertices)
    if bad:
        raise ValueError(f"unknown generator(s): {', '.join(sorted(bad))}")


@lru_cache(maxsize=4096)
def _induced(g: LabeledGraph, subset: frozenset[str]) -> LabeledGraph:
    return g.induced(subset)


def _exact_triviality(g: LabeledGraph, r: GroupWord) -> EqualityVerdict | None:
    """Decide r == 1 when the subgraph spanned by its letters has an exact backend.

    A standard parabolic subgroup is the Artin group of the induced subgraph,
    so r is trivial in G iff it is trivial there.
    """
    from .dihedral import group

    if r.is_identity():
        return Equal("free reduction")
    supp = sorted(r.support(), key=g.vertices.index)
    sub = _induced(g, frozenset(supp))
    if not sub.labels:
        return Distinct("free parabolic")
    if len(supp) == 2:
        s, t = supp
        nf = group(sub.labels[edge_key(s, t)], (s, t)).nf(r)
        return Equal(f"garside_nf[{s},{t}]") if nf.is_identity() else Distinct(f"garside_nf[{s},{t}]")
    if all(m == 2 for m in sub.labels.values()):
        if raag_normal_form(sub, r).is_identity():
            return Equal("raag_normal_form")
        return Distinct("raag_normal_form")
    return None


def _invariant_distinct(g: LabeledGraph, r: GroupWord) -> EqualityVerdict | None:
    from .hecke import representations

    if total_exponent(r):
        return Distinct("total_exponent")
    if any(abelianization(g, r)):
        return Distinct("abelianization")
    for rep in representations(g):
        if rep.key(r) != rep.key(IDENTITY):
            return Distinct(rep.name)
    return None


def is_trivial(g: LabeledGraph, w: GroupWord, budget: int = DEFAULT_BUDGET) -> EqualityVerdict:
    check_word(g, w)
    r, _ = cyclic_reduce(w)
    return _decide_trivial(g, r, budget)


@lru_cache(maxsize=1 << 16)
def _decide_trivial(g: LabeledGraph, r: GroupWord, budget: int) -> EqualityVerdict:
    verdict = _exact_triviality(g, r)
    if verdict is None:
        verdict = _invariant_distinct(g, r)
    if verdict is None:
        short, _ = cyclic_reduce(shorten_by_edges(g, r))
        if len(short) < len(r):
            return _decide_trivial(g, short, budget)
        verdict = rewrite_search(g, r, budget)
    return verdict


def equality(g: LabeledGraph, w1: GroupWord, w2: GroupWord, budget: int = DEFAULT_BUDGET) -> EqualityVerdict:
    """Three-valued equality: Equal and Distinct are always correct."""
    if w1 == w2:
        return Equal("identical words")
    return is_trivial(g, w1 * w2.inverse(), budget)


# -- bounded rewriting ----------------------------------------------------------

@lru_cache(maxsize=64)
def _substitutions(g: LabeledGraph) -> tuple[tuple[tuple[Letter, ...], tuple[Letter, ...]], ...]:
    """Moves u -> v with u v^-1 a cyclic rotation of a relator (or its inverse).

    Only moves that replace at least m - 1 letters are kept, which bounds the
    growth of a single step by two letters.
    """
    subs = set()
    for (a, b), m in g.labels.items():
        rel = (alternating(a, b, m) * alternating(b, a, m).inverse()).letters
        for r in (rel, GroupWord(rel).inverse().letters):
            n = len(r)
            for i in range(n):
                rot = r[i:] + r[:i]
                for k in range(max(1, m - 1), n):
                    u = rot[:k]
                    v = GroupWord(rot[k:]).inverse().letters
                    subs.add((u, v))
    return tuple(sorted(subs))


@lru_cache(maxsize=64)
def _substitutions_by_head(g: LabeledGraph) -> dict[Letter, tuple]:
    by_head: dict[Letter, list] = {}
    for u, v in _substitutions(g):
        by_head.setdefault(u[0], []).append((u, v))
    return {k: tuple(v) for k, v in by_head.items()}


def _cancel(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for x in letters:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _canonical_cyclic(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    w = _cancel(letters)
    i, j = 0, len(w) - 1
    while i < j and w[i][0] == w[j][0] and w[i][1] == -w[j][1]:
        i += 1
        j -= 1
    w = w[i:j + 1]
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def rewrite_search(g: LabeledGraph, r: GroupWord, budget: int = DEFAULT_BUDGET) -> EqualityVerdict:
    """Best-first search for a proof that r is trivial, treating r as a cyclic word.

    Each relator substitution applied counts against the budget.  Reaching
    the empty word proves triviality; otherwise the answer is Unknown.
    """
    by_head = _substitutions_by_head(g)
    start = _canonical_cyclic(r.letters)
    seen = {start}
    heap = [(len(start), start)]
    spent = 0
    while heap:
        _, w = heapq.heappop(heap)
        if not w:
            return Equal("relator search")
        n = len(w)
        for i in range(n):
            window = w[i:] + w[:i]
            for u, v in by_head.get(window[0], ()):
                if len(u) > n or window[:len(u)] != u:
                    continue
                spent += 1
                nxt = _canonical_cyclic(v + window[len(u):])
                if not nxt:
                    return Equal("relator search")
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(heap, (len(nxt), nxt))
                if spent >= budget:
                    return Unknown(spent, "budget exhausted")
    return Unknown(spent, "search space exhausted")


def reduce_into_parabolic(g: LabeledGraph, w: GroupWord, subset: frozenset[str], budget: int) -> tuple[GroupWord | None, int]:
    """Best-first search for a word over ``subset`` equal to w (non-cyclic)."""
    by_head = _substitutions_by_head(g)
    start = w.letters
    seen = {start}
    heap = [(len(start), start)]
    spent = 0
    while heap:
        _, cur = heapq.heappop(heap)
        if all(x in subset for x, _ in cur):
            return GroupWord(cur), spent
        for i in range(len(cur)):
            for u, v in by_head.get(cur[i], ()):
                if cur[i:i + len(u)] != u:
                    continue
                spent += 1
                nxt = _cancel(cur[:i] + v + cur[i + len(u):])
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(heap, (len(nxt), nxt))
                if spent >= budget:
                    return None, spent
    return None, spent


def shorten_by_edges(g: LabeledGraph, w: GroupWord) -> GroupWord:
    """Replace maximal two-generator segments spanning an edge by shorter dihedral words.

    Every replacement is an equality in the edge group, so the result
    represents the same element.  Repeats until no segment gets shorter.
    """
    from .dihedral import group

    letters = w.letters
    changed = True
    while changed:
        changed = False
        out: list[Letter] = []
        i, n = 0, len(letters)
        while i < n:
            pair = {letters[i][0]}
            j = i + 1
            while j < n and (letters[j][0] in pair or len(pair) == 1):
                pair.add(letters[j][0])
                j += 1
            if len(pair) == 2:
                a, b = sorted(pair, key=g.vertices.index)
                m = g.label(a, b)
                if m is not None:
                    seg = GroupWord._reduced(letters[i:j])
                    short = group(m, (a, b)).short_word(seg)
                    if len(short) < len(seg):
                        out.extend(short.letters)
                        changed = True
                        i = j
                        continue
            # keep the first letter only, so the next segment may start inside this one
            out.append(letters[i])
            i += 1
        letters = _cancel(tuple(out))
    return GroupWord._reduced(letters)


@dataclass(frozen=True)
class Membership:
    """Outcome of a parabolic membership test; ``word`` is set when status is equal."""

    verdict: EqualityVerdict
    word: GroupWord | None = None


def parabolic_membership(g: LabeledGraph, w: GroupWord, subset: Iterable[str], budget: int = DEFAULT_BUDGET) -> Membership:
    """Decide whether w lies in the standard parabolic subgroup G_S.

    On success the returned word is an expression of w over S.
    """
    check_word(g, w)
    return _membership(g, w, frozenset(subset), budget)


@lru_cache(maxsize=1 << 16)
def _membership(g: LabeledGraph, w: GroupWord, sub: frozenset[str], budget: int) -> Membership:
    from .hecke import representations

    letters = w.letters
    i, j = 0, len(letters)
    while i < j and letters[i][0] in sub:
        i += 1
    while j > i and letters[j - 1][0] in sub:
        j -= 1
    if i == j:
        return Membership(Equal("letters in subgroup"), w)
    core = GroupWord._reduced(letters[i:j])
    head, tail = GroupWord._reduced(letters[:i]), GroupWord._reduced(letters[j:])
    supp = core.support()
    if supp <= sub:
        return Membership(Equal("letters in subgroup"), w)
    # core lies in G_T for its support T, and G_T ∩ G_S = G_{T∩S} for
    # standard parabolic subgroups, so only G_{T∩S} needs to be searched
    inner = supp & sub
    local_t = _induced(g, frozenset(supp))
    if not local_t.labels:
        return Membership(Distinct("free parabolic"))
    if len(supp) == 2:
        from .dihedral import group

        a, b = local_t.vertices
        grp = group(local_t.labels[edge_key(a, b)], (a, b))
        k = total_exponent(core)
        target = GroupWord.gen(next(iter(inner)), k) if inner else IDENTITY
        if inner or k == 0:
            if grp.nf(core) == grp.nf(target):
                return Membership(Equal(f"garside_nf[{a},{b}]"), head * target * tail)
        return Membership(Distinct(f"garside_nf[{a},{b}]"))
    span = supp | sub
    local = _induced(g, frozenset(span))
    order = tuple(v for v in g.vertices if v in sub)
    if all(m == 2 for m in local.labels.values()):
        nf = raag_normal_form(local, core)
        if nf.support() <= sub:
            return Membership(Equal("raag_normal_form"), head * nf * tail)
        return Membership(Distinct("raag_normal_form"))
    for rep in representations(g):
        if rep.outside_parabolic(core, order):
            return Membership(Distinct(rep.name))
    short = shorten_by_edges(g, core)
    if len(short) < len(core):
        res = _membership(g, short, sub, budget)
        return res if res.word is None else Membership(res.verdict, head * res.word * tail)
    found, spent = reduce_into_parabolic(g, core, sub, budget)
    if found is not None:
        return Membership(Equal("relator search"), head * found * tail)
    return Membership(Unknown(spent, "budget exhausted"))
