"""
Exact arithmetic in dihedral Artin groups G(m) = < s, t | sts... = tst... >.

Elements are kept in left-greedy Garside normal form D^k f_1 ... f_r, where D
is the alternating word of length m and every factor f_i is a proper simple
element, i.e. an alternating word of length 1 .. m-1.  A simple element is
stored as ``(first, length)`` with ``first`` the index 0 (s) or 1 (t) of its
first letter.

For proper simples a, b the pair (a, b) is left-weighted exactly when the
last letter of a equals the first letter of b; otherwise a*b is again an
alternating word and either is simple or splits off a copy of D.
Conjugation by D swaps s and t when m is odd and fixes them when m is even.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .words import GroupWord, alternating, total_exponent

Simple = tuple[int, int]
NF_CACHE_SIZE = 1 << 17


class DihedralError(ValueError):
    pass


@dataclass(frozen=True)
class GarsideNF:
    m: int
    delta_power: int
    factors: tuple[Simple, ...]
    gens: tuple[str, str] = ("s", "t")

    @property
    def canonical_length(self) -> int:
        return len(self.factors) + abs(self.delta_power)

    @property
    def inf(self) -> int:
        return self.delta_power

    @property
    def sup(self) -> int:
        return self.delta_power + len(self.factors)

    def is_identity(self) -> bool:
        return self.delta_power == 0 and not self.factors

    def simple_word(self, f: Simple) -> GroupWord:
        a = self.gens[f[0]]
        b = self.gens[1 - f[0]]
        return alternating(a, b, f[1])

    def word(self) -> GroupWord:
        """A word for the element: the power of D followed by the factors."""
        delta = alternating(self.gens[0], self.gens[1], self.m)
        w = delta ** self.delta_power
        for f in self.factors:
            w = w * self.simple_word(f)
        return w

    def format(self) -> str:
        fs = " . ".join(str(self.simple_word(f)) for f in self.factors)
        return f"D^{self.delta_power} | {fs}".rstrip()

    def __str__(self) -> str:
        return self.format()


class DihedralGroup:
    """Normal-form arithmetic for one label m and a fixed pair of generator names."""

    def __init__(self, m: int, gens: tuple[str, str] = ("s", "t")):
        if m < 2:
            raise DihedralError(f"label must be >= 2, got {m}")
        if gens[0] == gens[1]:
            raise DihedralError("generators must be distinct")
        self.m = m
        self.gens = tuple(gens)
        self._index = {gens[0]: 0, gens[1]: 1}
        self._nf_cache: dict[GroupWord, GarsideNF] = {}

    # -- simples ---------------------------------------------------------

    def _last(self, f: Simple) -> int:
        return f[0] if f[1] % 2 == 1 else 1 - f[0]

    def _delta_conj(self, f: Simple) -> Simple:
        return (1 - f[0], f[1]) if self.m % 2 == 1 else f

    # -- normalisation ------------------------------------------------------

    def _normalise(self, k: int, factors: list[Simple]) -> tuple[int, tuple[Simple, ...]]:
        m = self.m
        fs = [f for f in factors if f[1] > 0]
        while True:
            for i, f in enumerate(fs):
                if f[1] == m:
                    # D moves to the front, conjugating everything it passes
                    fs = [self._delta_conj(x) for x in fs[:i]] + fs[i + 1:]
                    k += 1
                    break
            else:
                for i in range(len(fs) - 1):
                    a, b = fs[i], fs[i + 1]
                    if self._last(a) == b[0]:
                        continue
                    n = a[1] + b[1]
                    if n <= m:
                        fs[i:i + 2] = [(a[0], n)]
                    else:
                        rest = (a[0] if m % 2 == 0 else 1 - a[0], n - m)
                        fs[i:i + 2] = [(a[0], m), rest]
                    break
                else:
                    return k, tuple(fs)

    def _mul_letter(self, k: int, fs: tuple[Simple, ...], x: int, e: int) -> tuple[int, tuple[Simple, ...]]:
        if e == 1:
            return self._normalise(k, list(fs) + [(x, 1)])
        # x^-1 = D^-1 y with y x = D; right multiplication by D^-1 conjugates every factor
        first = x if self.m % 2 == 1 else 1 - x
        y = (first, self.m - 1)
        return self._normalise(k - 1, [self._delta_conj(f) for f in fs] + [y])

    def nf(self, w: GroupWord) -> GarsideNF:
        hit = self._nf_cache.get(w)
        if hit is not None:
            return hit
        k, fs = 0, ()
        for x, e in w:
            if x not in self._index:
                raise DihedralError(f"letter {x!r} is not one of {self.gens}")
            k, fs = self._mul_letter(k, fs, self._index[x], e)
        out = GarsideNF(self.m, k, fs, self.gens)
        if len(self._nf_cache) < NF_CACHE_SIZE:
            self._nf_cache[w] = out
        return out

    def _complement(self, f: Simple) -> Simple:
        """The simple c with f c = D."""
        return (1 - self._last(f), self.m - f[1])

    def _positive_word(self, fs: list[Simple]) -> GroupWord:
        w = GroupWord()
        for f in fs:
            w = w * GarsideNF(self.m, 0, (), self.gens).simple_word(f)
        return w

    def short_word(self, w: GroupWord) -> GroupWord:
        """A word for w that is never longer than the normal form word.

        Positive and negative elements get a positive word or the inverse of
        one, which is geodesic because every word is at least as long as the
        absolute total exponent.  For mixed elements D^-j f_1 ... f_r the
        leading factors are cancelled against copies of D, giving X^-1 Y with
        X and Y positive.
        """
        nf = self.nf(w)
        k, fs = nf.delta_power, list(nf.factors)
        if k >= 0:
            return nf.word()
        inv = self.nf(w.inverse())
        if inv.delta_power >= 0:
            return inv.word().inverse()
        # element = (D^n R)^-1 f_i ... f_r, starting from n = -k, R empty
        n, rest = -k, []
        while n > 0 and fs:
            f = fs.pop(0)
            c = self._complement(f)
            for _ in range(n - 1):
                c = self._delta_conj(c)
            rest.insert(0, c)
            n -= 1
        denominator = self.delta() ** n * self._positive_word(rest)
        return denominator.inverse() * self._positive_word(fs)

    def equal(self, w1: GroupWord, w2: GroupWord) -> bool:
        return self.nf(w1) == self.nf(w2)

    def is_trivial(self, w: GroupWord) -> bool:
        return self.nf(w).is_identity()

    # -- structure -----------------------------------------------------------

    def delta(self) -> GroupWord:
        return alternating(self.gens[0], self.gens[1], self.m)

    def center_generator(self) -> GroupWord:
        st = GroupWord([(self.gens[0], 1), (self.gens[1], 1)])
        return st ** (self.m if self.m % 2 == 1 else self.m // 2)

    def center_exponent(self) -> int:
        return total_exponent(self.center_generator())

    def other(self, gen: str) -> str:
        return self.gens[1 - self._index[gen]]

    def membership(self, h: GroupWord, gen: str) -> tuple[int, int] | None:
        """(a, b) with h = gen^a z^b, or None when h is outside <gen, z>.

        If h = gen^a z^b then its normal form has exactly |a| factors, since
        z is a power of D and gen^a contributes one factor per letter whether
        a is positive or negative.  So a is +-(number of factors), and b is
        then forced by the total exponent.
        """
        nfh = self.nf(h)
        ez = self.center_exponent()
        r = len(nfh.factors)
        eh = total_exponent(h)
        for a in sorted({r, -r}, reverse=True):
            if (eh - a) % ez:
                continue
            b = (eh - a) // ez
            cand = GroupWord.gen(gen, a) * self.center_generator() ** b
            if self.nf(cand) == nfh:
                return a, b
        return None

    def centralizes(self, h: GroupWord, gen: str) -> bool:
        g = GroupWord.gen(gen)
        return self.equal(g.conjugate(h), g)

    def elements(self, max_length: int) -> Iterator[GarsideNF]:
        """All elements of canonical length <= max_length, shortest first."""
        proper = [(p, n) for n in range(1, self.m) for p in (0, 1)]
        for total in range(max_length + 1):
            for k in sorted(range(-total, total + 1), key=lambda v: (abs(v), -v)):
                r = total - abs(k)
                for fs in self._factor_sequences(r, proper):
                    yield GarsideNF(self.m, k, fs, self.gens)

    def _factor_sequences(self, r: int, proper: list[Simple]) -> Iterator[tuple[Simple, ...]]:
        if r == 0:
            yield ()
            return
        for first in proper:
            yield from self._extend((first,), r, proper)

    def _extend(self, seq: tuple[Simple, ...], r: int, proper: list[Simple]) -> Iterator[tuple[Simple, ...]]:
        if len(seq) == r:
            yield seq
            return
        last = self._last(seq[-1])
        for f in proper:
            if f[0] == last:
                yield from self._extend(seq + (f,), r, proper)

    def conjugate_cosets(self, gen: str, max_length: int) -> list[tuple[GroupWord, GarsideNF]]:
        """Distinct cosets g<gen, z> with g of canonical length <= max_length.

        Two cosets agree exactly when their conjugates g gen g^-1 agree,
        because the normaliser of <gen> in G(m) is <gen, z>.  Each entry is a
        representative word and the normal form of its conjugate.
        """
        x = GroupWord.gen(gen)
        seen: dict[GarsideNF, GroupWord] = {}
        for el in self.elements(max_length):
            g = self.short_word(el.word())
            c = self.nf(x.conjugate(g))
            if c not in seen:
                seen[c] = g
        return [(g, c) for c, g in seen.items()]


@lru_cache(maxsize=None)
def group(m: int, gens: tuple[str, str] = ("s", "t")) -> DihedralGroup:
    return DihedralGroup(m, gens)


def garside_nf(m: int, w: GroupWord, gens: tuple[str, str] = ("s", "t")) -> GarsideNF:
    return group(m, tuple(gens)).nf(w)


def dihedral_equal(m: int, w1: GroupWord, w2: GroupWord, gens: tuple[str, str] = ("s", "t")) -> bool:
    return group(m, tuple(gens)).equal(w1, w2)


def center_generator(m: int, gens: tuple[str, str] = ("s", "t")) -> GroupWord:
    return group(m, tuple(gens)).center_generator()


def centralizes_generator(m: int, h: GroupWord, gen: str, gens: tuple[str, str] = ("s", "t")) -> bool:
    return group(m, tuple(gens)).centralizes(h, gen)


def membership_s_Z(m: int, h: GroupWord, gen: str, gens: tuple[str, str] = ("s", "t")) -> tuple[int, int] | None:
    return group(m, tuple(gens)).membership(h, gen)


def generator_conjugate_cosets(m: int, gen: str, L: int, gens: tuple[str, str] = ("s", "t")) -> list[tuple[GroupWord, GarsideNF]]:
    return group(m, tuple(gens)).conjugate_cosets(gen, L)


@lru_cache(maxsize=256)
def all_generator_conjugates(m: int, L: int, gens: tuple[str, str] = ("s", "t")) -> tuple[tuple[GroupWord, str, GarsideNF], ...]:
    """Conjugates h x h^-1 (x in gens, h of canonical length <= L), deduplicated.

    For odd m the two generators are conjugate, so both lists merge; the
    first occurrence in (length, generator) order is kept.
    """
    grp = group(m, tuple(gens))
    seen: dict[GarsideNF, tuple[GroupWord, str]] = {}
    for el in grp.elements(L):
        h = grp.short_word(el.word())
        for x in gens:
            c = grp.nf(GroupWord.gen(x).conjugate(h))
            if c not in seen:
                seen[c] = (h, x)
    return tuple((h, x, c) for c, (h, x) in seen.items())


@lru_cache(maxsize=256)
def conjugate_index(m: int, L: int, gens: tuple[str, str] = ("s", "t")) -> dict[GarsideNF, tuple[GroupWord, str]]:
    """Normal form of h x h^-1 -> the (h, x) kept by all_generator_conjugates."""
    return {c: (h, x) for h, x, c in all_generator_conjugates(m, L, gens)}
