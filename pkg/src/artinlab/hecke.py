"""
Matrix images of Artin groups through Hecke-algebra reflection representations.

For a defining graph on n generators pick a prime p and q = r^2 in F_p, and
let T_i act on F_p^n by

    T_i e_i = -e_i,      T_i e_j = q e_j + c_ij e_i   (j != i),

with c_ij = c_ji = r (zeta + zeta^-1), zeta a primitive 2m-th root of unity,
when i, j span an edge labelled m, and c_ij = c_ji an arbitrary constant
when they do not.  These satisfy the braid relations (this is checked when a
representation is built), so w -> T_w is a homomorphism and two words with
different images are different group elements.  Images are never used to
prove equality.

For a parabolic subgroup G_S the span U_S of {e_i : i in S} is invariant, and
G_S acts on V/U_S by the scalar q^(total exponent).  A matrix failing either
property certifies that the element is outside G_S.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from sympy import isprime, primitive_root

from .graph_core import LabeledGraph
from .words import GroupWord, total_exponent


class RepresentationError(RuntimeError):
    pass


def _primes(modulus: int, count: int, below: int = 1 << 25) -> list[int]:
    out = []
    k = (below - 1) // modulus
    while len(out) < count and k > 0:
        p = k * modulus + 1
        if isprime(p):
            out.append(p)
        k -= 1
    return out


@dataclass
class HeckeRep:
    graph: LabeledGraph
    p: int
    q: int
    index: dict[str, int]
    gens: dict[tuple[str, int], np.ndarray]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return f"hecke[p={self.p},q={self.q}]"

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a @ b) % self.p

    def image(self, w: GroupWord) -> np.ndarray:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        n = len(self.index)
        if len(w) == 0:
            out = np.eye(n, dtype=np.int64)
        elif len(w) == 1:
            out = self.gens[w.letters[0]]
        else:
            half = len(w) // 2
            out = self.mul(self.image(w[:half]), self.image(w[half:]))
        if len(self._cache) > 200_000:
            self._cache.clear()
        self._cache[w] = out
        return out

    def key(self, w: GroupWord) -> bytes:
        return self.image(w).tobytes()

    def coset_key(self, g: GroupWord, subset: tuple[str, ...]) -> bytes:
        """Invariant of the coset g G_S: the subspace g U_S in reduced row echelon form."""
        cols = self.image(g)[:, [self.index[x] for x in subset]].T.copy()
        return _rref(cols, self.p).tobytes()

    def outside_parabolic(self, w: GroupWord, subset: tuple[str, ...]) -> bool:
        """True when the image of w certifies that w is not in G_S."""
        mat = self.image(w)
        inside = [self.index[x] for x in subset]
        outside = [i for i in range(len(self.index)) if i not in set(inside)]
        if outside and np.any(mat[np.ix_(outside, inside)] % self.p):
            return True
        scalar = pow(self.q, total_exponent(w) % (self.p - 1), self.p)
        block = mat[np.ix_(outside, outside)]
        return bool(np.any((block - scalar * np.eye(len(outside), dtype=np.int64)) % self.p))


def _rref(rows: np.ndarray, p: int) -> np.ndarray:
    a = rows.copy() % p
    r = 0
    nrows, ncols = a.shape
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        for i in range(nrows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
        if r == nrows:
            break
    return a


def _braid(a: np.ndarray, b: np.ndarray, m: int, p: int) -> np.ndarray:
    out = np.eye(a.shape[0], dtype=np.int64)
    for i in range(m):
        out = (out @ (a if i % 2 == 0 else b)) % p
    return out


def build_rep(g: LabeledGraph, p: int, seed: int) -> HeckeRep:
    rng = random.Random(seed)
    n = len(g.vertices)
    if n * p * p >= 1 << 62:
        raise RepresentationError("prime too large for int64 matrix products")
    index = {v: i for i, v in enumerate(g.vertices)}
    gen = primitive_root(p)
    r = rng.randrange(2, p - 1)
    q = r * r % p
    coeff = np.zeros((n, n), dtype=np.int64)
    for u, v in ((u, v) for i, u in enumerate(g.vertices) for v in g.vertices[i + 1:]):
        m = g.label(u, v)
        if m is None:
            c = rng.randrange(1, p)
        else:
            zeta = pow(gen, (p - 1) // (2 * m), p)
            c = r * (zeta + pow(zeta, -1, p)) % p
        coeff[index[u], index[v]] = coeff[index[v], index[u]] = c
    mats: dict[tuple[str, int], np.ndarray] = {}
    qinv = pow(q, -1, p)
    for v, i in index.items():
        t = np.zeros((n, n), dtype=np.int64)
        for j in range(n):
            if j == i:
                t[i, i] = p - 1
            else:
                t[j, j] = q
                t[i, j] = coeff[i, j]
        # T^-1 = q^-1 (T - (q - 1))
        tinv = (qinv * ((t - (q - 1) * np.eye(n, dtype=np.int64)) % p)) % p
        if np.any((t @ tinv) % p != np.eye(n, dtype=np.int64)):
            raise RepresentationError("inverse check failed")
        mats[(v, 1)] = t
        mats[(v, -1)] = tinv
    for (u, v), m in g.labels.items():
        a, b = mats[(u, 1)], mats[(v, 1)]
        if np.any(_braid(a, b, m, p) != _braid(b, a, m, p)):
            raise RepresentationError(f"braid relation fails on edge {u}{v}")
    return HeckeRep(g, p, q, index, mats)


@lru_cache(maxsize=64)
def representations(g: LabeledGraph, count: int = 3) -> tuple[HeckeRep, ...]:
    labels = set(g.labels.values()) or {2}
    modulus = 2 * math.lcm(*labels)
    return tuple(build_rep(g, p, seed) for seed, p in enumerate(_primes(modulus, count)))
