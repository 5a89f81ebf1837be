"""Combinatorics of correlation terms between n electrons.

A term ``prod r_ij`` over a set of electron pairs is a simple graph on n
points with m lines. These helpers count the feasible (n, m) labels,
enumerate connected graphs up to isomorphism, test degree sequences for
realizability and split a term into independent factors (components).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_POINTS = 8
MAX_ENUMERATE = 6


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on points ``1..n``; edges are stored as sorted pairs."""

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable = ()):
        if not 1 <= n <= MAX_POINTS:
            raise ValueError(f"point count must be in 1..{MAX_POINTS}, got {n}")
        norm = set()
        for e in edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop at point {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge {e} outside points 1..{n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> tuple:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i - 1] += 1
            deg[j - 1] += 1
        return tuple(deg)

    def composition(self) -> tuple:
        """Degree sequence sorted in non-increasing order."""
        return tuple(sorted(self.degrees(), reverse=True))

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1


def max_correlation_terms(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * (n - 1) // 2


def nm_label_count(n: int) -> int:
    """Number of ``m`` values, ``n-1 <= m <= n(n-1)/2``, for connected graphs on n points."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return (n * n - 3 * n + 4) // 2


def is_graphical(degrees: Sequence[int]) -> bool:
    """Erdos-Gallai test."""
    d = sorted((int(x) for x in degrees), reverse=True)
    if any(x < 0 for x in d) or sum(d) % 2:
        return False
    n = len(d)
    if d and d[0] > n - 1:
        return False
    prefix = 0
    for k in range(1, n + 1):
        prefix += d[k - 1]
        if prefix > k * (k - 1) + sum(min(x, k) for x in d[k:]):
            return False
    return True


def connected_components(g: SimpleGraph) -> list:
    """Partition of ``1..n`` into maximal connected sets, each sorted, ordered by smallest point."""
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in sorted(g.edges):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict = {}
    for v in range(1, g.n + 1):
        groups.setdefault(find(v), []).append(v)
    return [groups[k] for k in sorted(groups)]


@lru_cache(maxsize=None)
def _pairs(n: int) -> tuple:
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple:
    # for each permutation, the image index of every pair bit
    pairs = _pairs(n)
    index = {p: k for k, p in enumerate(pairs)}
    tables = []
    for perm in itertools.permutations(range(n)):
        tables.append(tuple(index[tuple(sorted((perm[i], perm[j])))] for i, j in pairs))
    return tuple(tables)


def _mask_connected(n: int, mask: int) -> bool:
    adj = [0] * n
    for k, (i, j) in enumerate(_pairs(n)):
        if mask >> k & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in range(n):
            if frontier >> v & 1:
                nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << n) - 1


def _orbit(n: int, mask: int) -> set:
    bits = [k for k in range(len(_pairs(n))) if mask >> k & 1]
    out = set()
    for table in _perm_tables(n):
        img = 0
        for k in bits:
            img |= 1 << table[k]
        out.add(img)
    return out


def canonical_mask(n: int, mask: int) -> int:
    """Smallest edge bitmask over all relabelings of the points."""
    return min(_orbit(n, mask))


def _from_mask(n: int, mask: int) -> SimpleGraph:
    return SimpleGraph(n, [(i + 1, j + 1) for k, (i, j) in enumerate(_pairs(n)) if mask >> k & 1])


@lru_cache(maxsize=None)
def _connected_classes(n: int) -> dict:
    # m -> canonical masks; each new class marks its whole orbit as seen
    seen: set = set()
    out: dict = {}
    for mask in range(1 << len(_pairs(n))):
        if mask in seen or not _mask_connected(n, mask):
            continue
        orbit = _orbit(n, mask)
        seen |= orbit
        out.setdefault(bin(mask).count("1"), []).append(min(orbit))
    return {m: tuple(sorted(v)) for m, v in sorted(out.items())}


def enumerate_connected(n: int, m: int) -> list:
    """One canonical representative per isomorphism class of connected (n, m) graphs."""
    if not 1 <= n <= MAX_ENUMERATE:
        raise ValueError(f"enumeration limited to 1..{MAX_ENUMERATE} points, got {n}")
    return [_from_mask(n, c) for c in _connected_classes(n).get(m, ())]


def connected_count(n: int, m: int) -> int:
    """``C(n, m)``."""
    return len(enumerate_connected(n, m))


def unlabeled_connected_total(n: int) -> int:
    if not 1 <= n <= MAX_ENUMERATE:
        raise ValueError(f"enumeration limited to 1..{MAX_ENUMERATE} points, got {n}")
    return sum(len(v) for v in _connected_classes(n).values())


@lru_cache(maxsize=None)
def labeled_connected_count(n: int) -> int:
    """Connected labeled graphs on n points.

    ``c(n) = 2^{C(n,2)} - sum_{k<n} C(n-1, k-1) c(k) 2^{C(n-k,2)}``
    """
    if not 1 <= n <= 10:
        raise ValueError("labeled counts supported for 1 <= n <= 10")
    total = 2 ** (n * (n - 1) // 2)
    for k in range(1, n):
        total -= math.comb(n - 1, k - 1) * labeled_connected_count(k) * 2 ** ((n - k) * (n - k - 1) // 2)
    return total


def labeled_connected_brute(n: int) -> int:
    """Exhaustive count over all ``2^{C(n,2)}`` labeled graphs (small n only)."""
    if not 1 <= n <= MAX_ENUMERATE:
        raise ValueError(f"brute force limited to 1..{MAX_ENUMERATE} points")
    return sum(_mask_connected(n, mask) for mask in range(1 << len(_pairs(n))))


def connected_fraction(n: int) -> float:
    """``labeled_connected_count(n) / 2^{n(n-1)/2}``, which tends to 1."""
    return labeled_connected_count(n) / 2 ** (n * (n - 1) // 2)


def composition_collisions(n: int, m: int) -> list:
    """Groups of non-isomorphic connected (n, m) graphs sharing one degree composition."""
    by_comp: dict = {}
    for g in enumerate_connected(n, m):
        by_comp.setdefault(g.composition(), []).append(g)
    return [gs for _, gs in sorted(by_comp.items()) if len(gs) > 1]


def first_collision() -> tuple:
    """Smallest (n, m), ordered by n then m, with a composition shared by two classes."""
    for n in range(1, MAX_ENUMERATE + 1):
        for m in range(n - 1, n * (n - 1) // 2 + 1):
            hits = composition_collisions(n, m)
            if hits:
                return n, m, hits[0]
    raise LookupError("no collision up to the enumeration limit")
