"""Graphs on vertex set {1..n}: G(n,p) sampling, exhaustive enumeration,
clique and link-clique counting.

Edges are stored one bit per unordered pair, in lexicographic pair order
((1,2), (1,3), ..., (1,n), (2,3), ...).  Adjacency rows are n-bit masks
(bit v set on row u means u~v), so clique extension is a mask intersection.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

MAX_ENUM_VERTICES = 6


class EnumerationCapError(ValueError):
    """Raised when exhaustive graph enumeration is requested beyond the cap."""


def pair_order(n: int) -> list[tuple[int, int]]:
    """All unordered pairs of {1..n} in lexicographic order."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def _pair_bit(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    # pairs (1,*) occupy bits 0..n-2, pairs (2,*) the next n-2 bits, etc.
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


class Graph:
    """Immutable undirected graph on vertices 1..n.

    ``edge_mask`` packs edge presence in lexicographic pair order; ``adj[v]``
    is the neighbour bitmask of vertex v (bit u set iff u~v, 1-indexed bits).
    """

    __slots__ = ("n", "edge_mask", "adj")

    def __init__(self, n: int, edge_mask: int = 0):
        if n < 1:
            raise ValueError("need at least one vertex")
        m = comb(n, 2)
        if edge_mask < 0 or edge_mask >> m:
            raise ValueError("edge mask out of range for n=%d" % n)
        self.n = n
        self.edge_mask = edge_mask
        adj = [0] * (n + 1)
        bit = 0
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if (edge_mask >> bit) & 1:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
                bit += 1
        self.adj = tuple(adj)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        mask = 0
        for i, j in edges:
            if i == j:
                raise ValueError("self-loop (%d,%d)" % (i, j))
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError("vertex out of range in edge (%d,%d)" % (i, j))
            mask |= 1 << _pair_bit(n, i, j)
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, (1 << comb(n, 2)) - 1)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, 0)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] & (1 << j))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for b, (i, j) in enumerate(pair_order(self.n))
                if (self.edge_mask >> b) & 1]

    @property
    def edge_count(self) -> int:
        return self.edge_mask.bit_count()

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edge_mask == other.edge_mask

    def __hash__(self):
        return hash((self.n, self.edge_mask))

    def __repr__(self):
        return "Graph(n=%d, edges=%d)" % (self.n, self.edge_count)

    def to_text(self) -> str:
        """Fixture format: first line n, then one 'i j' line per edge."""
        lines = [str(self.n)]
        lines += ["%d %d" % e for e in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
        if not rows:
            raise ValueError("empty graph file")
        n = int(rows[0])
        edges = []
        for ln in rows[1:]:
            i, j = ln.split()
            edges.append((int(i), int(j)))
        return cls.from_edges(n, edges)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class GnpParams:
    """Parameters of the G(n,p) model plus a 64-bit reproducibility seed."""

    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0,1]")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def gnp_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for a (seed, stream) pair.

    Philox4x64 keyed directly with the two words, so the mapping from
    (seed, stream) to the bit stream is the documented Philox algorithm and
    reproducible across platforms and numpy versions.
    """
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_gnp(params: GnpParams, stream: int = 0) -> Graph:
    """Draw one graph from G(n,p): each pair present independently with
    probability p, one uniform variate per pair in lexicographic pair order."""
    m = comb(params.n, 2)
    rng = gnp_generator(int(params.seed), stream)
    u = rng.random(m)
    mask = 0
    for b in np.flatnonzero(u < params.p):
        mask |= 1 << int(b)
    return Graph(params.n, mask)


def all_graphs(n: int):
    """Yield every labeled graph on n vertices once, in edge-bitmask order.

    Hard-capped at n=6 (32768 graphs); exhaustive oracles beyond that are
    rejected rather than silently slow.
    """
    if n > MAX_ENUM_VERTICES:
        raise EnumerationCapError(
            "exhaustive enumeration capped at n=%d (got n=%d)" % (MAX_ENUM_VERTICES, n))
    for mask in range(1 << comb(n, 2)):
        yield Graph(n, mask)


def graph_probability(g: Graph, p: float) -> float:
    """P(G(n,p) = g) = p^edges * (1-p)^missing."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    m = comb(g.n, 2)
    e = g.edge_count
    return p ** e * (1.0 - p) ** (m - e)


def _extend_cliques(adj, prefix, cand_mask, depth, out):
    # extend only by vertices larger than max(prefix): cand_mask is already
    # restricted to > max(prefix) and to common neighbours.
    if depth == 0:
        out.append(tuple(prefix))
        return
    mask = cand_mask
    while mask:
        low = mask & -mask
        v = low.bit_length() - 1
        mask ^= low
        prefix.append(v)
        _extend_cliques(adj, prefix, cand_mask & adj[v] & ~((1 << (v + 1)) - 1),
                        depth - 1, out)
        prefix.pop()


def cliques(g: Graph, k: int) -> list[tuple[int, ...]]:
    """All k-cliques of g as sorted vertex tuples, in lexicographic order."""
    if not 1 <= k <= g.n:
        raise ValueError("k must lie in [1, n]")
    out: list[tuple[int, ...]] = []
    full = ((1 << (g.n + 1)) - 1) & ~1
    _extend_cliques(g.adj, [], full, k, out)
    return out


def clique_count(g: Graph, k: int) -> int:
    return _count_cliques_in(g.adj, ((1 << (g.n + 1)) - 1) & ~1, k)


def _count_cliques_in(adj, cand_mask, k) -> int:
    if k == 1:
        return cand_mask.bit_count()
    total = 0
    mask = cand_mask
    while mask:
        low = mask & -mask
        v = low.bit_length() - 1
        mask ^= low
        total += _count_cliques_in(adj, cand_mask & adj[v] & ~((1 << (v + 1)) - 1), k - 1)
    return total


def link_count(g: Graph, t, k: int) -> int:
    """Number of size-k subsets s disjoint from t such that s is a clique and
    every cross pair (i in s, j in t) is an edge.

    Evaluated literally, so t itself need not be a clique.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    t = tuple(sorted(set(t)))
    if any(not 1 <= v <= g.n for v in t):
        raise ValueError("t has vertices outside 1..n")
    cand = ((1 << (g.n + 1)) - 1) & ~1
    for v in t:
        cand &= g.adj[v]
    for v in t:
        cand &= ~(1 << v)
    return _count_cliques_in(g.adj, cand, k)
