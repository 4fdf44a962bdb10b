#!/usr/bin/env python3

# Copyright (C) 2025 Dustin Darcy <ScarcityHypothesis.org>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program. If not, see <https://www.gnu.org/licenses/>.

"""
matching_width.py

Exact partial matching width and witnessing matchings.

Partial matching width is computed by dynamic programming over subsets: the
best permutation of a set S (read as a prefix) has value
g(S) = max(cut(S), min over v in S of g(S - v)), where cut(S) is the maximum
matching between S and the rest of the graph. The same recursion over the
witnessing size gives the smallest largest-witnessing-matching over all
permutations.
"""

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import bipartite

import pmwtools
from pmwtools.errors import PreconditionError, VerificationError, check_cap

Edge = Tuple[int, int]
Matching = FrozenSet[Edge]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


def as_matching(pairs: Iterable[Tuple[int, int]]) -> Matching:
    """Turn an iterable of vertex pairs into the canonical matching representation."""
    return frozenset(normalize_edge(u, v) for u, v in pairs)


def matched_vertices(M: Matching) -> FrozenSet[int]:
    return frozenset(v for e in M for v in e)


@dataclass(frozen=True)
class WitnessingMatching:
    """A matching together with the permutation split that supports it."""
    matching: Matching
    order: Tuple[int, ...]
    split: int

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "matching", as_matching(self.matching))
        if not 0 <= self.split <= len(self.order):
            raise PreconditionError(f"Split {self.split} outside 0..{len(self.order)}", clause="split")

    @property
    def size(self) -> int:
        return len(self.matching)

    @property
    def prefix(self) -> Tuple[int, ...]:
        return self.order[:self.split]

    @property
    def suffix(self) -> Tuple[int, ...]:
        return self.order[self.split:]

    def is_supported(self, u: int, v: int) -> bool:
        """Whether edge {u, v} crosses the split or leaves the permuted set."""
        prefix = set(self.prefix)
        suffix = set(self.suffix)
        inside = prefix | suffix
        if (u in prefix and v in suffix) or (v in prefix and u in suffix):
            return True
        return (u in inside) != (v in inside)


# -----------------------------
# Cut matchings
# -----------------------------
def max_matching_across_cut(G: nx.Graph, A: Iterable[int]) -> Matching:
    """
    Maximum matching using only edges with exactly one end in A.

    The result is certified maximum by a Konig vertex cover of equal size.
    """
    A = frozenset(A)
    B = nx.Graph()
    for u, v in G.edges:
        if (u in A) != (v in A):
            B.add_edge(u, v)
    if B.number_of_edges() == 0:
        return frozenset()
    top = [v for v in B.nodes if v in A]
    raw = bipartite.hopcroft_karp_matching(B, top_nodes=top)
    cover = bipartite.to_vertex_cover(B, raw, top_nodes=top)
    M = as_matching((u, v) for u, v in raw.items() if u in A)
    if len(cover) != len(M):
        raise VerificationError(f"Cut matching of size {len(M)} has vertex cover of size {len(cover)}")
    return M


def cut_size(G: nx.Graph, A: Iterable[int]) -> int:
    return len(max_matching_across_cut(G, A))


def _subset_minimax(items: Sequence[int], value: Callable[[FrozenSet[int]], int]) -> Dict[int, int]:
    """
    g(S) = max(value(S), min over v in S of g(S - v)) for every subset S of items.

    Subsets are bitmasks over the positions in items.
    """
    n = len(items)
    g = [0] * (1 << n)
    g[0] = value(frozenset())
    for mask in range(1, 1 << n):
        members = frozenset(items[i] for i in range(n) if mask >> i & 1)
        best = min(g[mask & ~(1 << i)] for i in range(n) if mask >> i & 1)
        g[mask] = max(value(members), best)
    return dict(enumerate(g))


def pmw_exact(G: nx.Graph, V: Iterable[int], cap: Optional[int] = None) -> int:
    """Partial matching width of V: min over permutations of the best prefix cut."""
    V = sorted(set(V))
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_PERMS
    check_cap("permutation", cap, len(V))
    missing = [v for v in V if v not in G]
    if missing:
        raise PreconditionError(f"Vertices {missing} are not in the graph", clause="subset")
    if not V:
        return 0
    table = _subset_minimax(V, lambda S: cut_size(G, S))
    return table[(1 << len(V)) - 1]


def pmw_order(G: nx.Graph, V: Iterable[int], cap: Optional[int] = None) -> Tuple[int, Tuple[int, ...]]:
    """
    Partial matching width of V together with a permutation attaining it.

    The permutation is read back from the subset table: the last element of
    each prefix is the one whose removal leaves the smallest value.
    """
    V = sorted(set(V))
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_PERMS
    check_cap("permutation", cap, len(V))
    missing = [v for v in V if v not in G]
    if missing:
        raise PreconditionError(f"Vertices {missing} are not in the graph", clause="subset")
    table = _subset_minimax(V, lambda S: cut_size(G, S))
    mask = (1 << len(V)) - 1
    reverse = []
    while mask:
        members = [i for i in range(len(V)) if mask >> i & 1]
        i = min(members, key=lambda j: (table[mask & ~(1 << j)], j))
        reverse.append(V[i])
        mask &= ~(1 << i)
    return table[(1 << len(V)) - 1], tuple(reversed(reverse))


def pmw_table(G: nx.Graph, cap: Optional[int] = None) -> Dict[FrozenSet[int], int]:
    """
    Partial matching width of every vertex subset of a small graph at once.

    The recursion does not depend on which set is being permuted, so one pass
    over all subsets of V(G) answers every V.
    """
    nodes = sorted(G.nodes)
    check_cap("permutation", pmwtools.DEFAULT_CAP_PERMS if cap is None else cap, len(nodes))
    table = _subset_minimax(nodes, lambda S: cut_size(G, S))
    return {frozenset(nodes[i] for i in range(len(nodes)) if mask >> i & 1): value
            for mask, value in table.items()}


# -----------------------------
# Witnessing matchings
# -----------------------------
def supported_edges(G: nx.Graph, V: FrozenSet[int], prefix: FrozenSet[int]) -> List[Edge]:
    """Edges crossing prefix / (V - prefix), plus edges with exactly one end in V."""
    edges = []
    for u, v in G.edges:
        u_in, v_in = u in V, v in V
        if u_in and v_in:
            if (u in prefix) != (v in prefix):
                edges.append(normalize_edge(u, v))
        elif u_in != v_in:
            edges.append(normalize_edge(u, v))
    return edges


def _max_matching_on(edges: List[Edge]) -> Matching:
    if not edges:
        return frozenset()
    H = nx.Graph(edges)
    return as_matching(nx.max_weight_matching(H, maxcardinality=True))


def witnessing_size(G: nx.Graph, V: FrozenSet[int], prefix: FrozenSet[int],
                    cache: Optional[Dict[FrozenSet[Edge], int]] = None) -> int:
    """Size of the largest witnessing matching for one split; cache is keyed by the supported edge set."""
    edges = supported_edges(G, V, prefix)
    if cache is None:
        return len(_max_matching_on(edges))
    key = frozenset(edges)
    if key not in cache:
        cache[key] = len(_max_matching_on(edges))
    return cache[key]


def witnessing_matching_exact(G: nx.Graph, V: Iterable[int], SV: Sequence[int]) -> WitnessingMatching:
    """Largest witnessing matching for SV over every split position (ties: smallest split)."""
    V = frozenset(V)
    SV = tuple(SV)
    if len(SV) != len(V) or set(SV) != V:
        raise PreconditionError("SV must be a permutation of V", clause="permutation")
    best = None
    for t in range(len(SV) + 1):
        M = _max_matching_on(supported_edges(G, V, frozenset(SV[:t])))
        if best is None or len(M) > len(best[0]):
            best = (M, t)
    return WitnessingMatching(best[0], SV, best[1])


def min_witnessing_size(G: nx.Graph, V: Iterable[int], cap: Optional[int] = None,
                        cache: Optional[Dict[FrozenSet[Edge], int]] = None) -> int:
    """
    Smallest, over permutations of V, of the largest witnessing matching.

    A split of V together with the rest of G is a three-way partition, and
    relabelling its parts leaves the supported edges unchanged, so a cache
    shared across every V of one graph saves most of the matchings.
    """
    V = frozenset(V)
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_PERMS
    check_cap("permutation", cap, len(V))
    items = sorted(V)
    table = _subset_minimax(items, lambda S: witnessing_size(G, V, S, cache))
    return table[(1 << len(items)) - 1]


def witness_to_prefix(W: WitnessingMatching, G: nx.Graph, V: Iterable[int],
                      SV: Sequence[int]) -> Tuple[Tuple[int, ...], Matching]:
    """
    Turn a witnessing matching into a prefix cut matching of at least half its size.

    Edges crossing the split go with prefix SV1; edges leaving V go with the
    whole of SV. The larger class wins, ties going to the split edges.
    """
    V = frozenset(V)
    SV = tuple(SV)
    if SV != W.order:
        raise PreconditionError("Witnessing matching was built for a different permutation", clause="permutation")
    prefix = frozenset(W.prefix)
    crossing, leaving = set(), set()
    for u, v in W.matching:
        if u in V and v in V:
            crossing.add((u, v))
        else:
            leaving.add((u, v))
    if len(crossing) >= len(leaving):
        chosen_prefix, chosen = W.prefix, frozenset(crossing)
        for u, v in chosen:
            if (u in prefix) == (v in prefix):
                raise PreconditionError(f"Edge ({u}, {v}) is not supported by the split", clause="support")
    else:
        chosen_prefix, chosen = SV, frozenset(leaving)
    return tuple(chosen_prefix), chosen
